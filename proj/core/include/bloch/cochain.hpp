#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bloch/regulator.hpp"

namespace bloch {

// ---- logarithms: sections of pi used to lift cochains

// Three flavours.  verified: log_lift against a fixed basis.  symbolic: one
// free symbol per value up to roots of unity.  rational: over a field of
// degree 1, a basis of the primes seen so far, grown on demand (so logs are
// additive up to iota(1)).  The basis only grows; results built on an older
// snapshot can be moved to a newer one with rebase().
class Logarithm {
 public:
  static Logarithm verified(MultBasis basis);
  static Logarithm symbolic(const NumberField& nf, const std::optional<FieldElement>& torsion_gen = std::nullopt);
  static Logarithm rational(const NumberField& nf);

  ExtElement operator()(const FieldElement& x);
  // registers the values up front so the basis is built once (rational mode);
  // the other modes simply take the logs
  void prepare(const std::vector<FieldElement>& xs);
  MultBasis basis();
  const NumberField& field() const { return nf_; }

 private:
  enum class Mode { verified, symbolic, rational };
  Mode mode_ = Mode::verified;
  NumberField nf_;
  std::optional<MultBasis> basis_;
  std::optional<SymbolTable> table_;
  std::vector<mpz_class> primes_;
  bool stale_ = true;
};

// ---- 3-cycles

// edges of a simplex in the order 01, 02, 03, 12, 13, 23
int edge_index(int i, int j);
std::array<int, 2> edge_vertices(int index);

struct Gluing {
  int tet;
  int face;
  int other_tet;
  int other_face;
  std::array<int, 4> perm;  // vertex v of tet goes to perm[v] of other_tet
};

class Triangulated3Cycle {
 public:
  // InvalidGluing on inconsistent data (bad permutation, face glued twice,
  // gluings that do not agree in both directions, orientation mismatch)
  static Triangulated3Cycle create(int simplices, std::vector<Gluing> gluings, std::vector<int> orientations);

  int size() const { return static_cast<int>(signs_.size()); }
  int sign(int tet) const { return signs_[static_cast<std::size_t>(tet)]; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  bool closed() const { return closed_; }
  // every gluing preserves the vertex order
  bool ordered() const { return ordered_; }

  int edge_class(int tet, int edge) const { return classes_[static_cast<std::size_t>(tet * 6 + edge)]; }
  int edge_class_count() const { return class_count_; }
  // (tet, edge) pairs in each class
  std::vector<std::vector<std::array<int, 2>>> edge_class_members() const;

 private:
  std::vector<int> signs_;
  std::vector<Gluing> gluings_;
  std::vector<int> classes_;
  int class_count_ = 0;
  bool closed_ = false;
  bool ordered_ = false;
};

// ---- cochains

// F*-labels per edge class with the cross-ratio of each simplex:
// c03 c12 / (c02 c13) = z and c01 c23 / (c02 c13) = 1 - z
struct IdealCochain {
  Triangulated3Cycle cycle;
  std::vector<FieldElement> values;
  std::vector<FieldElement> z;
};
// NotIdeal when the ratios fail on some simplex
IdealCochain make_ideal_cochain(const Triangulated3Cycle& K, std::vector<FieldElement> values);

struct LiftedCochain {
  Triangulated3Cycle cycle;
  MultBasis basis;
  std::vector<ExtElement> labels;  // per edge class
};
LiftedCochain lift_cochain(const IdealCochain& c, Logarithm& log);

// labels c01, c02, c03, c12, c13, c23 of one simplex
using SimplexLabels = std::array<ExtElement, 6>;

// (c03 + c12 - c02 - c13, c01 + c23 - c02 - c13); NotIdeal if it is no flattening
Flattening sigma_simplex(const SimplexLabels& c, const MultBasis& basis);
SimplexLabels simplex_labels(const LiftedCochain& c, int tet);

// sum of eps_i sigma(c^i); NotIdeal when the lift does not project to an ideal cochain
ExtBlochSum sigma_hat(const LiftedCochain& c);

// mu on a 2-simplex with labels c01, c02, c12
WedgeElement mu(const std::array<ExtElement, 3>& c);
// labels of the faces of a simplex, face j opposite vertex j, each as (c01, c02, c12)
std::array<std::array<ExtElement, 3>, 4> faces(const SimplexLabels& c);

// ---- edge conditions and flattening search

struct EdgeReport {
  std::vector<ExtElement> sums;  // per edge class
  std::vector<int> violations;
  bool ok() const { return violations.empty(); }
};

// log-parameters e on edges 01, 23; -f on 03, 12; f - e on 02, 13, times eps
EdgeReport edge_conditions(const Triangulated3Cycle& K, const std::vector<Flattening>& flattenings);

// flattenings (log z + p iota(1), log(1 - z) + q iota(1)) from translate data
std::vector<Flattening> translate_flattenings(const std::vector<FieldElement>& z,
                                              const std::vector<std::array<std::int64_t, 2>>& pq, Logarithm& log);

// first (p_0, q_0, p_1, ...) in lexicographic order with |p|, |q| <= bound
// passing the edge conditions; nullopt if there is none
std::optional<std::vector<std::array<std::int64_t, 2>>> search_flattening(const Triangulated3Cycle& K,
                                                                         const std::vector<FieldElement>& z,
                                                                         Logarithm& log, int bound = 4);

// ---- Z/2 twist

struct TwistResult {
  IdealCochain twisted;
  int class_bit = 0;
  ExtBlochSum difference;  // sigma(c~') - sigma(c~), c~' the half-lift
  ExtBlochSum predicted;   // sum eps_i chi(delta_i)
};

// alpha: +-1 per edge class; NotACocycle unless alpha_ij alpha_jk = alpha_ik on every simplex
TwistResult z2_twist(const LiftedCochain& c, const std::vector<int>& alpha);

// ---- SL(2) and flags

using Vec2 = std::array<FieldElement, 2>;
using Mat2 = std::array<FieldElement, 4>;  // row major
using Vec3 = std::array<FieldElement, 3>;
using Basis3 = std::array<Vec3, 3>;

FieldElement det2(const Vec2& a, const Vec2& b);
FieldElement det3(const Vec3& a, const Vec3& b, const Vec3& c);
Vec2 apply(const Mat2& g, const Vec2& v);
Mat2 mul(const Mat2& a, const Mat2& b);

struct SL2Tuple {
  int sign = 1;
  std::array<Mat2, 4> g;
};

// sum of sign * sigma(Gamma(g_0 v, ..., g_3 v)); NotGeneralPosition on a vanishing det
ExtBlochSum lambda_sl2(const std::vector<SL2Tuple>& tuples, const Vec2& v, Logarithm& log);

// g = [[c, -1], [1, 0]] with c = x + 1/x, n = order of x; the cycle
// sum_k (h1, g h1, g^k h2, g^(k+1) h2); h1 e1 = (1, -1), h2 e1 = (1, 1) for odd n,
// (1, 0) and (1, -1) for even n
std::vector<SL2Tuple> cyclic_cycle(const FieldElement& c, unsigned long n);

// (v_0, .., v_3)^i_w: sigma of the cochain log det with w inserted at position i
Flattening flag_term(const std::array<Vec3, 4>& v, const Vec3& w, int i, Logarithm& log);

// shifts added to the log of a marked point (x_0, .., x_3), x_0 + .. + x_3 = 3
using PointShifts = std::map<std::array<int, 4>, ExtElement>;

// sum over i of (F0_1, .., Fi_2, .., F3_1)^i with w = Fi_1
ExtBlochSum flag_lambda(const std::array<Basis3, 4>& F, Logarithm& log, const PointShifts& shifts = {});

// general position: any three of the vectors independent
bool general_position(const std::vector<Vec3>& vs);

struct FlagBoundaryReport {
  std::array<bool, 5> partial_ok{};  // d^a(v^(a)) with w = Fa_1 is a lifted five-term relation
  bool boundary_ok = false;          // d(F0_1, .., F4_1) likewise
  bool reduces_to_zero = false;      // lambda(d F) minus those relations has zero normal form
  ExtBlochSum lambda_of_boundary;
  bool ok() const;
};

FlagBoundaryReport flag_boundary_check(const std::array<Basis3, 5>& F, Logarithm& log);

// checks the five equations on flattenings listed in relation order
bool is_lifted_five_term(const std::array<Flattening, 5>& fl);

// SL(2) tuple stabilized into SL(3) acting on bases: F_i = diag(1, g_i) B
std::array<Basis3, 4> stabilize(const SL2Tuple& t, const Basis3& base);

// ---- manifold fixtures

struct ManifoldData {
  NumberField field;
  Triangulated3Cycle cycle;
  std::vector<FieldElement> shapes;
  std::optional<std::vector<std::array<std::int64_t, 2>>> flattenings;
  std::optional<FieldElement> obstruction;  // PSL lift obstruction element, when supplied
};

struct ManifoldSlot {
  SlotRegulator reg;
  Real bloch_wigner;  // sum eps_i D(z_i)
};

struct ManifoldInvariant {
  ExtBlochSum element;
  std::vector<std::array<std::int64_t, 2>> translates;
  bool searched = false;  // translates found by search_flattening
  EdgeReport edges;
  WedgeVerdict bhat;
  std::vector<ManifoldSlot> slots;
  std::optional<bool> psl_liftable;
};

// EdgeConditionFailed when the supplied (or searched) translates violate the
// edge conditions; NotIdeal for shapes 0 or 1
ManifoldInvariant manifold_invariant(const ManifoldData& data, unsigned precision = 50);

}  // namespace bloch
