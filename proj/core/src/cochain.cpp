#include "bloch/cochain.hpp"

#include <algorithm>
#include <numeric>

#include "bloch/errors.hpp"

namespace bloch {

// ---------------------------------------------------------------- Logarithm

Logarithm Logarithm::verified(MultBasis basis) {
  Logarithm L;
  L.mode_ = Mode::verified;
  L.nf_ = basis.field();
  L.basis_ = std::move(basis);
  L.stale_ = false;
  return L;
}

Logarithm Logarithm::symbolic(const NumberField& nf, const std::optional<FieldElement>& torsion_gen) {
  Logarithm L;
  L.mode_ = Mode::symbolic;
  L.nf_ = nf;
  L.table_.emplace(nf, torsion_gen);
  return L;
}

Logarithm Logarithm::rational(const NumberField& nf) {
  if (nf.degree() != 1) input_error("FieldMismatch", "rational logarithm needs a field of degree 1");
  Logarithm L;
  L.mode_ = Mode::rational;
  L.nf_ = nf;
  return L;
}

ExtElement Logarithm::operator()(const FieldElement& x) {
  switch (mode_) {
    case Mode::verified:
      return log_lift(x, *basis_);
    case Mode::symbolic: {
      const std::size_t before = table_->size();
      ExtElement e = table_->log(x);
      if (table_->size() != before) stale_ = true;
      return e;
    }
    case Mode::rational:
      prepare({x});
      return log_lift(x, basis());
  }
  return {};
}

void Logarithm::prepare(const std::vector<FieldElement>& xs) {
  if (mode_ != Mode::rational) {
    for (const auto& x : xs) (*this)(x);
    return;
  }
  for (const auto& x : xs) {
    if (x.is_zero()) math_error("NotInSubgroup", "log of zero");
    const mpq_class& q = x.coeffs()[0];
    for (const mpz_class* part : {&q.get_num(), &q.get_den()})
      for (const auto& p : prime_divisors(*part))
        if (std::find(primes_.begin(), primes_.end(), p) == primes_.end()) {
          primes_.push_back(p);
          stale_ = true;
        }
  }
}

MultBasis Logarithm::basis() {
  if (stale_ || !basis_) {
    if (mode_ == Mode::symbolic) {
      basis_ = table_->basis();
    } else if (mode_ == Mode::rational) {
      std::vector<FieldElement> gens;
      for (const auto& p : primes_) gens.push_back(nf_.from_rational(mpq_class(p)));
      basis_ = MultBasis::create(nf_, gens, true);
    }
    stale_ = false;
  }
  return *basis_;
}

// ------------------------------------------------------------------- cycles

namespace {

constexpr std::array<std::array<int, 2>, 6> kEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int perm_sign(const std::array<int, 4>& p) {
  int s = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) s = -s;
  return s;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

int edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int k = 0; k < 6; ++k)
    if (kEdges[static_cast<std::size_t>(k)][0] == i && kEdges[static_cast<std::size_t>(k)][1] == j) return k;
  input_error("InvalidGluing", "no edge " + std::to_string(i) + std::to_string(j));
}

std::array<int, 2> edge_vertices(int index) { return kEdges.at(static_cast<std::size_t>(index)); }

Triangulated3Cycle Triangulated3Cycle::create(int simplices, std::vector<Gluing> gluings,
                                              std::vector<int> orientations) {
  if (simplices <= 0) input_error("InvalidGluing", "no simplices");
  if (orientations.empty()) orientations.assign(static_cast<std::size_t>(simplices), 1);
  if (static_cast<int>(orientations.size()) != simplices) input_error("InvalidGluing", "one orientation per simplex");
  for (int s : orientations)
    if (s != 1 && s != -1) input_error("InvalidGluing", "orientations are +-1");

  // both directions of every gluing
  std::vector<std::optional<Gluing>> at(static_cast<std::size_t>(4 * simplices));
  auto slot = [&](int tet, int face) -> std::optional<Gluing>& { return at[static_cast<std::size_t>(4 * tet + face)]; };
  auto put = [&](const Gluing& g) {
    auto& cur = slot(g.tet, g.face);
    if (cur && (cur->other_tet != g.other_tet || cur->other_face != g.other_face || cur->perm != g.perm))
      input_error("InvalidGluing", "face " + std::to_string(g.face) + " of simplex " + std::to_string(g.tet) +
                                       " glued twice");
    cur = g;
  };
  for (const Gluing& g : gluings) {
    if (g.tet < 0 || g.tet >= simplices || g.other_tet < 0 || g.other_tet >= simplices)
      input_error("InvalidGluing", "simplex index out of range");
    if (g.face < 0 || g.face > 3 || g.other_face < 0 || g.other_face > 3) input_error("InvalidGluing", "face out of range");
    std::array<int, 4> inv{-1, -1, -1, -1};
    for (int v = 0; v < 4; ++v) {
      const int t = g.perm[static_cast<std::size_t>(v)];
      if (t < 0 || t > 3 || inv[static_cast<std::size_t>(t)] != -1) input_error("InvalidGluing", "not a permutation");
      inv[static_cast<std::size_t>(t)] = v;
    }
    if (g.perm[static_cast<std::size_t>(g.face)] != g.other_face)
      input_error("InvalidGluing", "permutation does not carry the face to its partner");
    if (g.tet == g.other_tet && g.face == g.other_face) input_error("InvalidGluing", "face glued to itself");
    put(g);
    put(Gluing{g.other_tet, g.other_face, g.tet, g.face, inv});
  }

  Triangulated3Cycle K;
  K.signs_ = std::move(orientations);
  K.closed_ = std::all_of(at.begin(), at.end(), [](const auto& g) { return g.has_value(); });
  K.ordered_ = true;
  UnionFind uf(static_cast<std::size_t>(6 * simplices));
  for (const auto& og : at) {
    if (!og) continue;
    const Gluing& g = *og;
    K.gluings_.push_back(g);
    if (K.signs_[static_cast<std::size_t>(g.tet)] * K.signs_[static_cast<std::size_t>(g.other_tet)] * perm_sign(g.perm) != -1)
      input_error("InvalidGluing", "gluing of simplex " + std::to_string(g.tet) + " face " + std::to_string(g.face) +
                                       " does not respect the orientations");
    int last = -1;
    for (int v = 0; v < 4; ++v) {
      if (v == g.face) continue;
      if (g.perm[static_cast<std::size_t>(v)] < last) K.ordered_ = false;
      last = g.perm[static_cast<std::size_t>(v)];
    }
    for (int e = 0; e < 6; ++e) {
      const auto [i, j] = kEdges[static_cast<std::size_t>(e)];
      if (i == g.face || j == g.face) continue;
      const int e2 = edge_index(g.perm[static_cast<std::size_t>(i)], g.perm[static_cast<std::size_t>(j)]);
      uf.unite(6 * g.tet + e, 6 * g.other_tet + e2);
    }
  }
  // classes numbered by first appearance, simplex-major
  std::vector<int> number(static_cast<std::size_t>(6 * simplices), -1);
  K.classes_.resize(static_cast<std::size_t>(6 * simplices));
  for (int x = 0; x < 6 * simplices; ++x) {
    int& n = number[static_cast<std::size_t>(uf.find(x))];
    if (n < 0) n = K.class_count_++;
    K.classes_[static_cast<std::size_t>(x)] = n;
  }
  return K;
}

std::vector<std::vector<std::array<int, 2>>> Triangulated3Cycle::edge_class_members() const {
  std::vector<std::vector<std::array<int, 2>>> out(static_cast<std::size_t>(class_count_));
  for (int t = 0; t < size(); ++t)
    for (int e = 0; e < 6; ++e) out[static_cast<std::size_t>(edge_class(t, e))].push_back({t, e});
  return out;
}

// ---------------------------------------------------------------- cochains

IdealCochain make_ideal_cochain(const Triangulated3Cycle& K, std::vector<FieldElement> values) {
  if (static_cast<int>(values.size()) != K.edge_class_count())
    input_error("NotIdeal", "one value per edge class expected");
  for (const auto& v : values)
    if (v.is_zero()) math_error("NotIdeal", "zero label");
  IdealCochain c{K, std::move(values), {}};
  for (int t = 0; t < K.size(); ++t) {
    auto v = [&](int e) { return c.values[static_cast<std::size_t>(K.edge_class(t, e))]; };
    const FieldElement den = v(1) * v(4);
    const FieldElement z = v(2) * v(3) / den;
    if (z.is_zero() || z.is_one() || !(v(0) * v(5) / den == z.field().one() - z))
      math_error("NotIdeal", "simplex " + std::to_string(t) + " has no cross-ratio");
    c.z.push_back(z);
  }
  return c;
}

LiftedCochain lift_cochain(const IdealCochain& c, Logarithm& log) {
  LiftedCochain out{c.cycle, {}, {}};
  for (const auto& v : c.values) out.labels.push_back(log(v));
  out.basis = log.basis();
  return out;
}

SimplexLabels simplex_labels(const LiftedCochain& c, int tet) {
  SimplexLabels out;
  for (int e = 0; e < 6; ++e) out[static_cast<std::size_t>(e)] = c.labels[static_cast<std::size_t>(c.cycle.edge_class(tet, e))];
  return out;
}

Flattening sigma_simplex(const SimplexLabels& c, const MultBasis& basis) {
  const ExtElement e = c[2] + c[3] - c[1] - c[4];
  const ExtElement f = c[0] + c[5] - c[1] - c[4];
  try {
    return make_flattening(e, f, basis);
  } catch (const Error& err) {
    if (err.code() != "NotAFlattening") throw;
    math_error("NotIdeal", "labels do not give a flattening: " + std::string(err.what()));
  }
}

ExtBlochSum sigma_hat(const LiftedCochain& c) {
  ExtBlochSum out(c.basis);
  for (int t = 0; t < c.cycle.size(); ++t) out.add(c.cycle.sign(t), sigma_simplex(simplex_labels(c, t), c.basis));
  return out;
}

WedgeElement mu(const std::array<ExtElement, 3>& c) {
  return {{-1, c[0], c[1]}, {1, c[0], c[2]}, {-1, c[1], c[2]}, {1, c[1], c[1]}};
}

std::array<std::array<ExtElement, 3>, 4> faces(const SimplexLabels& c) {
  std::array<std::array<ExtElement, 3>, 4> out;
  for (int j = 0; j < 4; ++j) {
    std::array<int, 3> v{};
    int n = 0;
    for (int i = 0; i < 4; ++i)
      if (i != j) v[static_cast<std::size_t>(n++)] = i;
    out[static_cast<std::size_t>(j)] = {c[static_cast<std::size_t>(edge_index(v[0], v[1]))],
                                        c[static_cast<std::size_t>(edge_index(v[0], v[2]))],
                                        c[static_cast<std::size_t>(edge_index(v[1], v[2]))]};
  }
  return out;
}

// ----------------------------------------------------------- edge conditions

namespace {

// log-parameter of edge index e for the flattening (e, f)
ExtElement log_parameter(const Flattening& fl, int edge) {
  switch (edge) {
    case 0:
    case 5:
      return fl.e;
    case 2:
    case 3:
      return -fl.f;
    default:
      return fl.f - fl.e;
  }
}

}  // namespace

EdgeReport edge_conditions(const Triangulated3Cycle& K, const std::vector<Flattening>& flattenings) {
  if (static_cast<int>(flattenings.size()) != K.size()) input_error("InvalidGluing", "one flattening per simplex");
  EdgeReport r;
  r.sums.assign(static_cast<std::size_t>(K.edge_class_count()), ExtElement());
  for (int t = 0; t < K.size(); ++t)
    for (int e = 0; e < 6; ++e)
      r.sums[static_cast<std::size_t>(K.edge_class(t, e))] += K.sign(t) * log_parameter(flattenings[static_cast<std::size_t>(t)], e);
  for (std::size_t c = 0; c < r.sums.size(); ++c)
    if (!r.sums[c].is_zero()) r.violations.push_back(static_cast<int>(c));
  return r;
}

std::vector<Flattening> translate_flattenings(const std::vector<FieldElement>& z,
                                              const std::vector<std::array<std::int64_t, 2>>& pq, Logarithm& log) {
  if (z.size() != pq.size()) input_error("InvalidGluing", "one translate pair per simplex");
  std::vector<std::array<ExtElement, 2>> logs;
  for (const auto& x : z) {
    if (x.is_zero() || x.is_one()) math_error("NotIdeal", "shape in {0, 1}");
    logs.push_back({log(x), log(x.field().one() - x)});
  }
  const MultBasis B = log.basis();
  std::vector<Flattening> out;
  for (std::size_t i = 0; i < z.size(); ++i)
    out.push_back(make_flattening(logs[i][0] + B.iota(pq[i][0]), logs[i][1] + B.iota(pq[i][1]), B));
  return out;
}

std::optional<std::vector<std::array<std::int64_t, 2>>> search_flattening(const Triangulated3Cycle& K,
                                                                         const std::vector<FieldElement>& z,
                                                                         Logarithm& log, int bound) {
  const std::size_t n = z.size();
  const std::vector<std::array<std::int64_t, 2>> zero(n, {0, 0});
  const std::vector<Flattening> base = translate_flattenings(z, zero, log);
  const EdgeReport r0 = edge_conditions(K, base);
  // translates only move the w-coordinate, so the free part must already vanish
  for (const auto& s : r0.sums)
    if (!(ExtElement(0, s.r).is_zero())) return std::nullopt;

  // sum_c = k_c + m * (sum over simplices of eps (a_c p + b_c q))
  const std::int64_t m = log.basis().m();
  const std::size_t classes = r0.sums.size();
  std::vector<std::array<std::int64_t, 2>> coeff(n * classes, {0, 0});
  for (int t = 0; t < K.size(); ++t)
    for (int e = 0; e < 6; ++e) {
      const int sgn = K.sign(t);
      auto& cf = coeff[static_cast<std::size_t>(t) * classes + static_cast<std::size_t>(K.edge_class(t, e))];
      if (e == 0 || e == 5) cf[0] += sgn;
      else if (e == 2 || e == 3) cf[1] -= sgn;
      else {
        cf[0] -= sgn;
        cf[1] += sgn;
      }
    }
  std::vector<std::int64_t> target(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    if (r0.sums[c].k % m != 0) return std::nullopt;
    target[c] = -r0.sums[c].k / m;
  }

  const std::size_t vars = 2 * n;
  double space = 1;
  for (std::size_t i = 0; i < vars; ++i) space *= 2 * bound + 1;
  if (space > 5e7) math_error("SearchTooLarge", "flattening search space too large");
  std::vector<std::int64_t> x(vars, -bound);
  std::vector<std::int64_t> acc(classes);
  while (true) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t c = 0; c < classes; ++c)
        acc[c] += coeff[t * classes + c][0] * x[2 * t] + coeff[t * classes + c][1] * x[2 * t + 1];
    if (acc == target) {
      std::vector<std::array<std::int64_t, 2>> out(n);
      for (std::size_t t = 0; t < n; ++t) out[t] = {x[2 * t], x[2 * t + 1]};
      return out;
    }
    std::size_t i = vars;
    while (i > 0 && x[i - 1] == bound) x[--i] = -bound;
    if (i == 0) return std::nullopt;
    ++x[i - 1];
  }
}

// -------------------------------------------------------------- Z/2 twist

TwistResult z2_twist(const LiftedCochain& c, const std::vector<int>& alpha) {
  const Triangulated3Cycle& K = c.cycle;
  if (static_cast<int>(alpha.size()) != K.edge_class_count()) input_error("NotACocycle", "one sign per edge class");
  for (int a : alpha)
    if (a != 1 && a != -1) input_error("NotACocycle", "values must be +-1");
  auto a_of = [&](int t, int i, int j) { return alpha[static_cast<std::size_t>(K.edge_class(t, edge_index(i, j)))]; };
  for (int t = 0; t < K.size(); ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k)
          if (a_of(t, i, j) * a_of(t, j, k) != a_of(t, i, k))
            math_error("NotACocycle", "coboundary condition fails on simplex " + std::to_string(t));

  const MultBasis& B = c.basis;
  std::vector<FieldElement> values;
  LiftedCochain lifted = c;
  for (std::size_t e = 0; e < c.labels.size(); ++e) {
    FieldElement v = pi(c.labels[e], B);
    if (alpha[e] == -1) {
      v = -v;
      lifted.labels[e] += B.half();
    }
    values.push_back(v);
  }
  TwistResult out{make_ideal_cochain(K, values), 0, sigma_hat(lifted) - sigma_hat(c), ExtBlochSum(B)};
  for (int t = 0; t < K.size(); ++t) {
    if (a_of(t, 0, 1) == -1 && a_of(t, 1, 2) == -1 && a_of(t, 2, 3) == -1) {
      out.class_bit ^= 1;
      out.predicted.add_chi(B.iota(1), K.sign(t));
    }
  }
  return out;
}

// ------------------------------------------------------------- SL(2), flags

FieldElement det2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

FieldElement det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Vec2 apply(const Mat2& g, const Vec2& v) { return {g[0] * v[0] + g[1] * v[1], g[2] * v[0] + g[3] * v[1]}; }

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

ExtBlochSum lambda_sl2(const std::vector<SL2Tuple>& tuples, const Vec2& v, Logarithm& log) {
  std::vector<SimplexLabels> labels;
  for (const auto& t : tuples) {
    std::array<Vec2, 4> u;
    for (std::size_t i = 0; i < 4; ++i) u[i] = bloch::apply(t.g[i], v);
    SimplexLabels c;
    for (int e = 0; e < 6; ++e) {
      const auto [i, j] = kEdges[static_cast<std::size_t>(e)];
      const FieldElement d = det2(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
      if (d.is_zero()) math_error("NotGeneralPosition", "orbit vectors are not in general position");
      c[static_cast<std::size_t>(e)] = log(d);
    }
    labels.push_back(c);
  }
  const MultBasis B = log.basis();
  ExtBlochSum out(B);
  for (std::size_t k = 0; k < tuples.size(); ++k) out.add(tuples[k].sign, sigma_simplex(labels[k], B));
  return out;
}

std::vector<SL2Tuple> cyclic_cycle(const FieldElement& c, unsigned long n) {
  const NumberField& F = c.field();
  const FieldElement zero = F.zero(), one = F.one();
  const Mat2 g{c, -one, one, zero};
  // odd n: h1 e1 = (1, -1), h2 e1 = (1, 1).  For even n those meet a zero
  // determinant, so h1 e1 = (1, 0), h2 e1 = (1, -1) instead
  const bool even = n % 2 == 0;
  const Mat2 h1 = even ? Mat2{one, zero, zero, one} : Mat2{one, zero, -one, one};
  const Mat2 h2 = even ? Mat2{one, zero, -one, one} : Mat2{one, zero, one, one};
  const Mat2 gh1 = mul(g, h1);
  std::vector<SL2Tuple> out;
  Mat2 gk = g;  // g^k
  for (unsigned long k = 1; k <= n; ++k) {
    const Mat2 gk1 = mul(g, gk);
    out.push_back(SL2Tuple{1, {h1, gh1, mul(gk, h2), mul(gk1, h2)}});
    gk = gk1;
  }
  return out;
}

namespace {

struct SourcedVec {
  Vec3 v;
  int basis = -1;  // which basis the vector came from, -1 when unknown
};

ExtElement point_log(const std::array<const SourcedVec*, 3>& s, Logarithm& log, const PointShifts* shifts) {
  const FieldElement d = det3(s[0]->v, s[1]->v, s[2]->v);
  if (d.is_zero()) math_error("NotGeneralPosition", "vanishing determinant");
  ExtElement out = log(d);
  if (shifts && !shifts->empty()) {
    std::array<int, 4> beta{0, 0, 0, 0};
    bool known = true;
    for (const auto* p : s) {
      if (p->basis < 0 || p->basis > 3) known = false;
      else ++beta[static_cast<std::size_t>(p->basis)];
    }
    if (known) {
      auto it = shifts->find(beta);
      if (it != shifts->end()) out += it->second;
    }
  }
  return out;
}

SimplexLabels alpha_labels(const std::array<SourcedVec, 4>& v, const SourcedVec& w, int i, Logarithm& log,
                           const PointShifts* shifts) {
  SimplexLabels c;
  for (int e = 0; e < 6; ++e) {
    const auto [j, k] = kEdges[static_cast<std::size_t>(e)];
    const SourcedVec* a = &v[static_cast<std::size_t>(j)];
    const SourcedVec* b = &v[static_cast<std::size_t>(k)];
    std::array<const SourcedVec*, 3> s;
    if (i <= j) s = {&w, a, b};
    else if (i <= k) s = {a, &w, b};
    else s = {a, b, &w};
    c[static_cast<std::size_t>(e)] = point_log(s, log, shifts);
  }
  return c;
}

std::array<SourcedVec, 4> unsourced(const std::array<Vec3, 4>& v) {
  return {SourcedVec{v[0]}, SourcedVec{v[1]}, SourcedVec{v[2]}, SourcedVec{v[3]}};
}

// (v_0, .., v_3)^i_w for bases given by index into F
template <std::size_t N>
Flattening flag_piece(const std::array<Basis3, N>& F, const std::array<int, 4>& which, const std::array<int, 4>& slot,
                      int w_basis, int w_slot, int i, Logarithm& log, const PointShifts* shifts) {
  std::array<SourcedVec, 4> v;
  for (std::size_t j = 0; j < 4; ++j)
    v[j] = SourcedVec{F[static_cast<std::size_t>(which[j])][static_cast<std::size_t>(slot[j])], which[j]};
  const SourcedVec w{F[static_cast<std::size_t>(w_basis)][static_cast<std::size_t>(w_slot)], w_basis};
  SimplexLabels c = alpha_labels(v, w, i, log, shifts);
  return sigma_simplex(c, log.basis());
}

}  // namespace

Flattening flag_term(const std::array<Vec3, 4>& v, const Vec3& w, int i, Logarithm& log) {
  if (i < 0 || i > 4) input_error("InvalidArgument", "flag term index out of range");
  SimplexLabels c = alpha_labels(unsourced(v), SourcedVec{w}, i, log, nullptr);
  return sigma_simplex(c, log.basis());
}

ExtBlochSum flag_lambda(const std::array<Basis3, 4>& F, Logarithm& log, const PointShifts& shifts) {
  std::vector<Flattening> terms;
  for (int i = 0; i < 4; ++i) {
    std::array<int, 4> slot{0, 0, 0, 0};
    slot[static_cast<std::size_t>(i)] = 1;
    terms.push_back(flag_piece(F, {0, 1, 2, 3}, slot, i, 0, i, log, &shifts));
  }
  ExtBlochSum out(log.basis());
  for (const auto& t : terms) out.add(1, t);
  return out;
}

bool general_position(const std::vector<Vec3>& vs) {
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b)
      for (std::size_t c = b + 1; c < vs.size(); ++c)
        if (det3(vs[a], vs[b], vs[c]).is_zero()) return false;
  return true;
}

bool is_lifted_five_term(const std::array<Flattening, 5>& fl) {
  const auto& [e0, f0] = fl[0];
  const auto& [e1, f1] = fl[1];
  const auto& [e2, f2] = fl[2];
  const auto& [e3, f3] = fl[3];
  const auto& [e4, f4] = fl[4];
  return e2 == e1 - e0 && e3 == e1 - e0 - f1 + f0 && f3 == f2 - f1 && e4 == f0 - f1 && f4 == f2 - f1 + e0;
}

bool FlagBoundaryReport::ok() const {
  return std::all_of(partial_ok.begin(), partial_ok.end(), [](bool b) { return b; }) && boundary_ok && reduces_to_zero;
}

FlagBoundaryReport flag_boundary_check(const std::array<Basis3, 5>& F, Logarithm& log) {
  std::vector<Vec3> all;
  for (const auto& b : F)
    for (const auto& v : b) all.push_back(v);
  if (!general_position(all)) math_error("NotGeneralPosition", "bases are not in general position");
  std::vector<FieldElement> dets;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b)
      for (std::size_t c = b + 1; c < all.size(); ++c) dets.push_back(det3(all[a], all[b], all[c]));
  log.prepare(dets);

  FlagBoundaryReport rep;
  // lambda(d F) = sum_j (-1)^j lambda(F without j)
  std::vector<std::pair<int, Flattening>> lam;
  for (int j = 0; j < 5; ++j) {
    std::array<int, 4> which{};
    int n = 0;
    for (int a = 0; a < 5; ++a)
      if (a != j) which[static_cast<std::size_t>(n++)] = a;
    for (int i = 0; i < 4; ++i) {
      std::array<int, 4> slot{0, 0, 0, 0};
      slot[static_cast<std::size_t>(i)] = 1;
      lam.push_back({j % 2 == 0 ? 1 : -1, flag_piece(F, which, slot, which[static_cast<std::size_t>(i)], 0, i, log, nullptr)});
    }
  }
  // the relation d^a(F0_1, .., Fa_2, .., F4_1) with w = Fa_1; superscript a - 1
  // on terms dropping an earlier vector, a otherwise
  std::vector<std::pair<int, Flattening>> rel;
  for (int a = 0; a < 5; ++a) {
    std::array<Flattening, 5> fl;
    for (int j = 0; j < 5; ++j) {
      std::array<int, 4> which{}, slot{};
      int n = 0;
      for (int b = 0; b < 5; ++b) {
        if (b == j) continue;
        which[static_cast<std::size_t>(n)] = b;
        slot[static_cast<std::size_t>(n)] = b == a ? 1 : 0;
        ++n;
      }
      fl[static_cast<std::size_t>(j)] = flag_piece(F, which, slot, a, 0, j < a ? a - 1 : a, log, nullptr);
    }
    rep.partial_ok[static_cast<std::size_t>(a)] = is_lifted_five_term(fl);
    for (int j = 0; j < 5; ++j) rel.push_back({j % 2 == 0 ? 1 : -1, fl[static_cast<std::size_t>(j)]});
  }
  // d(F0_1, .., F4_1): term j is (v without v_j)^j with w = v_j
  std::array<Flattening, 5> bd;
  for (int j = 0; j < 5; ++j) {
    std::array<int, 4> which{};
    int n = 0;
    for (int b = 0; b < 5; ++b)
      if (b != j) which[static_cast<std::size_t>(n++)] = b;
    bd[static_cast<std::size_t>(j)] = flag_piece(F, which, {0, 0, 0, 0}, j, 0, j, log, nullptr);
  }
  rep.boundary_ok = is_lifted_five_term(bd);

  const MultBasis B = log.basis();
  rep.lambda_of_boundary = ExtBlochSum(B);
  for (const auto& [s, fl] : lam) rep.lambda_of_boundary.add(s, fl);
  ExtBlochSum residual = rep.lambda_of_boundary;
  for (const auto& [s, fl] : rel) residual.add(-s, fl);
  for (int j = 0; j < 5; ++j) residual.add(j % 2 == 0 ? 1 : -1, bd[static_cast<std::size_t>(j)]);
  rep.reduces_to_zero = normalize(residual).is_zero();
  return rep;
}

std::array<Basis3, 4> stabilize(const SL2Tuple& t, const Basis3& base) {
  std::array<Basis3, 4> out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t b = 0; b < 3; ++b) {
      const Vec2 lower = bloch::apply(t.g[i], Vec2{base[b][1], base[b][2]});
      out[i][b] = Vec3{base[b][0], lower[0], lower[1]};
    }
  return out;
}

// ------------------------------------------------------------------ manifolds

ManifoldInvariant manifold_invariant(const ManifoldData& data, unsigned precision) {
  const Triangulated3Cycle& K = data.cycle;
  if (static_cast<int>(data.shapes.size()) != K.size()) input_error("InvalidGluing", "one shape per simplex");
  if (!K.closed()) input_error("InvalidGluing", "triangulation is not closed");
  for (const auto& z : data.shapes)
    if (z.is_zero() || z.is_one()) math_error("NotIdeal", "shape in {0, 1}");

  Logarithm log = Logarithm::symbolic(data.field);
  ManifoldInvariant out;
  if (data.flattenings) {
    out.translates = *data.flattenings;
  } else {
    auto found = search_flattening(K, data.shapes, log);
    if (!found) math_error("EdgeConditionFailed", "no flattening with |p|, |q| <= 4");
    out.translates = *found;
    out.searched = true;
  }
  const std::vector<Flattening> fl = translate_flattenings(data.shapes, out.translates, log);
  out.edges = edge_conditions(K, fl);
  if (!out.edges.ok())
    math_error("EdgeConditionFailed", "edge class " + std::to_string(out.edges.violations.front()) + " sums to " +
                                          out.edges.sums[static_cast<std::size_t>(out.edges.violations.front())].to_string());
  const MultBasis B = log.basis();
  out.element = ExtBlochSum(B);
  for (int t = 0; t < K.size(); ++t) out.element.add(K.sign(t), fl[static_cast<std::size_t>(t)]);
  out.bhat = is_in_Bhat(out.element);

  for (const SlotRegulator& sr : reg_vector(out.element, precision)) {
    EmbeddingContext ctx = data.field.embedding(sr.slot, precision);
    PrecisionScope scope(ctx.working_digits());
    Real d = 0;
    for (int t = 0; t < K.size(); ++t)
      d += Real(K.sign(t)) * bloch_wigner(ctx.evaluate(data.shapes[static_cast<std::size_t>(t)]), precision);
    out.slots.push_back(ManifoldSlot{sr, d});
  }
  if (data.obstruction) out.psl_liftable = psl_liftable(*data.obstruction, B);
  return out;
}

}  // namespace bloch
