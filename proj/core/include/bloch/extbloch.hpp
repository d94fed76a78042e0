#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bloch/extgroup.hpp"

namespace bloch {

struct Flattening {
  ExtElement e;
  ExtElement f;

  friend bool operator==(const Flattening& a, const Flattening& b) { return a.e == b.e && a.f == b.f; }
  friend bool operator<(const Flattening& a, const Flattening& b) {
    if (a.e != b.e) return a.e < b.e;
    return a.f < b.f;
  }
};

// checks pi(e) + pi(f) = 1 and pi(e) not in {0, 1}; NotAFlattening
Flattening make_flattening(const ExtElement& e, const ExtElement& f, const MultBasis& basis);
FieldElement cross_ratio(const Flattening& fl, const MultBasis& basis);

// (x, y, y/x, (1 - 1/x)/(1 - 1/y), (1 - x)/(1 - y)); DegenerateTuple
std::array<FieldElement, 5> five_term(const FieldElement& x, const FieldElement& y);

// completes a lifted five-term relation from its first two flattenings; f2 is
// log_lift(1 - x1/x0) unless supplied
std::array<Flattening, 5> lift_five_term(const Flattening& fl0, const Flattening& fl1, const MultBasis& basis,
                                         const std::optional<ExtElement>& f2 = std::nullopt);

struct FlatTerm {
  std::int64_t coeff;
  Flattening fl;
};

// sum of flattenings plus a chi term; chi_part is kept with k mod 2m once normalized
struct ExtBlochSum {
  MultBasis basis;
  std::vector<FlatTerm> terms;
  ExtElement chi_part;

  ExtBlochSum() = default;
  explicit ExtBlochSum(MultBasis b) : basis(std::move(b)) {}

  ExtBlochSum& add(std::int64_t n, const Flattening& fl);
  ExtBlochSum& add_chi(const ExtElement& e, std::int64_t n = 1);
  ExtBlochSum& operator+=(const ExtBlochSum& o);
  ExtBlochSum& operator-=(const ExtBlochSum& o);
  ExtBlochSum& operator*=(std::int64_t n);

  bool is_zero() const { return terms.empty() && chi_part.is_zero(); }
  std::string to_string() const;
};

ExtBlochSum operator+(ExtBlochSum a, const ExtBlochSum& b);
ExtBlochSum operator-(ExtBlochSum a, const ExtBlochSum& b);
ExtBlochSum operator*(std::int64_t n, ExtBlochSum a);

ExtBlochSum chi(const ExtElement& e, const MultBasis& basis);

// same sum over a basis whose generators extend those of s.basis (a grown
// symbol table, say); BasisMismatch otherwise
ExtBlochSum rebase(const ExtBlochSum& s, const MultBasis& target);

// Merges translates (e + p, f + q) of one flattening (p, q counting iota(1))
// into the representative with both k in [0, m), the difference going into
// chi_part as chi(q e - p f + p q).  chi_part reduced to k in [0, 2m).
ExtBlochSum normalize(const ExtBlochSum& s);
// equal normal forms
bool same_element(const ExtBlochSum& a, const ExtBlochSum& b);

WedgeElement nu_hat(const ExtBlochSum& s);
WedgeVerdict is_in_Bhat(const ExtBlochSum& s);

struct BlochTerm {
  std::int64_t coeff;
  FieldElement z;
};

struct BlochSum {
  NumberField field;
  std::vector<BlochTerm> terms;

  BlochSum() = default;
  explicit BlochSum(NumberField nf) : field(std::move(nf)) {}
  BlochSum& add(std::int64_t n, const FieldElement& z);
  std::string to_string() const;
};

// merge equal z, drop zero coefficients, sort by z
BlochSum normalize(const BlochSum& s);
bool operator==(const BlochSum& a, const BlochSum& b);

// image in the pre-Bloch group; chi terms vanish
BlochSum project(const ExtBlochSum& s);

// z ^ (1 - z) summed, over the log_lift coordinates of the basis
WedgeElement nu(const BlochSum& s, const MultBasis& basis);
WedgeVerdict is_in_B(const BlochSum& s, const MultBasis& basis);

// ---- PSL version: odd flattenings, half-translates and chi-bar on E/Z

struct PSLFlattening {
  ExtElement e;
  ExtElement f;
  int se = 1;  // se*pi(e) + sf*pi(f) = 1
  int sf = 1;
};

struct PSLTerm {
  std::int64_t coeff;
  PSLFlattening fl;
};

struct PSLSum {
  MultBasis basis;
  std::vector<PSLTerm> terms;
  ExtElement chi_bar;  // k in [0, m) once normalized
  std::string to_string() const;
};

PSLFlattening make_psl_flattening(const ExtElement& e, const ExtElement& f, const MultBasis& basis);
// half-translates merged with chi-bar(b e - a f + a b/2); chi_bar mod iota(1)
PSLSum normalize(const PSLSum& s);
// flattenings map to themselves, chi(c) to chi-bar(2c)
PSLSum psl_project(const ExtBlochSum& s);
// true when x is a square in F*, i.e. the class with obstruction x lifts
bool psl_liftable(const FieldElement& x, const MultBasis& basis);

// ---- coverings and the Galois action

// Apply the covering of tau (given by the image of the field generator) from
// s.basis to target: w~ goes to a w~' with w'^a = tau(w), p~_j to the log_lift
// of tau(p_j), and chi(c) to chi(a Psi(c)) since Psi(1) = a.
ExtBlochSum apply_covering(const ExtBlochSum& s, const MultBasis& target, const FieldElement& tau_gen);
ExtBlochSum galois_apply(const FieldElement& tau_gen, const ExtBlochSum& s);
BlochSum galois_apply(const FieldElement& tau_gen, const BlochSum& s);

}  // namespace bloch
