#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bloch/field.hpp"

namespace bloch {

// Element k*w~ + sum r_j p~_j of the primitive extension E.  Missing trailing
// coordinates of r count as zero, so elements built before a symbolic basis is
// complete stay valid.
struct ExtElement {
  std::int64_t k = 0;
  std::vector<std::int64_t> r;

  ExtElement() = default;
  ExtElement(std::int64_t k_, std::vector<std::int64_t> r_) : k(k_), r(std::move(r_)) {}

  std::int64_t coord(std::size_t j) const { return j < r.size() ? r[j] : 0; }
  bool is_zero() const;

  ExtElement& operator+=(const ExtElement& o);
  ExtElement& operator-=(const ExtElement& o);
  ExtElement& operator*=(std::int64_t n);

  friend bool operator==(const ExtElement& a, const ExtElement& b);
  friend bool operator!=(const ExtElement& a, const ExtElement& b) { return !(a == b); }
  // lexicographic on (k, r_1, r_2, ...)
  friend bool operator<(const ExtElement& a, const ExtElement& b);

  std::string to_string() const;
};

ExtElement operator+(ExtElement a, const ExtElement& b);
ExtElement operator-(ExtElement a, const ExtElement& b);
ExtElement operator-(const ExtElement& a);
ExtElement operator*(std::int64_t n, ExtElement a);

struct BasisData;

// Torsion generator w plus free generators p_1..p_r.  A verified basis checks
// multiplicative independence; a symbolic basis treats each generator as a free
// log symbol and makes no independence claim (used for torsion cycles and
// triangulation data where only formal identities matter).
class MultBasis {
 public:
  MultBasis() = default;

  static MultBasis create(const NumberField& nf, std::vector<FieldElement> free_gens, bool saturated,
                          const std::optional<FieldElement>& torsion_gen = std::nullopt);
  static MultBasis symbolic(const NumberField& nf, std::vector<FieldElement> symbols,
                            const std::optional<FieldElement>& torsion_gen = std::nullopt);

  const NumberField& field() const;
  std::int64_t m() const;
  const FieldElement& w() const;
  std::size_t rank() const;
  const FieldElement& free_gen(std::size_t j) const;
  const std::vector<FieldElement>& free_gens() const;
  bool saturated() const;
  bool is_symbolic() const;

  ExtElement iota(std::int64_t n) const { return ExtElement(n * m(), {}); }
  ExtElement half() const { return ExtElement(m() / 2, {}); }

  bool same_as(const MultBasis& o) const { return d_ == o.d_; }
  const BasisData& data() const { return *d_; }

 private:
  std::shared_ptr<const BasisData> d_;
};

// Growing table of log symbols for formal computations: a value that differs
// from a known symbol by a root of unity reuses that symbol plus a torsion shift.
class SymbolTable {
 public:
  explicit SymbolTable(NumberField nf, std::optional<FieldElement> torsion_gen = std::nullopt);

  ExtElement log(const FieldElement& value);
  // a fresh symbol even when the value is already known
  ExtElement fresh(const FieldElement& value);
  MultBasis basis() const;
  std::size_t size() const { return values_.size(); }

 private:
  NumberField nf_;
  FieldElement w_;
  std::int64_t m_;
  std::vector<FieldElement> values_;
};

// basis of the rational primes dividing the given values (field of degree 1),
// saturated since Q* / +-1 is free on the primes
MultBasis rational_prime_basis(const NumberField& nf, const std::vector<mpq_class>& values);

// trial division below 10^6; a leftover cofactor is returned as if prime
std::vector<mpz_class> prime_divisors(const mpz_class& n);

FieldElement pi(const ExtElement& e, const MultBasis& basis);

struct LogLiftOptions {
  std::int64_t exponent_bound = 64;
};

// section of pi: k in [0, m), exact verification.  NotInSubgroup on failure.
ExtElement log_lift(const FieldElement& z, const MultBasis& basis, const LogLiftOptions& opt = {});

struct WedgeTerm {
  std::int64_t coeff;
  ExtElement left;
  ExtElement right;
};
using WedgeElement = std::vector<WedgeTerm>;

struct WedgeVerdict {
  bool zero = true;
  // set when the basis is not asserted saturated: a nonzero verdict is then
  // only relative to the subgroup generated by the basis
  bool basis_relative = false;
  std::string detail;
};

// decision in the exterior square of E (coordinates w~, p~_j free)
WedgeVerdict wedge_is_zero(const WedgeElement& terms, const MultBasis& basis);
// decision in the exterior square of F*: the w-coordinate lives in Z/m
WedgeVerdict wedge_is_zero_mod_torsion(const WedgeElement& terms, const MultBasis& basis);

struct LogLift {
  MultBasis basis;
  EmbeddingContext embedding;
  Complex lambda_w;
  std::vector<Complex> lambda_p;
  std::int64_t k_unit = 0;

  Complex lift(const ExtElement& e) const;
};

struct Branch {
  std::optional<Complex> lambda_w;
  std::vector<std::optional<Complex>> lambda_p;
};

LogLift cover_to_C(const MultBasis& basis, const EmbeddingContext& ctx, const Branch& branch = {});

}  // namespace bloch
