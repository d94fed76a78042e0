#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bloch/numeric.hpp"

namespace bloch {

// rational polynomial, coefficients low to high, no trailing zeros
using QPoly = std::vector<mpq_class>;

namespace poly {
QPoly trim(QPoly a);
int degree(const QPoly& a);  // -1 for zero
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const mpq_class& c);
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly rem(const QPoly& a, const QPoly& b);
QPoly monic(const QPoly& a);
QPoly gcd(const QPoly& a, const QPoly& b);
QPoly derivative(const QPoly& a);
QPoly power(const QPoly& a, unsigned n);
Complex eval(const QPoly& a, const Complex& z);
QPoly cyclotomic(unsigned long m);
// minimal polynomial of 2cos(2*pi/n) for n >= 1
QPoly two_cos_minpoly(unsigned long n);
// number of distinct real roots (Sturm)
int real_root_count(const QPoly& a);
// all complex roots at the current default precision (Aberth iteration)
std::vector<Complex> roots(const QPoly& a);
std::string to_string(const QPoly& a, const std::string& var = "x");
}  // namespace poly

unsigned long euler_phi(unsigned long n);
std::vector<unsigned long> prime_factors(unsigned long n);

struct FieldData;
class FieldElement;
class EmbeddingContext;

struct TorsionHint {
  unsigned long order = 0;
  std::vector<mpq_class> generator;
};

class NumberField {
 public:
  NumberField() = default;

  // nf_new: p given by integer coefficients c0..cd; irreducibility is the caller's assertion
  static NumberField create(const std::vector<mpz_class>& coeffs,
                            const std::optional<TorsionHint>& hint = std::nullopt);

  int degree() const;
  int r1() const;
  int r2() const;
  int slots() const { return r1() + r2(); }
  bool slot_is_real(int slot) const { return slot < r1(); }
  const std::vector<mpz_class>& defining_polynomial() const;
  const QPoly& monic_polynomial() const;

  unsigned long torsion_order() const;
  FieldElement torsion_generator() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement gen() const;
  FieldElement from_rational(const mpq_class& q) const;
  FieldElement element(std::vector<mpq_class> coeffs) const;

  // root approximations in the deterministic order: real roots ascending, then
  // upper-half-plane roots by (re, im); their conjugates follow at d - r2 ...
  const std::vector<Complex>& root_seeds() const;
  int slot_near(const Complex& approx) const;

  EmbeddingContext embedding(int slot, unsigned precision, bool conjugate = false) const;

  bool same_as(const NumberField& o) const { return d_ == o.d_; }
  bool valid() const { return d_ != nullptr; }

 private:
  std::shared_ptr<const FieldData> d_;
  friend class FieldElement;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(NumberField nf, std::vector<mpq_class> coeffs);  // reduces mod p

  const NumberField& field() const { return nf_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  FieldElement inverse() const;  // DivisionByZero
  FieldElement pow(long n) const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }
  // coefficientwise lexicographic order, used for deterministic sorting
  friend bool operator<(const FieldElement& a, const FieldElement& b);

  std::string to_string(const std::string& var = "x") const;
  QPoly as_poly() const { return poly::trim(c_); }

 private:
  NumberField nf_;
  std::vector<mpq_class> c_;
};

FieldElement operator+(FieldElement a, const FieldElement& b);
FieldElement operator-(FieldElement a, const FieldElement& b);
FieldElement operator*(FieldElement a, const FieldElement& b);
FieldElement operator/(FieldElement a, const FieldElement& b);
FieldElement operator-(const FieldElement& a);
FieldElement operator+(const FieldElement& a, long n);
FieldElement operator-(long n, const FieldElement& a);

// characteristic polynomial of multiplication by a (monic, degree d)
QPoly charpoly(const FieldElement& a);
mpq_class norm(const FieldElement& a);
// j in [0, m) with w^j = a, if a is a root of unity
std::optional<unsigned long> torsion_exponent(const FieldElement& a);
// substitute x -> image
FieldElement apply_automorphism(const FieldElement& image_of_gen, const FieldElement& a);

class EmbeddingContext {
 public:
  EmbeddingContext(NumberField nf, int slot, unsigned precision, bool conjugate);

  const NumberField& field() const { return nf_; }
  int slot() const { return slot_; }
  unsigned precision() const { return precision_; }
  unsigned working_digits() const { return work_digits(precision_); }
  bool conjugate() const { return conjugate_; }
  bool is_real() const { return nf_.slot_is_real(slot_); }
  const Complex& root() const { return root_; }

  Complex evaluate(const FieldElement& a) const;

 private:
  NumberField nf_;
  int slot_;
  unsigned precision_;
  bool conjugate_;
  Complex root_;
};

inline Complex evaluate(const FieldElement& a, const EmbeddingContext& ctx) { return ctx.evaluate(a); }

struct Reconstruction {
  std::optional<FieldElement> value;
  bool budget_exhausted = false;  // absent answer is then only "not found", not "not present"
};

struct ReconstructionOptions {
  mpz_class max_denominator = 1000000;
  unsigned long budget = 200000;
};

// element y of F with q(y) = 0; when approx is given, y must satisfy sigma_slot(y) ~ approx
Reconstruction element_in_field(const QPoly& q, const NumberField& nf,
                                const std::optional<std::pair<int, Complex>>& approx = std::nullopt,
                                const ReconstructionOptions& opt = {});

// all roots of q lying in F, sorted by canonical_less
std::vector<FieldElement> roots_in_field(const QPoly& q, const NumberField& nf, bool* budget_exhausted = nullptr,
                                         const ReconstructionOptions& opt = {});

// positive leading coefficient first, then smallest coefficients from the top degree down
bool canonical_less(const FieldElement& a, const FieldElement& b);

std::pair<unsigned long, FieldElement> detect_roots_of_unity(const NumberField& nf);

// images of the generator under all automorphisms, identity first
std::vector<FieldElement> automorphisms(const NumberField& nf);

}  // namespace bloch
