#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>
#include <optional>
#include <string>
#include <vector>

namespace bloch {

using Real = boost::multiprecision::mpfr_float;

// Sets the default precision (decimal digits) of new Reals on this thread.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits10);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

// 20% of the requested digits, at least 10
unsigned guard_digits(unsigned digits10);
inline unsigned work_digits(unsigned digits10) { return digits10 + guard_digits(digits10); }

// copy into a value carrying the current default precision
Real rebase(const Real& x);

Real to_real(const mpq_class& q);
Real to_real(const mpz_class& z);
Real real_pi();
Real pow10(long e);

mpz_class round_to_integer(const Real& x);
mpq_class exact_rational(const Real& x);

// best continued-fraction approximation with denominator <= max_den, returned
// only if |x - p/q| < tol
std::optional<mpq_class> rational_approx(const Real& x, const mpz_class& max_den, const Real& tol);

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(const Real& r) : re(r), im(0) {}  // NOLINT: implicit real promotion is intended
  Complex(const Real& r, const Real& i) : re(r), im(i) {}
  Complex(int r) : re(r), im(0) {}  // NOLINT

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex operator-(const Complex& a);

Complex rebase(const Complex& z);
Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm2(const Complex& z);
Real arg(const Complex& z);
Complex exp(const Complex& z);
// principal branch, cut (-inf, 0] continuous from above
Complex log(const Complex& z);
Complex ipow(const Complex& z, long n);
Complex i_times(const Complex& z);

// fixed-point decimal string with the given number of fractional digits
std::string decimal(const Real& x, unsigned frac_digits);
std::string decimal(const Complex& z, unsigned frac_digits);

// solve the real square system a x = b by Gaussian elimination with partial pivoting;
// empty result if singular at the working precision
std::vector<Real> solve_linear(std::vector<std::vector<Real>> a, std::vector<Real> b);

// numerical column rank (relative tolerance tol)
std::size_t column_rank(std::vector<std::vector<Real>> a, const Real& tol);

}  // namespace bloch
