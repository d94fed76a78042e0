#include "bloch/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace bloch {

PrecisionScope::PrecisionScope(unsigned digits10) : saved_(Real::default_precision()) {
  Real::default_precision(digits10);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

unsigned guard_digits(unsigned digits10) { return std::max(10u, digits10 / 5); }

Real rebase(const Real& x) {
  Real r;
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

Complex rebase(const Complex& z) { return Complex(rebase(z.re), rebase(z.im)); }

Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real pow10(long e) {
  Real r(10);
  return boost::multiprecision::pow(r, Real(e));
}

mpz_class round_to_integer(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
  return z;
}

mpq_class exact_rational(const Real& x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.backend().data());
  return q;
}

std::optional<mpq_class> rational_approx(const Real& x, const mpz_class& max_den, const Real& tol) {
  // convergents h/k of the continued fraction of the exact binary value of x
  mpq_class v = exact_rational(x);
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  mpq_class rem = v;
  std::optional<mpq_class> best;
  for (int step = 0; step < 400; ++step) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    mpz_class h2 = a * h1 + h0;
    mpz_class k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    mpq_class c(h1, k1);
    c.canonicalize();
    best = c;
    mpq_class frac = rem - mpq_class(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  if (!best) return std::nullopt;
  if (abs(to_real(*best) - x) >= tol) return std::nullopt;
  return best;
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = o.re * o.re + o.im * o.im;
  Real r = (re * o.re + im * o.im) / d;
  Real i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z) { return boost::multiprecision::sqrt(norm2(z)); }

Real arg(const Complex& z) {
  if (z.im == 0 && z.re < 0) return real_pi();  // keep -0 from flipping the branch
  return boost::multiprecision::atan2(z.im, z.re);
}

Complex exp(const Complex& z) {
  Real m = boost::multiprecision::exp(z.re);
  return Complex(m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im));
}

Complex log(const Complex& z) {
  return Complex(boost::multiprecision::log(abs(z)), arg(z));
}

Complex ipow(const Complex& z, long n) {
  if (n < 0) return Complex(1) / ipow(z, -n);
  Complex result(1), base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex i_times(const Complex& z) { return Complex(-z.im, z.re); }

std::string decimal(const Real& x, unsigned frac_digits) {
  std::string s = x.str(frac_digits, std::ios_base::fixed);
  if (!s.empty() && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string decimal(const Complex& z, unsigned frac_digits) {
  std::string im = decimal(z.im, frac_digits);
  std::string sign = "+";
  if (!im.empty() && im[0] == '-') {
    sign = "-";
    im.erase(0, 1);
  }
  return decimal(z.re, frac_digits) + " " + sign + " " + im + "i";
}

std::vector<Real> solve_linear(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0) return {};
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      Real f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

std::size_t column_rank(std::vector<std::vector<Real>> a, const Real& tol) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  Real scale = 0;
  for (auto& row : a)
    for (auto& v : row) scale = std::max(scale, Real(abs(v)));
  if (scale == 0) return 0;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (abs(a[piv][col]) <= tol * scale) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      Real f = a[r][col] / a[rank][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace bloch
