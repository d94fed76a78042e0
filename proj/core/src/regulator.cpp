#include "bloch/regulator.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

// B_n / (n + 1)! for n = 0..N, exact, B_1 = -1/2
const std::vector<mpq_class>& bernoulli_coefficients(std::size_t count) {
  static std::mutex mu;
  static std::vector<mpq_class> coeffs;
  std::lock_guard<std::mutex> lock(mu);
  if (coeffs.size() < count) {
    // B_n from sum_{k=0}^{n} C(n+1, k) B_k = 0
    std::vector<mpq_class> B;
    B.push_back(1);
    for (std::size_t n = 1; n < count; ++n) {
      mpq_class s = 0;
      mpz_class binom = 1;  // C(n+1, k)
      for (std::size_t k = 0; k < n; ++k) {
        s += binom * B[k];
        binom = binom * (n + 1 - k) / (k + 1);
      }
      B.push_back(-s / mpq_class(n + 1));
    }
    coeffs.clear();
    mpz_class fact = 1;
    for (std::size_t n = 0; n < count; ++n) {
      fact *= n + 1;
      coeffs.push_back(B[n] / mpq_class(fact));
    }
  }
  return coeffs;
}

// per-precision Real copies of the above
const std::vector<Real>& bernoulli_reals(unsigned digits, std::size_t count) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, std::size_t>, std::vector<Real>> cache;
  const auto& q = bernoulli_coefficients(count);
  std::lock_guard<std::mutex> lock(mu);
  auto& v = cache[{digits, count}];
  if (v.empty())
    for (std::size_t n = 0; n < count; ++n) v.push_back(to_real(q[n]));
  return v;
}

Complex li2_series(const Complex& z, const Real& eps) {
  Complex sum, power = z;
  for (long n = 1;; ++n) {
    Complex term = power / Complex(Real(n * n));
    sum += term;
    if (abs(term) < eps) break;
    if (n > 100000) precision_exhausted("dilogarithm series did not converge");
    power *= z;
  }
  return sum;
}

Complex li2_bernoulli(const Complex& z, unsigned digits) {
  const Complex u = -log(Complex(1) - z);
  // terms decay like (|u| / 2 pi)^n
  const double ratio = static_cast<double>(abs(u) / (2 * real_pi()));
  if (ratio >= 0.9) precision_exhausted("Bernoulli series outside its disc");
  std::size_t count = static_cast<std::size_t>(digits * 2.31 / -std::log(ratio)) + 8;
  count = std::max<std::size_t>(count, 16);
  const auto& c = bernoulli_reals(digits, count);
  Complex sum, power = u;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 1 && n % 2 == 1) {  // odd Bernoulli numbers beyond B_1 vanish
      power *= u;
      continue;
    }
    Complex term = power * Complex(c[n]);
    sum += term;
    power *= u;
  }
  return sum;
}

// |z| <= 1
Complex li2_disc(const Complex& z, const Real& eps, unsigned digits) {
  const Real pi2_6 = real_pi() * real_pi() / 6;
  if (z.re > Real(0.5)) {
    Complex w = Complex(1) - z;
    if (w.re == 0 && w.im == 0) return Complex(pi2_6);
    return Complex(pi2_6) - log(z) * log(w) - li2_disc(w, eps, digits);
  }
  if (abs(z) <= Real(0.5)) return li2_series(z, eps);
  return li2_bernoulli(z, digits);
}

}  // namespace

Complex li2(const Complex& z_in, unsigned precision) {
  const unsigned digits = work_digits(precision);
  PrecisionScope scope(digits);
  const Complex z = rebase(z_in);
  const Real eps = pow10(-static_cast<long>(digits));
  if (z.re == 0 && z.im == 0) return Complex();
  if (abs(z) > 1) {
    // Li2(z) = -Li2(1/z) - pi^2/6 - Log(-z)^2 / 2; principal Log(-z) gives the
    // value from below on (1, inf)
    const Complex lz = log(-z);
    return -li2_disc(Complex(1) / z, eps, digits) - Complex(real_pi() * real_pi() / 6) - Complex(Real(0.5)) * lz * lz;
  }
  return li2_disc(z, eps, digits);
}

Real bloch_wigner(const Complex& z_in, unsigned precision) {
  PrecisionScope scope(work_digits(precision));
  const Complex z = rebase(z_in);
  return li2(z, precision).im + arg(Complex(1) - z) * boost::multiprecision::log(abs(z));
}

// ---------------------------------------------------------------- values

namespace {
Real four_pi2() { return 4 * real_pi() * real_pi(); }
}  // namespace

Complex RegulatorValue::symmetric() const {
  PrecisionScope scope(work_digits(precision));
  Complex v = rebase(value);
  const Real period = four_pi2();
  if (v.re > period / 2) v.re -= period;
  return v;
}

std::string RegulatorValue::to_string(unsigned frac_digits, bool symmetric_range) const {
  PrecisionScope scope(work_digits(precision));
  return decimal(symmetric_range ? symmetric() : rebase(value), frac_digits);
}

RegulatorValue reduce_mod_4pi2(const Complex& v_in, unsigned precision) {
  PrecisionScope scope(work_digits(precision));
  Complex v = rebase(v_in);
  const Real period = four_pi2();
  v.re -= period * boost::multiprecision::floor(v.re / period);
  if (v.re >= period) v.re -= period;
  return RegulatorValue{v, precision};
}

Real distance_mod_4pi2(const Complex& a, const Complex& b) {
  const Real period = four_pi2();
  Real d = a.re - b.re;
  d -= period * boost::multiprecision::round(d / period);
  Real di = a.im - b.im;
  return boost::multiprecision::sqrt(d * d + di * di);
}

Complex reg_flattening_raw(const Flattening& fl, const LogLift& lift) {
  const EmbeddingContext& ctx = lift.embedding;
  PrecisionScope scope(ctx.working_digits());
  const MultBasis& basis = lift.basis;
  const Complex z = ctx.evaluate(pi(fl.e, basis));
  const Complex one_minus_z = ctx.evaluate(pi(fl.f, basis));
  const Complex w0 = lift.lift(fl.e), w1 = lift.lift(fl.f);
  const Complex log_z = log(z), log_1z = log(one_minus_z);
  const Real two_pi = 2 * real_pi();
  const mpz_class p = round_to_integer((w0.im - log_z.im) / two_pi);
  const mpz_class q = round_to_integer((w1.im - log_1z.im) / two_pi);
  const Real tol = pow10(-static_cast<long>(ctx.precision()) / 2);
  if (abs(w0 - log_z - Complex(Real(0), two_pi * to_real(p))) > tol ||
      abs(w1 - log_1z - Complex(Real(0), two_pi * to_real(q))) > tol)
    math_error("LiftInconsistent", "lifts do not exponentiate to z and 1 - z");
  const Complex shifted = log_1z - Complex(Real(0), two_pi * to_real(q));
  return li2(z, ctx.precision()) + Complex(Real(0.5)) * w0 * shifted - Complex(real_pi() * real_pi() / 6);
}

RegulatorValue reg_flattening(const Flattening& fl, const LogLift& lift) {
  return reduce_mod_4pi2(reg_flattening_raw(fl, lift), lift.embedding.precision());
}

Complex zagier_regulator(const Complex& w0, const Complex& w1, unsigned precision) {
  PrecisionScope scope(work_digits(precision));
  const Complex a = rebase(w0), b = rebase(w1);
  return li2(Complex(1) - exp(b), precision) + Complex(Real(0.5)) * a * b - Complex(real_pi() * real_pi() / 6);
}

RegulatorValue reg_sum(const ExtBlochSum& s, const LogLift& lift) {
  PrecisionScope scope(lift.embedding.working_digits());
  Complex total;
  for (const auto& t : s.terms) total += Complex(Real(t.coeff)) * reg_flattening_raw(t.fl, lift);
  if (!s.chi_part.is_zero()) {
    // restriction of R to E/2Z is multiplication by -pi i after Psi(1) = k_unit
    Complex c = lift.lift(s.chi_part) * Complex(Real(lift.k_unit));
    total += Complex(Real(0), -real_pi()) * c;
  }
  return reduce_mod_4pi2(total, lift.embedding.precision());
}

std::vector<SlotRegulator> reg_vector(const ExtBlochSum& s, unsigned precision) {
  const NumberField& nf = s.basis.field();
  std::vector<SlotRegulator> out;
  for (int slot = 0; slot < nf.slots(); ++slot) {
    EmbeddingContext ctx = nf.embedding(slot, precision);
    LogLift lift = cover_to_C(s.basis, ctx);
    RegulatorValue v = reg_sum(s, lift);
    if (nf.slot_is_real(slot)) {
      PrecisionScope scope(work_digits(precision));
      if (abs(v.value.im) > pow10(-static_cast<long>(precision) / 2))
        math_error("RealSlotNotReal", "imaginary part " + decimal(v.value.im, 10) + " at real slot");
      v.value.im = 0;
    }
    out.push_back({slot, nf.slot_is_real(slot), v});
  }
  return out;
}

Real wedge_pairing(const WedgeElement& w, const LogLift& lift) {
  PrecisionScope scope(lift.embedding.working_digits());
  Real total = 0;
  for (const auto& t : w) {
    const Complex x = lift.lift(t.left), y = lift.lift(t.right);
    total += Real(t.coeff) * (x.re * y.im - x.im * y.re);
  }
  return total;
}

Real bloch_wigner_sum(const ExtBlochSum& s, const LogLift& lift) {
  PrecisionScope scope(lift.embedding.working_digits());
  Real total = 0;
  for (const auto& t : s.terms)
    total += Real(t.coeff) *
             bloch_wigner(lift.embedding.evaluate(pi(t.fl.e, s.basis)), lift.embedding.precision());
  return total;
}

std::optional<long> torsion_order(const RegulatorValue& v, long max_den) {
  PrecisionScope scope(work_digits(v.precision));
  const Real tol = pow10(-static_cast<long>(v.precision) / 2);
  if (abs(v.value.im) > tol) return std::nullopt;
  Real x = rebase(v.value.re) / four_pi2();
  x -= boost::multiprecision::floor(x);
  auto q = rational_approx(x, mpz_class(max_den), tol);
  if (!q) return std::nullopt;
  mpq_class r = *q;
  r -= mpz_class(r.get_num() / r.get_den());  // 1 -> 0
  return r.get_den().get_si();
}

long certify_order(const ExtBlochSum& s, unsigned precision) {
  long order = 1;
  for (const auto& sv : reg_vector(s, precision)) {
    auto n = torsion_order(sv.value);
    if (!n) math_error("NotTorsion", "regulator at slot " + std::to_string(sv.slot) + " is not rational torsion");
    order = std::lcm(order, *n);
  }
  return order;
}

}  // namespace bloch
