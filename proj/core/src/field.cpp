#include "bloch/field.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "bloch/errors.hpp"

namespace bloch {

namespace {
constexpr unsigned kSeedDigits = 80;
}

struct FieldData {
  std::vector<mpz_class> int_poly;
  QPoly monic;
  int d = 0;
  int r1 = 0;
  int r2 = 0;
  std::vector<Complex> seeds;
  unsigned long m = 2;
  std::vector<mpq_class> w;
};

// ---------------------------------------------------------------- polynomials

namespace poly {

QPoly trim(QPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

int degree(const QPoly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != 0) return i;
  return -1;
}

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trim(std::move(r));
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return trim(std::move(r));
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trim(std::move(r));
}

QPoly scale(const QPoly& a, const mpq_class& c) {
  QPoly r = a;
  for (auto& x : r) x *= c;
  return trim(std::move(r));
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  const int db = degree(b);
  if (db < 0) math_error("DivisionByZero", "polynomial division by zero");
  r = trim(a);
  q.assign(std::max<int>(0, degree(r) - db + 1), 0);
  const mpq_class lead = b[db];
  for (int dr = degree(r); dr >= db; dr = degree(r)) {
    mpq_class c = r[dr] / lead;
    q[dr - db] = c;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= c * b[i];
    r = trim(std::move(r));
  }
  q = trim(std::move(q));
}

QPoly rem(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return r;
}

QPoly monic(const QPoly& a) {
  QPoly t = trim(a);
  if (t.empty()) return t;
  return scale(t, 1 / mpq_class(t.back()));
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = trim(a), y = trim(b);
  while (!y.empty()) {
    QPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

QPoly derivative(const QPoly& a) {
  if (a.size() <= 1) return {};
  QPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<long>(i);
  return trim(std::move(r));
}

QPoly power(const QPoly& a, unsigned n) {
  QPoly r{1};
  for (unsigned i = 0; i < n; ++i) r = mul(r, a);
  return r;
}

Complex eval(const QPoly& a, const Complex& z) {
  Complex acc(0);
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * z + Complex(to_real(a[i]));
  return acc;
}

QPoly cyclotomic(unsigned long m) {
  QPoly num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (unsigned long k = 1; k < m; ++k) {
    if (m % k) continue;
    QPoly q, r;
    divmod(num, cyclotomic(k), q, r);
    num = q;
  }
  return trim(num);
}

QPoly two_cos_minpoly(unsigned long n) {
  if (n == 1) return {-2, 1};
  if (n == 2) return {2, 1};
  QPoly phi = cyclotomic(n);
  const int k = degree(phi) / 2;
  // x^j + x^-j as polynomials in y = x + 1/x
  std::vector<QPoly> dj{{2}, {0, 1}};
  for (int j = 2; j <= k; ++j) dj.push_back(sub(mul({0, 1}, dj[j - 1]), dj[j - 2]));
  QPoly psi{phi[k]};
  for (int j = 1; j <= k; ++j) psi = add(psi, scale(dj[j], phi[k + j]));
  return monic(psi);
}

namespace {
int sign_at_infinity(const QPoly& a, bool positive) {
  const int d = degree(a);
  int s = sgn(a[d]);
  if (!positive && (d % 2)) s = -s;
  return s;
}
}  // namespace

int real_root_count(const QPoly& a) {
  std::vector<QPoly> seq{trim(a), derivative(a)};
  while (degree(seq.back()) > 0) {
    QPoly r = rem(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    seq.push_back(scale(r, -1));
  }
  auto variations = [&](bool positive) {
    int count = 0, prev = 0;
    for (const auto& s : seq) {
      if (s.empty()) continue;
      int v = sign_at_infinity(s, positive);
      if (prev != 0 && v != prev) ++count;
      prev = v;
    }
    return count;
  };
  return variations(false) - variations(true);
}

std::vector<Complex> roots(const QPoly& a) {
  QPoly p = monic(a);
  const int n = degree(p);
  if (n < 1) return {};
  std::vector<Real> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = to_real(p[i]);
  if (n == 1) return {Complex(-c[0])};

  Real bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, Real(boost::multiprecision::abs(c[i])));
  Real radius = bound + 1;
  // start points on a circle; the radius is a crude scale for the root moduli
  Real mean_modulus = boost::multiprecision::pow(boost::multiprecision::abs(c[0]) + 1, Real(1) / n);
  radius = std::min(radius, Real(mean_modulus + 1));
  std::vector<Complex> z(n);
  const Real two_pi = 2 * real_pi();
  for (int k = 0; k < n; ++k) {
    Real t = two_pi * k / n + Real(0.7);
    z[k] = Complex(radius * boost::multiprecision::cos(t), radius * boost::multiprecision::sin(t));
  }

  auto horner = [&](const Complex& x, Complex& f, Complex& df) {
    f = Complex(c[n]);
    df = Complex(0);
    for (int i = n - 1; i >= 0; --i) {
      df = df * x + f;
      f = f * x + Complex(c[i]);
    }
  };

  const Real eps = pow10(-static_cast<long>(Real::default_precision()) + 4);
  int settled = 0;
  for (int iter = 0; iter < 2000 && settled < 3; ++iter) {
    Real worst = 0;
    for (int k = 0; k < n; ++k) {
      Complex f, df;
      horner(z[k], f, df);
      if (f.re == 0 && f.im == 0) continue;
      Complex ratio = f / df;
      Complex s(0);
      for (int j = 0; j < n; ++j)
        if (j != k) s += Complex(1) / (z[k] - z[j]);
      Complex step = ratio / (Complex(1) - ratio * s);
      z[k] -= step;
      Real rel = abs(step) / std::max(Real(1), abs(z[k]));
      worst = std::max(worst, rel);
    }
    if (worst < eps) ++settled;
  }
  if (settled == 0) precision_exhausted("root isolation did not converge for " + to_string(a));
  return z;
}

std::string to_string(const QPoly& a, const std::string& var) {
  QPoly t = trim(a);
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(t); i >= 0; --i) {
    if (t[i] == 0) continue;
    mpq_class c = t[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << c.get_str();
    } else {
      if (c != 1) os << c.get_str() << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace poly

unsigned long euler_phi(unsigned long n) {
  unsigned long r = n;
  for (unsigned long p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

std::vector<unsigned long> prime_factors(unsigned long n) {
  std::vector<unsigned long> out;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// ------------------------------------------------------------- field elements

FieldElement::FieldElement(NumberField nf, std::vector<mpq_class> coeffs) : nf_(std::move(nf)) {
  const auto& data = *nf_.d_;
  if (static_cast<int>(coeffs.size()) > data.d) coeffs = poly::rem(coeffs, data.monic);
  coeffs.resize(data.d, 0);
  for (auto& q : coeffs) q.canonicalize();  // mpq_class(num, den) does not
  c_ = std::move(coeffs);
}

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q == 0; });
}

bool FieldElement::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](const mpq_class& q) { return q == 0; });
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) math_error("DivisionByZero", "inverse of zero");
  const QPoly& p = nf_.d_->monic;
  QPoly r0 = p, r1 = poly::trim(c_);
  QPoly s0{}, s1{1};
  while (!r1.empty()) {
    QPoly q, r;
    poly::divmod(r0, r1, q, r);
    QPoly s = poly::sub(s0, poly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (poly::degree(r0) != 0) math_error("DivisionByZero", "element is a zero divisor; is p irreducible?");
  return FieldElement(nf_, poly::scale(s0, 1 / r0[0]));
}

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement result = nf_.one(), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  *this = FieldElement(nf_, poly::mul(poly::trim(c_), poly::trim(o.c_)));
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) { return *this *= o.inverse(); }

bool operator<(const FieldElement& a, const FieldElement& b) {
  return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end(),
                                      [](const mpq_class& x, const mpq_class& y) { return cmp(x, y) < 0; });
}

std::string FieldElement::to_string(const std::string& var) const { return poly::to_string(c_, var); }

FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
FieldElement operator-(const FieldElement& a) { return a.field().zero() - a; }
FieldElement operator+(const FieldElement& a, long n) { return a + a.field().from_rational(n); }
FieldElement operator-(long n, const FieldElement& a) { return a.field().from_rational(n) - a; }

QPoly charpoly(const FieldElement& a) {
  const int d = a.field().degree();
  // multiplication matrix: column j holds a * x^j
  std::vector<std::vector<mpq_class>> A(d, std::vector<mpq_class>(d, 0));
  FieldElement col = a;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) A[i][j] = col.coeffs()[i];
    col *= a.field().gen();
  }
  // Faddeev-LeVerrier
  QPoly c(d + 1, 0);
  c[d] = 1;
  std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d, 0));
  for (int k = 1; k <= d; ++k) {
    std::vector<std::vector<mpq_class>> AM(d, std::vector<mpq_class>(d, 0));
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) {
        if (A[i][l] == 0) continue;
        for (int j = 0; j < d; ++j) AM[i][j] += A[i][l] * M[l][j];
      }
    for (int i = 0; i < d; ++i) AM[i][i] += c[d - k + 1];
    M = AM;
    mpq_class tr = 0;
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) tr += A[i][l] * M[l][i];
    c[d - k] = -tr / k;
  }
  return c;
}

mpq_class norm(const FieldElement& a) {
  QPoly c = charpoly(a);
  return (a.field().degree() % 2) ? mpq_class(-c[0]) : c[0];
}

std::optional<unsigned long> torsion_exponent(const FieldElement& a) {
  const auto& nf = a.field();
  const unsigned long m = nf.torsion_order();
  if (a.is_zero() || !a.pow(static_cast<long>(m)).is_one()) return std::nullopt;
  FieldElement w = nf.torsion_generator(), acc = nf.one();
  for (unsigned long j = 0; j < m; ++j) {
    if (acc == a) return j;
    acc *= w;
  }
  math_error("ReconstructionFailed", "root of unity outside the detected torsion group");
}

FieldElement apply_automorphism(const FieldElement& image_of_gen, const FieldElement& a) {
  const auto& c = a.coeffs();
  FieldElement acc = a.field().zero();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * image_of_gen + a.field().from_rational(c[i]);
  return acc;
}

// ------------------------------------------------------------------- embeddings

EmbeddingContext::EmbeddingContext(NumberField nf, int slot, unsigned precision, bool conjugate)
    : nf_(std::move(nf)), slot_(slot), precision_(precision), conjugate_(conjugate) {
  if (slot < 0 || slot >= nf_.slots()) input_error("BadEmbedding", "slot index out of range");
  PrecisionScope scope(working_digits());
  const QPoly& p = nf_.monic_polynomial();
  QPoly dp = poly::derivative(p);
  Complex z = rebase(nf_.root_seeds()[slot]);
  const Real eps = pow10(-static_cast<long>(working_digits()) + 2);
  int settled = 0;
  for (int iter = 0; iter < 100 && settled < 2; ++iter) {
    Complex step = poly::eval(p, z) / poly::eval(dp, z);
    z -= step;
    if (abs(step) <= eps * std::max(Real(1), abs(z))) ++settled;
  }
  Real scale = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    scale += boost::multiprecision::abs(to_real(p[i])) * boost::multiprecision::pow(abs(z), Real(static_cast<long>(i)));
  if (settled == 0 || abs(poly::eval(p, z)) > scale * pow10(-static_cast<long>(precision_) - 2))
    precision_exhausted("Newton refinement of root " + std::to_string(slot) + " failed");
  if (nf_.slot_is_real(slot)) z.im = 0;
  root_ = conjugate ? bloch::conj(z) : z;
}

Complex EmbeddingContext::evaluate(const FieldElement& a) const {
  if (!a.field().same_as(nf_)) input_error("FieldMismatch", "element from a different field");
  PrecisionScope scope(working_digits());
  return poly::eval(a.coeffs(), root_);
}

// ---------------------------------------------------------------- reconstruction

namespace {

// Enumerates assignments of roots of q to the embedding slots, recovers the
// rational coefficient vector by solving against powers of the slot roots, and
// verifies exactly.  Calls found(y) for each verified root; found returns false
// to stop.  Returns true if the budget ran out.
bool enumerate_roots(const QPoly& q, const NumberField& nf,
                     const std::optional<std::pair<int, Complex>>& approx,
                     const ReconstructionOptions& opt,
                     const std::function<bool(const FieldElement&)>& found) {
  const int d = nf.degree();
  const int dq = poly::degree(q);
  if (dq < 1 || d % dq != 0) return false;
  PrecisionScope scope(kSeedDigits);

  std::vector<Complex> qroots = poly::roots(q);
  const Real real_tol = pow10(-static_cast<long>(kSeedDigits) / 2);
  std::vector<Complex> real_qroots;
  for (auto& r : qroots)
    if (boost::multiprecision::abs(r.im) < real_tol) real_qroots.push_back(Complex(r.re));

  const int slots = nf.slots();
  std::vector<std::vector<Complex>> choices(slots);
  for (int s = 0; s < slots; ++s) choices[s] = nf.slot_is_real(s) ? real_qroots : qroots;
  if (approx) {
    auto [s, a] = *approx;
    auto& ch = choices[s];
    if (ch.empty()) return false;
    auto best = std::min_element(ch.begin(), ch.end(), [&](const Complex& x, const Complex& y) {
      return abs(x - a) < abs(y - a);
    });
    if (abs(*best - a) > Real(1e-6) * std::max(Real(1), abs(a))) return false;
    ch = {*best};
  }
  for (auto& ch : choices)
    if (ch.empty()) return false;

  // inverse of the real coordinate matrix of the embedding
  std::vector<std::vector<Real>> M;
  for (int s = 0; s < slots; ++s) {
    Complex z = rebase(nf.root_seeds()[s]);
    std::vector<Real> re(d), im(d);
    Complex pw(1);
    for (int k = 0; k < d; ++k) {
      re[k] = pw.re;
      im[k] = pw.im;
      pw *= z;
    }
    M.push_back(re);
    if (!nf.slot_is_real(s)) M.push_back(im);
  }
  std::vector<std::vector<Real>> Minv(d, std::vector<Real>(d));
  for (int col = 0; col < d; ++col) {
    std::vector<Real> e(d, Real(0));
    e[col] = 1;
    auto x = solve_linear(M, e);
    if (x.empty()) precision_exhausted("singular embedding matrix");
    for (int row = 0; row < d; ++row) Minv[row][col] = x[row];
  }

  const Real coef_tol = pow10(-static_cast<long>(kSeedDigits) / 2);
  std::vector<std::size_t> idx(slots, 0);
  unsigned long tried = 0;
  while (true) {
    if (tried++ >= opt.budget) return true;
    std::vector<Real> t;
    for (int s = 0; s < slots; ++s) {
      const Complex& v = choices[s][idx[s]];
      t.push_back(v.re);
      if (!nf.slot_is_real(s)) t.push_back(v.im);
    }
    std::vector<mpq_class> coeffs;
    bool ok = true;
    for (int row = 0; row < d && ok; ++row) {
      Real c = 0;
      for (int col = 0; col < d; ++col) c += Minv[row][col] * t[col];
      auto r = rational_approx(c, opt.max_denominator, coef_tol);
      if (!r) ok = false;
      else coeffs.push_back(*r);
    }
    if (ok) {
      FieldElement y = nf.element(coeffs);
      FieldElement qy = nf.zero();
      for (std::size_t i = q.size(); i-- > 0;) qy = qy * y + nf.from_rational(q[i]);
      if (!qy.is_zero())
        math_error("ReconstructionFailed", "numeric candidate " + y.to_string() + " is not a root of " +
                                               poly::to_string(q, "y"));
      QPoly expected = poly::power(poly::monic(q), static_cast<unsigned>(d / poly::degree(q)));
      if (charpoly(y) != expected)
        math_error("ReconstructionFailed", "characteristic polynomial of " + y.to_string() +
                                               " does not match; is the target polynomial irreducible?");
      if (!found(y)) return false;
    }
    int s = 0;
    while (s < slots) {
      if (++idx[s] < choices[s].size()) break;
      idx[s] = 0;
      ++s;
    }
    if (s == slots) return false;
  }
}

// canonical choice among primitive roots: positive leading coefficient, then
// smallest coefficients read from the top degree down
}  // namespace

bool canonical_less(const FieldElement& a, const FieldElement& b) {
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  auto lead_sign = [](const std::vector<mpq_class>& c) {
    for (std::size_t i = c.size(); i-- > 0;)
      if (c[i] != 0) return sgn(c[i]);
    return 0;
  };
  int sa = lead_sign(ca), sb = lead_sign(cb);
  if (sa != sb) return sa > sb;
  for (std::size_t i = ca.size(); i-- > 0;) {
    int c = cmp(ca[i], cb[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

namespace {

bool is_primitive_root(const FieldElement& w, unsigned long m) {
  if (!w.pow(static_cast<long>(m)).is_one()) return false;
  for (unsigned long q : prime_factors(m))
    if (w.pow(static_cast<long>(m / q)).is_one()) return false;
  return true;
}

}  // namespace

Reconstruction element_in_field(const QPoly& q, const NumberField& nf,
                                const std::optional<std::pair<int, Complex>>& approx,
                                const ReconstructionOptions& opt) {
  Reconstruction out;
  out.budget_exhausted = enumerate_roots(q, nf, approx, opt, [&](const FieldElement& y) {
    out.value = y;
    return false;
  });
  if (out.value) out.budget_exhausted = false;
  return out;
}

std::vector<FieldElement> roots_in_field(const QPoly& q, const NumberField& nf, bool* budget_exhausted,
                                         const ReconstructionOptions& opt) {
  std::vector<FieldElement> out;
  bool exhausted = enumerate_roots(q, nf, std::nullopt, opt, [&](const FieldElement& y) {
    if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
    return true;
  });
  if (budget_exhausted) *budget_exhausted = exhausted;
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::pair<unsigned long, FieldElement> detect_roots_of_unity(const NumberField& nf) {
  const unsigned long d = static_cast<unsigned long>(nf.degree());
  std::vector<unsigned long> candidates;
  // phi(m) >= sqrt(m / 2), so phi(m) <= d forces m <= 2 d^2
  for (unsigned long m = 2; m <= 2 * d * d + 2; m += 2)
    if (d % euler_phi(m) == 0) candidates.push_back(m);
  std::sort(candidates.rbegin(), candidates.rend());
  for (unsigned long m : candidates) {
    if (m == 2) break;
    auto rec = element_in_field(poly::cyclotomic(m), nf);
    if (!rec.value) continue;
    FieldElement best = *rec.value;
    for (unsigned long j = 2; j < m; ++j) {
      if (std::gcd(j, m) != 1) continue;
      FieldElement c = rec.value->pow(static_cast<long>(j));
      if (canonical_less(c, best)) best = c;
    }
    if (!is_primitive_root(best, m)) math_error("ReconstructionFailed", "root of unity failed exact check");
    return {m, best};
  }
  return {2, nf.from_rational(-1)};
}

std::vector<FieldElement> automorphisms(const NumberField& nf) {
  std::vector<FieldElement> out;
  enumerate_roots(nf.monic_polynomial(), nf, std::nullopt, ReconstructionOptions{}, [&](const FieldElement& y) {
    if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
    return true;
  });
  FieldElement x = nf.gen();
  std::sort(out.begin(), out.end(), [&](const FieldElement& a, const FieldElement& b) {
    if ((a == x) != (b == x)) return a == x;
    return a < b;
  });
  return out;
}

// ------------------------------------------------------------------ NumberField

NumberField NumberField::create(const std::vector<mpz_class>& coeffs, const std::optional<TorsionHint>& hint) {
  QPoly p;
  for (const auto& c : coeffs) p.push_back(mpq_class(c));
  p = poly::trim(p);
  if (poly::degree(p) < 1) math_error("DegreeZero", "defining polynomial is constant");
  if (poly::degree(poly::gcd(p, poly::derivative(p))) > 0)
    math_error("NotSquarefree", "gcd(p, p') is not constant for " + poly::to_string(p));

  auto data = std::make_shared<FieldData>();
  data->int_poly.assign(coeffs.begin(), coeffs.begin() + p.size());
  data->monic = poly::monic(p);
  data->d = poly::degree(p);
  data->r1 = poly::real_root_count(p);
  data->r2 = (data->d - data->r1) / 2;

  {
    PrecisionScope scope(kSeedDigits);
    std::vector<Complex> rts = poly::roots(data->monic);
    std::sort(rts.begin(), rts.end(), [](const Complex& a, const Complex& b) {
      return boost::multiprecision::abs(a.im) < boost::multiprecision::abs(b.im);
    });
    std::vector<Complex> reals, upper;
    const Real sep = pow10(-20);
    for (int i = 0; i < data->d; ++i) {
      if (i < data->r1) {
        reals.push_back(Complex(rts[i].re));
      } else {
        if (boost::multiprecision::abs(rts[i].im) < sep) precision_exhausted("real/complex root separation failed");
        if (rts[i].im > 0) upper.push_back(rts[i]);
      }
    }
    if (static_cast<int>(upper.size()) != data->r2) precision_exhausted("conjugate pairing of roots failed");
    std::sort(reals.begin(), reals.end(), [](const Complex& a, const Complex& b) { return a.re < b.re; });
    const Real tie = pow10(-40);
    std::sort(upper.begin(), upper.end(), [&](const Complex& a, const Complex& b) {
      if (boost::multiprecision::abs(a.re - b.re) > tie) return a.re < b.re;
      return a.im < b.im;
    });
    data->seeds = reals;
    data->seeds.insert(data->seeds.end(), upper.begin(), upper.end());
    for (const auto& u : upper) data->seeds.push_back(bloch::conj(u));
  }

  data->m = 2;
  data->w.assign(data->d, 0);
  data->w[0] = -1;
  NumberField nf;
  nf.d_ = data;

  auto [m, w] = detect_roots_of_unity(nf);
  if (hint) {
    FieldElement hw = nf.element(hint->generator);
    if (hint->order != m || !is_primitive_root(hw, m))
      math_error("ReconstructionFailed", "torsion hint (order " + std::to_string(hint->order) + ", " + hw.to_string() +
                                             ") rejected; detected order " + std::to_string(m));
    w = hw;
  }
  data->m = m;
  data->w = w.coeffs();
  return nf;
}

int NumberField::degree() const { return d_->d; }
int NumberField::r1() const { return d_->r1; }
int NumberField::r2() const { return d_->r2; }
const std::vector<mpz_class>& NumberField::defining_polynomial() const { return d_->int_poly; }
const QPoly& NumberField::monic_polynomial() const { return d_->monic; }
unsigned long NumberField::torsion_order() const { return d_->m; }
FieldElement NumberField::torsion_generator() const { return FieldElement(*this, d_->w); }
FieldElement NumberField::zero() const { return FieldElement(*this, {}); }
FieldElement NumberField::one() const { return FieldElement(*this, {1}); }

FieldElement NumberField::gen() const {
  if (d_->d == 1) return FieldElement(*this, {-d_->monic[0]});
  return FieldElement(*this, {0, 1});
}

FieldElement NumberField::from_rational(const mpq_class& q) const { return FieldElement(*this, {q}); }
FieldElement NumberField::element(std::vector<mpq_class> coeffs) const { return FieldElement(*this, std::move(coeffs)); }
const std::vector<Complex>& NumberField::root_seeds() const { return d_->seeds; }

int NumberField::slot_near(const Complex& approx) const {
  PrecisionScope scope(kSeedDigits);
  int best = 0;
  Real best_dist = -1;
  for (int s = 0; s < slots(); ++s) {
    const Complex& z = d_->seeds[s];
    Real dist = std::min(abs(z - approx), abs(bloch::conj(z) - approx));
    if (best_dist < 0 || dist < best_dist) {
      best = s;
      best_dist = dist;
    }
  }
  return best;
}

EmbeddingContext NumberField::embedding(int slot, unsigned precision, bool conjugate) const {
  return EmbeddingContext(*this, slot, precision, conjugate);
}

}  // namespace bloch
