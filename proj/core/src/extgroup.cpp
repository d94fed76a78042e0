#include "bloch/extgroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "bloch/errors.hpp"

namespace bloch {

namespace {
constexpr unsigned kLogDigits = 40;
}

// ---------------------------------------------------------------- ExtElement

bool ExtElement::is_zero() const {
  return k == 0 && std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
}

ExtElement& ExtElement::operator+=(const ExtElement& o) {
  k += o.k;
  if (r.size() < o.r.size()) r.resize(o.r.size(), 0);
  for (std::size_t j = 0; j < o.r.size(); ++j) r[j] += o.r[j];
  return *this;
}

ExtElement& ExtElement::operator-=(const ExtElement& o) {
  k -= o.k;
  if (r.size() < o.r.size()) r.resize(o.r.size(), 0);
  for (std::size_t j = 0; j < o.r.size(); ++j) r[j] -= o.r[j];
  return *this;
}

ExtElement& ExtElement::operator*=(std::int64_t n) {
  k *= n;
  for (auto& x : r) x *= n;
  return *this;
}

bool operator==(const ExtElement& a, const ExtElement& b) {
  if (a.k != b.k) return false;
  const std::size_t n = std::max(a.r.size(), b.r.size());
  for (std::size_t j = 0; j < n; ++j)
    if (a.coord(j) != b.coord(j)) return false;
  return true;
}

bool operator<(const ExtElement& a, const ExtElement& b) {
  if (a.k != b.k) return a.k < b.k;
  const std::size_t n = std::max(a.r.size(), b.r.size());
  for (std::size_t j = 0; j < n; ++j)
    if (a.coord(j) != b.coord(j)) return a.coord(j) < b.coord(j);
  return false;
}

std::string ExtElement::to_string() const {
  std::ostringstream os;
  os << "(" << k << "; ";
  for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << r[j];
  os << ")";
  return os.str();
}

ExtElement operator+(ExtElement a, const ExtElement& b) { return a += b; }
ExtElement operator-(ExtElement a, const ExtElement& b) { return a -= b; }
ExtElement operator-(const ExtElement& a) { return ExtElement() - a; }
ExtElement operator*(std::int64_t n, ExtElement a) { return a *= n; }

// ----------------------------------------------------------------- MultBasis

struct BasisData {
  NumberField nf;
  FieldElement w;
  std::int64_t m = 2;
  std::vector<FieldElement> gens;
  bool saturated = false;
  bool symbolic = false;

  // independence data for verified bases: archimedean log-moduli (slots x r)
  // and valuations of norms at the primes dividing them
  std::vector<std::vector<Real>> log_moduli;
  std::vector<mpz_class> primes;
  std::vector<std::vector<long>> valuations;  // primes x r
};

namespace {

bool is_primitive(const FieldElement& w, std::int64_t m) {
  if (!w.pow(m).is_one()) return false;
  for (unsigned long q : prime_factors(static_cast<unsigned long>(m)))
    if (w.pow(m / static_cast<std::int64_t>(q)).is_one()) return false;
  return true;
}

FieldElement checked_generator(const NumberField& nf, const std::optional<FieldElement>& w) {
  if (!w) return nf.torsion_generator();
  if (!is_primitive(*w, static_cast<std::int64_t>(nf.torsion_order())))
    math_error("BranchInvalid", w->to_string() + " is not a primitive root of unity of order " +
                                    std::to_string(nf.torsion_order()));
  return *w;
}

void collect_primes(mpz_class n, std::vector<mpz_class>& primes) {
  n = abs(n);
  for (mpz_class p = 2; p * p <= n && p < 1000000; ++p) {
    if (n % p != 0) continue;
    primes.push_back(p);
    while (n % p == 0) n /= p;
  }
  // a leftover cofactor is treated as one more "prime"; fine for independence
  if (n > 1) primes.push_back(n);
}

long valuation(mpz_class n, const mpz_class& p) {
  n = abs(n);
  long v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

long rational_valuation(const mpq_class& q, const mpz_class& p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

// whether q is a unit away from the listed primes
bool supported_on(const mpq_class& q, const std::vector<mpz_class>& primes) {
  mpz_class num = abs(q.get_num()), den = q.get_den();
  for (const auto& p : primes) {
    while (num % p == 0) num /= p;
    while (den % p == 0) den /= p;
  }
  return num == 1 && den == 1;
}

}  // namespace

MultBasis MultBasis::create(const NumberField& nf, std::vector<FieldElement> free_gens, bool saturated,
                            const std::optional<FieldElement>& torsion_gen) {
  auto data = std::make_shared<BasisData>();
  data->nf = nf;
  data->w = checked_generator(nf, torsion_gen);
  data->m = static_cast<std::int64_t>(nf.torsion_order());
  data->saturated = saturated;
  for (const auto& g : free_gens) {
    if (g.is_zero()) math_error("DependentBasis", "zero generator");
    if (g.pow(data->m).is_one()) math_error("DependentBasis", g.to_string() + " is a root of unity");
  }
  data->gens = std::move(free_gens);
  const std::size_t r = data->gens.size();

  {
    PrecisionScope scope(kLogDigits);
    for (int s = 0; s < nf.slots(); ++s) {
      EmbeddingContext ctx = nf.embedding(s, kLogDigits);
      std::vector<Real> row;
      for (const auto& g : data->gens) row.push_back(rebase(Real(boost::multiprecision::log(abs(ctx.evaluate(g))))));
      data->log_moduli.push_back(row);
    }
  }
  std::vector<mpq_class> norms;
  for (const auto& g : data->gens) {
    norms.push_back(norm(g));
    collect_primes(norms.back().get_num(), data->primes);
    collect_primes(norms.back().get_den(), data->primes);
  }
  std::sort(data->primes.begin(), data->primes.end());
  data->primes.erase(std::unique(data->primes.begin(), data->primes.end()), data->primes.end());
  for (const auto& p : data->primes) {
    std::vector<long> row;
    for (const auto& n : norms) row.push_back(rational_valuation(n, p));
    data->valuations.push_back(row);
  }

  if (r > 0) {
    // Sufficient test: if prod p_j^a_j were a root of unity, every log-modulus
    // and every norm valuation of it would vanish.
    PrecisionScope scope(kLogDigits);
    std::vector<std::vector<Real>> A;
    for (const auto& row : data->log_moduli) {
      std::vector<Real> rr;
      for (const auto& v : row) rr.push_back(rebase(v));
      A.push_back(rr);
    }
    for (const auto& row : data->valuations) {
      std::vector<Real> rr;
      for (long v : row) rr.push_back(Real(v));
      A.push_back(rr);
    }
    if (column_rank(A, pow10(-static_cast<long>(kLogDigits) / 2)) < r)
      math_error("DependentBasis", "free generators are not multiplicatively independent (or the independence "
                                   "test is inconclusive for them)");
  }

  MultBasis b;
  b.d_ = data;
  return b;
}

MultBasis MultBasis::symbolic(const NumberField& nf, std::vector<FieldElement> symbols,
                              const std::optional<FieldElement>& torsion_gen) {
  auto data = std::make_shared<BasisData>();
  data->nf = nf;
  data->w = checked_generator(nf, torsion_gen);
  data->m = static_cast<std::int64_t>(nf.torsion_order());
  data->symbolic = true;
  data->saturated = false;
  for (const auto& g : symbols)
    if (g.is_zero()) math_error("NotInSubgroup", "zero log symbol");
  data->gens = std::move(symbols);
  MultBasis b;
  b.d_ = data;
  return b;
}

const NumberField& MultBasis::field() const { return d_->nf; }
std::int64_t MultBasis::m() const { return d_->m; }
const FieldElement& MultBasis::w() const { return d_->w; }
std::size_t MultBasis::rank() const { return d_->gens.size(); }
const FieldElement& MultBasis::free_gen(std::size_t j) const { return d_->gens.at(j); }
const std::vector<FieldElement>& MultBasis::free_gens() const { return d_->gens; }
bool MultBasis::saturated() const { return d_->saturated; }
bool MultBasis::is_symbolic() const { return d_->symbolic; }

// --------------------------------------------------------------- SymbolTable

SymbolTable::SymbolTable(NumberField nf, std::optional<FieldElement> torsion_gen)
    : nf_(std::move(nf)), w_(checked_generator(nf_, torsion_gen)), m_(static_cast<std::int64_t>(nf_.torsion_order())) {}

ExtElement SymbolTable::log(const FieldElement& value) {
  if (value.is_zero()) math_error("NotInSubgroup", "log of zero");
  auto torsion_k = [&](const FieldElement& y) -> std::optional<std::int64_t> {
    if (!y.pow(m_).is_one()) return std::nullopt;
    FieldElement acc = nf_.one();
    for (std::int64_t j = 0; j < m_; ++j) {
      if (acc == y) return j;
      acc *= w_;
    }
    return std::nullopt;
  };
  if (auto k = torsion_k(value)) return ExtElement(*k, {});
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (auto k = torsion_k(value / values_[j])) {
      ExtElement e(*k, std::vector<std::int64_t>(j + 1, 0));
      e.r[j] = 1;
      return e;
    }
  }
  return fresh(value);
}

ExtElement SymbolTable::fresh(const FieldElement& value) {
  values_.push_back(value);
  ExtElement e(0, std::vector<std::int64_t>(values_.size(), 0));
  e.r.back() = 1;
  return e;
}

MultBasis SymbolTable::basis() const { return MultBasis::symbolic(nf_, values_, w_); }

MultBasis rational_prime_basis(const NumberField& nf, const std::vector<mpq_class>& values) {
  if (nf.degree() != 1) input_error("FieldMismatch", "rational prime basis needs a field of degree 1");
  std::vector<mpz_class> primes;
  for (const auto& q : values) {
    collect_primes(q.get_num(), primes);
    collect_primes(q.get_den(), primes);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<FieldElement> gens;
  for (const auto& p : primes) gens.push_back(nf.from_rational(mpq_class(p)));
  return MultBasis::create(nf, gens, true);
}

std::vector<mpz_class> prime_divisors(const mpz_class& n) {
  std::vector<mpz_class> out;
  collect_primes(n, out);
  return out;
}

// ------------------------------------------------------------------ pi, log

FieldElement pi(const ExtElement& e, const MultBasis& basis) {
  if (e.r.size() > basis.rank())
    for (std::size_t j = basis.rank(); j < e.r.size(); ++j)
      if (e.r[j] != 0) input_error("BasisMismatch", "element has more coordinates than the basis");
  std::int64_t k = e.k % basis.m();
  if (k < 0) k += basis.m();
  FieldElement out = basis.w().pow(k);
  for (std::size_t j = 0; j < e.r.size(); ++j)
    if (e.r[j] != 0) out *= basis.free_gen(j).pow(e.r[j]);
  return out;
}

ExtElement log_lift(const FieldElement& z, const MultBasis& basis, const LogLiftOptions& opt) {
  if (z.is_zero()) math_error("NotInSubgroup", "log of zero");
  const BasisData& B = basis.data();
  const std::size_t r = basis.rank();

  auto finish = [&](std::vector<std::int64_t> exps) -> std::optional<ExtElement> {
    FieldElement y = z;
    for (std::size_t j = 0; j < r; ++j)
      if (exps[j] != 0) y /= B.gens[j].pow(exps[j]);
    if (!y.pow(B.m).is_one()) return std::nullopt;
    FieldElement acc = B.nf.one();
    for (std::int64_t k = 0; k < B.m; ++k) {
      if (acc == y) return ExtElement(k, std::move(exps));
      acc *= B.w;
    }
    return std::nullopt;
  };

  if (B.symbolic) {
    if (auto e = finish(std::vector<std::int64_t>(r, 0))) return *e;
    for (std::size_t j = 0; j < r; ++j)
      for (std::int64_t s : {1, -1}) {
        std::vector<std::int64_t> exps(r, 0);
        exps[j] = s;
        if (auto e = finish(exps)) return *e;
      }
    math_error("NotInSubgroup", z.to_string() + " is not a root-of-unity multiple of a log symbol");
  }

  if (r == 0) {
    if (auto e = finish({})) return *e;
    math_error("NotInSubgroup", z.to_string() + " is not a root of unity");
  }

  const mpq_class nz = norm(z);
  if (!supported_on(nz, B.primes))
    math_error("NotInSubgroup", "norm of " + z.to_string() + " has primes outside the basis");

  // valuation matrix a permutation matrix (generators are primes up to units):
  // the exponents are read off the norm, exact check as usual
  if (B.primes.size() == r) {
    std::vector<std::int64_t> exps(r, 0);
    bool perm = true;
    for (std::size_t i = 0; i < r && perm; ++i) {
      int hits = 0;
      for (std::size_t j = 0; j < r; ++j) {
        const long v = B.valuations[i][j];
        if (v == 0) continue;
        if (v != 1 || ++hits > 1) perm = false;
        else exps[j] = rational_valuation(nz, B.primes[i]);
      }
      if (hits != 1) perm = false;
    }
    if (perm)
      if (auto e = finish(exps)) return *e;
  }

  // least squares on log-moduli and norm valuations, then exact verification
  PrecisionScope scope(kLogDigits);
  std::vector<std::vector<Real>> A;
  std::vector<Real> b;
  for (int s = 0; s < B.nf.slots(); ++s) {
    EmbeddingContext ctx = B.nf.embedding(s, kLogDigits);
    std::vector<Real> row;
    for (const auto& v : B.log_moduli[s]) row.push_back(rebase(v));
    A.push_back(row);
    b.push_back(boost::multiprecision::log(abs(ctx.evaluate(z))));
  }
  for (std::size_t i = 0; i < B.primes.size(); ++i) {
    std::vector<Real> row;
    for (long v : B.valuations[i]) row.push_back(Real(v));
    A.push_back(row);
    b.push_back(Real(rational_valuation(nz, B.primes[i])));
  }
  std::vector<std::vector<Real>> AtA(r, std::vector<Real>(r, Real(0)));
  std::vector<Real> Atb(r, Real(0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t a = 0; a < r; ++a) {
      Atb[a] += A[i][a] * b[i];
      for (std::size_t c = 0; c < r; ++c) AtA[a][c] += A[i][a] * A[i][c];
    }
  std::vector<Real> x = solve_linear(AtA, Atb);
  if (x.empty()) precision_exhausted("singular normal equations in log_lift");
  std::vector<std::int64_t> exps(r);
  for (std::size_t j = 0; j < r; ++j) {
    mpz_class e = round_to_integer(x[j]);
    if (abs(e) > opt.exponent_bound)
      math_error("NotInSubgroup", z.to_string() + " needs an exponent beyond the bound");
    exps[j] = e.get_si();
  }
  if (auto e = finish(exps)) return *e;
  math_error("NotInSubgroup", z.to_string() + " is not in the subgroup generated by the basis");
}

// ---------------------------------------------------------------- wedges

namespace {

// coordinates (w~, p~_1, ..., p~_n) of an element
std::vector<mpz_class> coords(const ExtElement& e, std::size_t n) {
  std::vector<mpz_class> c(n + 1);
  c[0] = static_cast<long>(e.k);
  for (std::size_t j = 0; j < n; ++j) c[j + 1] = static_cast<long>(e.coord(j));
  return c;
}

std::size_t width(const WedgeElement& terms, const MultBasis& basis) {
  std::size_t n = basis.rank();
  for (const auto& t : terms) n = std::max({n, t.left.r.size(), t.right.r.size()});
  return n;
}

}  // namespace

// Lemma on zero elements of the exterior square, specialised: with (w~, p~_j)
// a free basis of E (E is torsion free), sum n_i x_i ^ y_i vanishes iff every
// antisymmetrised off-diagonal coefficient is 0 and every diagonal coefficient
// is even (a^a has order 2).  The conditions involving the order of w drop out
// because w~ has infinite order in E; 2-divisibility cannot occur since w has
// no square root in F (it would have order 2m) and saturated p_j have none.
WedgeVerdict wedge_is_zero(const WedgeElement& terms, const MultBasis& basis) {
  const std::size_t n = width(terms, basis);
  std::vector<std::vector<mpz_class>> M(n + 1, std::vector<mpz_class>(n + 1, 0));
  for (const auto& t : terms) {
    auto x = coords(t.left, n), y = coords(t.right, n);
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b) M[a][b] += mpz_class(static_cast<long>(t.coeff)) * x[a] * y[b];
  }
  WedgeVerdict v;
  for (std::size_t a = 0; a <= n && v.zero; ++a) {
    if (M[a][a] % 2 != 0) {
      v.zero = false;
      v.detail = "odd diagonal coefficient at coordinate " + std::to_string(a);
    }
    for (std::size_t b = a + 1; b <= n && v.zero; ++b)
      if (M[a][b] - M[b][a] != 0) {
        v.zero = false;
        v.detail = "nonzero coefficient at coordinate pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
  }
  v.basis_relative = !v.zero && !basis.saturated();
  return v;
}

// Same, in the exterior square of F* = mu_m x free: the w-coordinate is taken
// mod m, so mixed coefficients only need to vanish mod m, and the (w, w)
// coefficient lives in the exterior square of Z/m, which is Z/2 for even m.
WedgeVerdict wedge_is_zero_mod_torsion(const WedgeElement& terms, const MultBasis& basis) {
  const std::size_t n = width(terms, basis);
  std::vector<std::vector<mpz_class>> M(n + 1, std::vector<mpz_class>(n + 1, 0));
  for (const auto& t : terms) {
    auto x = coords(t.left, n), y = coords(t.right, n);
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b) M[a][b] += mpz_class(static_cast<long>(t.coeff)) * x[a] * y[b];
  }
  const mpz_class m = static_cast<long>(basis.m());
  WedgeVerdict v;
  for (std::size_t a = 0; a <= n && v.zero; ++a) {
    if (M[a][a] % 2 != 0) {
      v.zero = false;
      v.detail = "odd diagonal coefficient at coordinate " + std::to_string(a);
    }
    for (std::size_t b = a + 1; b <= n && v.zero; ++b) {
      mpz_class c = M[a][b] - M[b][a];
      if (a == 0) c %= m;
      if (c != 0) {
        v.zero = false;
        v.detail = "nonzero coefficient at coordinate pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
    }
  }
  v.basis_relative = !v.zero && !basis.saturated();
  return v;
}

// ------------------------------------------------------------------ covering

Complex LogLift::lift(const ExtElement& e) const {
  PrecisionScope scope(embedding.working_digits());
  Complex out = lambda_w * Complex(Real(e.k));
  for (std::size_t j = 0; j < e.r.size(); ++j)
    if (e.r[j] != 0) out += lambda_p.at(j) * Complex(Real(e.r[j]));
  return out;
}

LogLift cover_to_C(const MultBasis& basis, const EmbeddingContext& ctx, const Branch& branch) {
  if (!basis.field().same_as(ctx.field())) input_error("FieldMismatch", "basis and embedding disagree");
  PrecisionScope scope(ctx.working_digits());
  const Real tol = pow10(-static_cast<long>(ctx.precision()));
  const Real two_pi = 2 * real_pi();

  LogLift L{basis, ctx, Complex(), {}, 0};
  Complex sw = ctx.evaluate(basis.w());
  if (branch.lambda_w) {
    L.lambda_w = rebase(*branch.lambda_w);
    if (abs(exp(L.lambda_w) - sw) > tol) math_error("BranchInvalid", "lambda_w does not exponentiate to sigma(w)");
  } else {
    L.lambda_w = log(sw);
  }
  Complex mw = L.lambda_w * Complex(Real(basis.m()));
  mpz_class k = round_to_integer(mw.im / two_pi);
  if (abs(mw.re) > tol || abs(mw.im - two_pi * to_real(k)) > tol)
    math_error("BranchInvalid", "m * lambda_w is not in 2 pi i Z");
  L.k_unit = k.get_si();
  if (std::gcd(L.k_unit, basis.m()) != 1) math_error("BranchInvalid", "k_unit not prime to m");

  for (std::size_t j = 0; j < basis.rank(); ++j) {
    Complex sp = ctx.evaluate(basis.free_gen(j));
    if (j < branch.lambda_p.size() && branch.lambda_p[j]) {
      Complex lp = rebase(*branch.lambda_p[j]);
      if (abs(exp(lp) - sp) > tol * std::max(Real(1), abs(sp)))
        math_error("BranchInvalid", "lambda_p does not exponentiate to sigma(p)");
      L.lambda_p.push_back(lp);
    } else {
      L.lambda_p.push_back(log(sp));
    }
  }
  return L;
}

}  // namespace bloch
