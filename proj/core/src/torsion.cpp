#include "bloch/torsion.hpp"

#include "bloch/errors.hpp"

namespace bloch {

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

unsigned long ipow(unsigned long p, int e) {
  unsigned long r = 1;
  while (e-- > 0) r *= p;
  return r;
}

int valuation(unsigned long n, unsigned long p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// degree of 2cos(2 pi / n) over Q
unsigned long two_cos_degree(unsigned long n) { return n <= 2 ? 1 : euler_phi(n) / 2; }

}  // namespace

std::optional<FieldElement> two_cos_in_field(const NumberField& nf, unsigned long n) {
  bool exhausted = false;
  auto roots = roots_in_field(poly::two_cos_minpoly(n), nf, &exhausted);
  if (roots.empty()) {
    if (exhausted) math_error("ReconstructionFailed", "budget exhausted looking for 2cos(2pi/" + std::to_string(n) + ")");
    return std::nullopt;
  }
  return roots.front();
}

NuP nu_p(const NumberField& nf, unsigned long p) {
  if (!is_prime(p)) input_error("NotPrime", std::to_string(p) + " is not prime");
  NuP out;
  out.p = p;
  const unsigned long d = static_cast<unsigned long>(nf.degree());
  for (int nu = 1;; ++nu) {
    const unsigned long n = ipow(p, nu);
    const unsigned long deg = two_cos_degree(n);
    if (deg > d) break;
    if (d % deg != 0) break;  // larger powers have degrees that are multiples
    try {
      if (!two_cos_in_field(nf, n)) break;
    } catch (const Error& e) {
      if (e.code() != "ReconstructionFailed") throw;
      out.lower_bound_only = true;
      break;
    }
    out.nu = nu;
  }
  out.nu_prime = out.nu - valuation(nf.torsion_order(), p);
  return out;
}

TorsionProfile torsion_profile(const NumberField& nf) {
  TorsionProfile t;
  t.w = 2;
  const unsigned long bound = std::max<unsigned long>(5, 2 * static_cast<unsigned long>(nf.degree()) + 1);
  for (unsigned long p = 2; p <= bound; ++p) {
    if (!is_prime(p)) continue;
    NuP e = nu_p(nf, p);
    for (int i = 0; i < e.nu; ++i) t.w *= static_cast<unsigned long>(p);
    t.certified = t.certified && !e.lower_bound_only;
    t.primes.push_back(e);
  }
  return t;
}

namespace {

struct Sequence {
  unsigned long n;
  FieldElement c;
  std::vector<FieldElement> t;  // t_0 .. t_{count}
};

// values t_0 .. t_{top + 1}; top = n, or n/2 for the p = 2 generator
Sequence recurrence(const NumberField& nf, unsigned long p, bool full) {
  NuP e = nu_p(nf, p);
  if (e.nu == 0) math_error("NotApplicable", "nu_" + std::to_string(p) + " = 0");
  Sequence s;
  s.n = ipow(p, e.nu);
  s.c = *two_cos_in_field(nf, s.n);
  const std::size_t count = (p == 2 && !full ? s.n / 2 : s.n) + 1;
  s.t.push_back(p == 2 ? nf.from_rational(-1) : nf.from_rational(2));
  s.t.push_back(p == 2 ? nf.one() : s.c);
  while (s.t.size() <= count) s.t.push_back(s.c * s.t[s.t.size() - 1] - s.t[s.t.size() - 2]);
  return s;
}

}  // namespace

BlochSum beta_p(const NumberField& nf, unsigned long p) {
  Sequence s = recurrence(nf, p, false);
  const std::size_t top = p == 2 ? s.n / 2 : s.n;
  BlochSum out(nf);
  for (std::size_t k = 1; k <= top; ++k) {
    if (s.t[k].is_zero()) math_error("DegenerateTuple", "recurrence value vanishes at k = " + std::to_string(k));
    FieldElement z = s.t[k + 1] * s.t[k - 1] / (s.t[k] * s.t[k]);
    if (z.is_zero() || z.is_one()) math_error("DegenerateTuple", "z_" + std::to_string(k) + " in {0, 1}");
    out.add(1, z);
  }
  return normalize(out);
}

FlattenedTorsion flattened_torsion(const NumberField& nf, unsigned long p) {
  FlattenedTorsion out;
  out.p = p;
  Sequence s = recurrence(nf, p, true);
  out.n = s.n;
  out.c = s.c;
  SymbolTable table(nf);
  const std::int64_t m = static_cast<std::int64_t>(nf.torsion_order());
  const FieldElement two = nf.from_rational(2);

  // one log per edge class of the cycle, i.e. per k mod n: a single symbol per value
  std::vector<ExtElement> ell(s.n + 2);
  for (std::size_t k = 0; k < s.n; ++k) ell[k] = table.log(s.t[k]);
  ell[s.n] = ell[0];
  ell[s.n + 1] = ell[1];
  ExtElement ell_a;  // log of t_k^2 - t_{k+1} t_{k-1}
  if (p != 2) {
    // (c + 2)(2 - c)
    if ((s.c + 2).is_zero() || (two - s.c).is_zero()) math_error("DegenerateTuple", "c = +-2");
    ell_a = table.log(s.c + 2) + table.log(two - s.c);
  } else {
    // 2 + c
    if ((s.c + 2).is_zero()) math_error("DegenerateTuple", "c = -2");
    ell_a = table.log(s.c + 2);
  }

  auto build = [&](const std::vector<ExtElement>& logs, std::size_t top, const MultBasis& basis) {
    ExtBlochSum sum(basis);
    for (std::size_t k = 1; k <= top; ++k) {
      ExtElement e = logs[k + 1] + logs[k - 1] - 2 * logs[k];
      ExtElement f = ell_a - 2 * logs[k];
      sum.add(1, make_flattening(e, f, basis));
    }
    return sum;
  };
  MultBasis basis = table.basis();
  out.element = build(ell, s.n, basis);
  out.element_verdict = is_in_Bhat(out.element);
  if (p == 2) {
    // Half of the cycle.  Logs on k = 0..n/2+1 with log t_{n/2} = iota(1) make
    // the nu-hat telescoping vanish, but no consistent choice halves the cycle
    // on the nose: the sum over k <= n/2 doubled misses it by chi(1).  Adding
    // chi(-1/2) gives the half with regulator 2 pi^2 / n at the slot where c is
    // 2cos(2 pi / n).  chi(1/2) would give the other half, off by 2 pi^2 there.
    const std::size_t h = s.n / 2;
    std::vector<ExtElement> half_logs(ell.begin(), ell.begin() + static_cast<std::ptrdiff_t>(h + 2));
    half_logs[h] = ExtElement(m, {});
    half_logs[h + 1] = ExtElement(m / 2, {});
    ExtBlochSum q = build(half_logs, h, basis);
    q.add_chi(ExtElement(-m / 2, {}));
    out.half = normalize(q);
    out.half_verdict = is_in_Bhat(*out.half);
  }
  return out;
}

}  // namespace bloch
