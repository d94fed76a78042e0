// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "bloch/cochain.hpp"
#include "bloch/errors.hpp"
#include "bloch/regulator.hpp"
#include "bloch/torsion.hpp"
#include "io.hpp"

#ifndef BLOCH_FIXTURE_DIR
#define BLOCH_FIXTURE_DIR "tests/fixtures"
#endif

using namespace bloch;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.ok) {
    o.ok = false;
    o.detail = what;
  }
}

std::string sci(const Real& x) { return x.str(3, std::ios_base::scientific); }

Real pi2() { return real_pi() * real_pi(); }

NumberField example_field() { return NumberField::create({1, -2, 2, -1, 1}); }
FieldElement example_u(const NumberField& F) { return F.element({1, -2, 0, -1}); }
FieldElement example_v(const NumberField& F) { return F.element({1, -1, 1}); }

ExtBlochSum example_alpha(const MultBasis& B) {
  ExtBlochSum s(B);
  s.add(1, make_flattening(ExtElement(0, {1}), ExtElement(4, {2}), B));
  s.add(2, make_flattening(ExtElement(3, {-2}), ExtElement(1, {-3}), B));
  s.add_chi(ExtElement(0, {1}), -3);
  return s;
}

// sum of n D(z) at one slot
Real bloch_wigner_at(const ExtBlochSum& s, int slot, unsigned prec) {
  const EmbeddingContext ctx = s.basis.field().embedding(slot, prec);
  Real d = 0;
  for (const auto& t : s.terms) d += Real(t.coeff) * bloch_wigner(ctx.evaluate(cross_ratio(t.fl, s.basis)), prec);
  return d;
}

// same element, each term moved to a random translate with the chi correction
ExtBlochSum shuffle_translates(const ExtBlochSum& s, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-2, 2);
  const MultBasis& B = s.basis;
  ExtBlochSum out(B);
  out.add_chi(s.chi_part);
  for (const auto& t : s.terms) {
    const std::int64_t p = d(rng), q = d(rng);
    out.add(t.coeff, Flattening{t.fl.e + B.iota(p), t.fl.f + B.iota(q)});
    out.add_chi(q * t.fl.e - p * t.fl.f + B.iota(p * q), -t.coeff);
  }
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome example_regulator() {
  Outcome o;
  const NumberField F = example_field();
  const MultBasis B = MultBasis::create(F, {example_u(F)}, true);
  const FieldElement u = example_u(F), v = example_v(F), one = F.one();
  require(o, B.m() == 6, "mu_F should have order 6");
  require(o, pi(ExtElement(4, {2}), B) == one - u, "1 - u = w^4 u^2");
  require(o, pi(ExtElement(3, {-2}), B) == v, "v = w^3 u^-2");
  require(o, pi(ExtElement(1, {-3}), B) == one - v, "1 - v = w u^-3");
  const ExtBlochSum a = example_alpha(B);
  require(o, is_in_Bhat(a).zero, "nu^(alpha) != 0");
  PrecisionScope scope(60);
  const int slot = F.slot_near(Complex(Real("-0.1217"), Real("1.3066")));
  const Complex want(Real("-7.4532"), Real("-2.3126"));
  for (const auto& sv : reg_vector(a, 50)) {
    if (sv.slot != slot) continue;
    const Complex got = sv.value.symmetric();
    const Real err = abs(got - want);
    require(o, err < Real("5e-4"), "R = " + decimal(got, 6));
    if (o.ok) o.detail = "R = " + decimal(got, 6) + " (symmetric range)";
  }
  return o;
}

Outcome sqrt2_torsion() {
  Outcome o;
  const NumberField F = NumberField::create({-2, 0, 1});
  const FlattenedTorsion ft = flattened_torsion(F, 2);
  require(o, ft.half.has_value(), "no half element");
  if (!o.ok) return o;
  PrecisionScope scope(60);
  const int plus = F.slot_near(Complex(boost::multiprecision::sqrt(Real(2))));
  Real err = 1;
  for (const auto& sv : reg_vector(*ft.half, 50))
    if (sv.slot == plus) err = distance_mod_4pi2(sv.value.value, Complex(pi2() / 4));
  require(o, err < pow10(-30), "R(Q) - pi^2/4 = " + sci(err));
  const long order = certify_order(*ft.half, 50);
  require(o, order == 16, "order " + std::to_string(order));
  BlochSum want(F);
  want.add(2, F.element({-1, 1})).add(2, F.element({-1, -1}));
  require(o, beta_p(F, 2) == normalize(want), "beta_2 = " + beta_p(F, 2).to_string());
  if (o.ok) o.detail = "|R(Q) - pi^2/4| = " + sci(err) + ", order 16";
  return o;
}

Outcome beta3_over_q() {
  Outcome o;
  const NumberField Q = NumberField::create({0, 1});
  BlochSum want(Q);
  want.add(2, Q.from_rational(-2)).add(1, Q.from_rational(mpq_class(1, 4)));
  require(o, beta_p(Q, 3) == normalize(want), "beta_3 = " + beta_p(Q, 3).to_string());
  const ExtBlochSum lifted = io::ext_sum(io::read_json(BLOCH_FIXTURE_DIR "/beta3_q.json"));
  require(o, project(lifted) == normalize(want), "fixture does not lift beta_3");
  require(o, is_in_Bhat(lifted).zero, "fixture not in B^");
  const long order = certify_order(lifted, 50);
  require(o, order == 3, "order " + std::to_string(order));
  const TorsionProfile tp = torsion_profile(Q);
  int nu[6] = {-1, -1, -1, -1, -1, -1};
  for (const auto& r : tp.primes)
    if (r.p < 6) nu[r.p] = r.nu;
  require(o, nu[2] == 2 && nu[3] == 1 && nu[5] == 0, "nu table");
  require(o, tp.w == 24, "w = " + tp.w.get_str());
  if (o.ok) o.detail = "order 3, (nu_2, nu_3, nu_5) = (2, 1, 0), w = 24";
  return o;
}

Outcome five_term_suite() {
  Outcome o;
  const NumberField Q = NumberField::create({0, 1});
  std::mt19937 rng(40);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 40);
  PrecisionScope scope(work_digits(40));
  Real worst = 0;
  int done = 0;
  while (done < 200) {
    const FieldElement x = Q.from_rational(mpq_class(num(rng), den(rng)));
    const FieldElement y = Q.from_rational(mpq_class(num(rng), den(rng)));
    std::array<FieldElement, 5> z;
    try {
      z = five_term(x, y);
    } catch (const Error&) {
      continue;
    }
    ++done;
    Logarithm log = Logarithm::rational(Q);
    std::vector<FieldElement> vals;
    for (const auto& t : z) {
      vals.push_back(t);
      vals.push_back(Q.one() - t);
    }
    log.prepare(vals);
    const MultBasis B = log.basis();
    const auto rel = lift_five_term(make_flattening(log(x), log(Q.one() - x), B),
                                    make_flattening(log(y), log(Q.one() - y), B), B);
    require(o, is_lifted_five_term(rel), "relation equations");
    ExtBlochSum rho(B);
    for (std::size_t i = 0; i < 5; ++i) rho.add(i % 2 == 0 ? 1 : -1, rel[i]);
    require(o, is_in_Bhat(rho).zero, "nu^(rho) != 0 for x = " + x.to_string() + ", y = " + y.to_string());
    for (const auto& sv : reg_vector(rho, 40)) {
      const Real d = distance_mod_4pi2(sv.value.value, Complex(0));
      if (d > worst) worst = d;
    }
  }
  require(o, worst < pow10(-25), "max |R| = " + sci(worst));
  if (o.ok) o.detail = "200 relations, max |R| = " + sci(worst) + " at 40 digits";
  return o;
}

Outcome imaginary_part_identity() {
  Outcome o;
  PrecisionScope scope(60);
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> small(-4, 4), coord(-3, 3);
  Real worst = 0;
  int count = 0;
  auto check = [&](const ExtBlochSum& s) {
    require(o, is_in_Bhat(s).zero, "sample not in B^");
    for (const auto& sv : reg_vector(s, 50)) {
      const Real d = abs(sv.value.value.im - bloch_wigner_at(s, sv.slot, 50));
      if (d > worst) worst = d;
    }
    ++count;
  };
  // cyclic torsion cycles with random base vectors, symbolic logs
  auto cyclic_sample = [&](const NumberField& F, const FieldElement& c, unsigned long n) {
    while (true) {
      Logarithm log = Logarithm::symbolic(F);
      const Vec2 v1{F.element({coord(rng), coord(rng)}), F.element({coord(rng), coord(rng)})};
      const Vec2 v2{F.element({coord(rng), coord(rng)}), F.element({coord(rng), coord(rng)})};
      try {
        const ExtBlochSum a = lambda_sl2(cyclic_cycle(c, n), v1, log);
        const ExtBlochSum b = lambda_sl2(cyclic_cycle(c, n), v2, log);
        const MultBasis B = log.basis();
        ExtBlochSum s = rebase(a, B);
        s += small(rng) * rebase(b, B);
        return shuffle_translates(s, rng);
      } catch (const Error& e) {
        if (e.code() != "NotGeneralPosition") throw;
      }
    }
  };
  const NumberField S = NumberField::create({-2, 0, 1});
  for (int i = 0; i < 50; ++i) check(cyclic_sample(S, S.gen(), 8));
  const NumberField F = example_field();
  const MultBasis B = MultBasis::create(F, {example_u(F)}, true);
  const ExtBlochSum alpha = example_alpha(B);
  for (int i = 0; i < 50; ++i) {
    if (i % 2 == 0) {
      int n = small(rng);
      if (n == 0) n = 1;
      ExtBlochSum s = shuffle_translates(n * alpha, rng);
      require(o, same_element(s, n * alpha), "translate rewrite changed the element");
      check(s);
    } else {
      check(cyclic_sample(F, F.one(), 6));
    }
  }
  require(o, worst < pow10(-25), "max |Im R - sum n D| = " + sci(worst));
  if (o.ok) o.detail = std::to_string(count) + " sums, max |Im R - sum n D| = " + sci(worst);
  return o;
}

Outcome flag_boundaries() {
  Outcome o;
  const NumberField Q = NumberField::create({0, 1});
  std::mt19937 rng(66);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 100 && o.ok; ++trial) {
    std::array<Basis3, 5> F;
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      std::vector<Vec3> all;
      for (auto& b : F)
        for (auto& v : b) {
          v = {Q.from_rational(d(rng)), Q.from_rational(d(rng)), Q.from_rational(d(rng))};
          all.push_back(v);
        }
      found = general_position(all);
    }
    require(o, found, "no general-position tuple in 1000 tries");
    if (!found) break;
    Logarithm log = Logarithm::rational(Q);
    const FlagBoundaryReport r = flag_boundary_check(F, log);
    for (int a = 0; a < 5; ++a) require(o, r.partial_ok[static_cast<std::size_t>(a)], "boundary identity " + std::to_string(a));
    require(o, r.boundary_ok, "boundary of the vertex tuple");
    require(o, r.reduces_to_zero, "lambda of the boundary does not normalize to zero");
  }
  if (o.ok) o.detail = "100 tuples, all identities exact";
  return o;
}

Outcome universal_24_torsion() {
  Outcome o;
  const NumberField Q = NumberField::create({0, 1});
  std::mt19937 rng(24);
  std::uniform_int_distribution<int> num(-90, 90), den(1, 50);
  PrecisionScope scope(60);
  Real worst = 0;
  int done = 0;
  while (done < 20) {
    const FieldElement z = Q.from_rational(mpq_class(num(rng), den(rng)));
    if (z.is_zero() || z.is_one()) continue;
    ++done;
    Logarithm log = Logarithm::rational(Q);
    const ExtElement e = log(z), f = log(Q.one() - z);
    const MultBasis B = log.basis();
    ExtBlochSum s(B);
    s.add(1, make_flattening(e, f, B)).add(1, make_flattening(f, e, B));
    for (const auto& sv : reg_vector(s, 50)) {
      const Real dist = distance_mod_4pi2(sv.value.value, Complex(-pi2() / 6));
      if (dist > worst) worst = dist;
    }
    const long order = certify_order(s, 50);
    require(o, order == 24, "order " + std::to_string(order) + " for z = " + z.to_string());
  }
  require(o, worst < pow10(-25), "max distance to -pi^2/6 = " + sci(worst));
  if (o.ok) o.detail = "20 cross-ratios, max |R + pi^2/6| = " + sci(worst) + ", order 24";
  return o;
}

// quotient of the cyclic SL(2) cycle by g, with its determinant cochain
struct CyclicFixture {
  Triangulated3Cycle K;
  IdealCochain c;
};

CyclicFixture cyclic_fixture(const NumberField& Q, int n, int c) {
  std::vector<Gluing> g;
  for (int k = 0; k < n; ++k) {
    g.push_back(Gluing{k, 0, (k + n - 1) % n, 1, {1, 0, 2, 3}});
    g.push_back(Gluing{k, 2, (k + 1) % n, 3, {0, 1, 3, 2}});
  }
  Triangulated3Cycle K = Triangulated3Cycle::create(n, g, {});
  const auto tuples = cyclic_cycle(Q.from_rational(c), static_cast<unsigned long>(n));
  const Vec2 e1{Q.one(), Q.zero()};
  std::vector<FieldElement> vals(static_cast<std::size_t>(K.edge_class_count()));
  for (int t = 0; t < n; ++t)
    for (int e = 0; e < 6; ++e) {
      const auto [i, j] = edge_vertices(e);
      vals[static_cast<std::size_t>(K.edge_class(t, e))] =
          det2(bloch::apply(tuples[static_cast<std::size_t>(t)].g[static_cast<std::size_t>(i)], e1),
               bloch::apply(tuples[static_cast<std::size_t>(t)].g[static_cast<std::size_t>(j)], e1));
    }
  return {K, make_ideal_cochain(K, vals)};
}

Outcome z2_twist_criterion() {
  Outcome o;
  const NumberField Q = NumberField::create({0, 1});
  int ones = 0, zeros = 0;
  for (auto [n, c] : std::vector<std::pair<int, int>>{{4, 0}, {6, 1}}) {
    const CyclicFixture fx = cyclic_fixture(Q, n, c);
    Logarithm log = Logarithm::rational(Q);
    const LiftedCochain lifted = lift_cochain(fx.c, log);
    const int classes = fx.K.edge_class_count();
    for (int mask = 0; mask < (1 << classes); ++mask) {
      std::vector<int> alpha(static_cast<std::size_t>(classes));
      for (int i = 0; i < classes; ++i) alpha[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1 : 1;
      TwistResult r;
      try {
        r = z2_twist(lifted, alpha);
      } catch (const Error& e) {
        if (e.code() == "NotACocycle") continue;
        throw;
      }
      require(o, same_element(r.difference, r.predicted), "difference != sum eps chi(delta)");
      if (r.class_bit == 1) {
        ++ones;
        require(o, certify_order(r.difference, 50) == 2, "class_bit 1 but regulator order is not 2");
      } else {
        ++zeros;
        require(o, normalize(r.difference).is_zero(), "class_bit 0 but the difference does not vanish");
      }
    }
  }
  require(o, ones > 0 && zeros > 0, "both classes should occur");
  if (o.ok) o.detail = std::to_string(ones) + " cocycles with bit 1, " + std::to_string(zeros) + " with bit 0";
  return o;
}

Outcome figure_eight() {
  Outcome o;
  const ManifoldData M = io::manifold(io::read_json(BLOCH_FIXTURE_DIR "/figure_eight.json"));
  const ManifoldInvariant inv = manifold_invariant(M, 50);
  require(o, inv.edges.ok(), "edge conditions");
  require(o, inv.bhat.zero, "not in B^");
  PrecisionScope scope(60);
  const Real want("2.0298832128193072500424051085490405718833786150606");
  for (const auto& s : inv.slots) {
    const Real im = s.reg.value.value.im;
    require(o, abs(abs(im) - want) < pow10(-8), "Im R = " + decimal(im, 12));
    require(o, abs(im - s.bloch_wigner) < pow10(-8), "Im R differs from sum eps D");
    if (o.ok) o.detail = "Im R = " + decimal(im, 12);
  }
  return o;
}

Outcome generator_independence() {
  Outcome o;
  const NumberField F = example_field();
  const MultBasis B = MultBasis::create(F, {example_u(F)}, true);
  const MultBasis Binv = MultBasis::create(F, {example_u(F)}, true, B.w().inverse());
  const ExtBlochSum a = example_alpha(B);
  const ExtBlochSum b = apply_covering(a, Binv, F.gen());
  require(o, is_in_Bhat(b).zero, "rebuilt element not in B^");
  PrecisionScope scope(60);
  const auto ra = reg_vector(a, 50), rb = reg_vector(b, 50);
  Real worst = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const Real d = distance_mod_4pi2(ra[i].value.value, rb[i].value.value);
    if (d > worst) worst = d;
  }
  require(o, ra.size() == rb.size() && worst < pow10(-25), "max difference " + sci(worst));
  if (o.ok) o.detail = "max difference " + sci(worst);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "example end-to-end regulator", 5, example_regulator},
      {2, "Q(sqrt 2) torsion", 5, sqrt2_torsion},
      {3, "beta_3 over Q and the nu table", 2, beta3_over_q},
      {4, "five-term property suite", 30, five_term_suite},
      {5, "imaginary-part identity", 60, imaginary_part_identity},
      {6, "flag-map boundaries", 60, flag_boundaries},
      {7, "universal 24-torsion", 0, universal_24_torsion},
      {8, "Z/2 twist", 0, z2_twist_criterion},
      {9, "figure-eight", 2, figure_eight},
      {10, "generator independence", 0, generator_independence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && c.budget > 0 && secs > c.budget) {
      o.ok = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget)) + " s budget";
    }
    if (!o.ok) ++failed;
    std::printf("%s %2d %-32s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
