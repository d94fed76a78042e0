#include <gtest/gtest.h>

#include <numeric>

#include "bloch/regulator.hpp"
#include "bloch/torsion.hpp"
#include "common.hpp"

using namespace bloch;
using namespace testing_fields;

TEST(TorsionProfile, Rationals) {
  TorsionProfile t = torsion_profile(rationals());
  ASSERT_GE(t.primes.size(), 3u);
  EXPECT_EQ(t.primes[0].p, 2u);
  EXPECT_EQ(t.primes[0].nu, 2);
  EXPECT_EQ(t.primes[0].nu_prime, 1);
  EXPECT_EQ(t.primes[1].nu, 1);
  EXPECT_EQ(t.primes[1].nu_prime, 1);
  EXPECT_EQ(t.primes[2].p, 5u);
  EXPECT_EQ(t.primes[2].nu, 0);
  EXPECT_EQ(t.w, 24);
  EXPECT_TRUE(t.certified);
}

TEST(TorsionProfile, Sqrt2AndExample) {
  EXPECT_EQ(nu_p(sqrt2(), 2).nu, 3);
  EXPECT_EQ(torsion_profile(sqrt2()).w, 48);
  // Example field: mu_F of order 6, nu_3 = 1 and nu'_3 = 0
  NuP n3 = nu_p(example_field(), 3);
  EXPECT_EQ(n3.nu, 1);
  EXPECT_EQ(n3.nu_prime, 0);
}

TEST(Beta, ThreeOverQ) {
  NumberField Q = rationals();
  BlochSum b = beta_p(Q, 3);
  BlochSum expected(Q);
  expected.add(2, Q.from_rational(-2)).add(1, Q.from_rational(mpq_class(1, 4)));
  EXPECT_TRUE(b == expected);
  EXPECT_EQ(b.to_string(), "2[-2] + [1/4]");
}

TEST(Beta, TwoOverSqrt2) {
  NumberField F = sqrt2();
  BlochSum b = beta_p(F, 2);
  BlochSum expected(F);
  expected.add(2, el(F, {-1, 1})).add(2, el(F, {-1, -1}));
  EXPECT_TRUE(b == expected);
  // fixed by x -> -x
  EXPECT_TRUE(galois_apply(el(F, {0, -1}), b) == b);
}

TEST(Beta, NotApplicableWithoutRoots) {
  try {
    beta_p(rationals(), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotApplicable");
  }
}

// Recurrence against x^k + x^-k (odd p) and (x^k - x^(1-k))/(x - 1) (p = 2),
// computed directly in Q(zeta_n).
TEST(Beta, RecurrenceMatchesCyclotomicOracle) {
  for (unsigned long n : {3ul, 4ul, 5ul, 7ul, 8ul, 9ul, 16ul}) {
    const unsigned long p = n % 2 == 0 ? 2 : (n == 9 ? 3 : n);
    QPoly cyc = poly::cyclotomic(n);
    std::vector<mpz_class> coeffs;
    for (const auto& c : cyc) coeffs.push_back(c.get_num());
    NumberField K = NumberField::create(coeffs);
    FieldElement c = *two_cos_in_field(K, n);
    // a primitive n-th root x with x + 1/x = c
    std::optional<FieldElement> x;
    for (long j = 1; j < static_cast<long>(n) && !x; ++j) {
      FieldElement y = K.gen().pow(j);
      if (std::gcd(static_cast<unsigned long>(j), n) == 1 && y + y.inverse() == c) x = y;
    }
    ASSERT_TRUE(x.has_value()) << n;
    auto t = [&](long k) {
      if (p == 2) return (x->pow(k) - x->pow(1 - k)) / (*x - K.one());
      return x->pow(k) + x->pow(-k);
    };
    const long top = p == 2 ? static_cast<long>(n / 2) : static_cast<long>(n);
    BlochSum direct(K);
    for (long k = 1; k <= top; ++k) direct.add(1, t(k + 1) * t(k - 1) / (t(k) * t(k)));
    EXPECT_TRUE(beta_p(K, p) == direct) << n;
    if (p != 2)
      for (long k = 0; k <= static_cast<long>(n); ++k) EXPECT_EQ(t(n - k), t(k));
  }
}

TEST(FlattenedTorsion, Sqrt2Half) {
  NumberField F = sqrt2();
  FlattenedTorsion ft = flattened_torsion(F, 2);
  ASSERT_TRUE(ft.half.has_value());
  EXPECT_EQ(ft.n, 8u);
  EXPECT_TRUE(ft.half_verdict->zero);
  // projects to beta_2
  EXPECT_TRUE(project(*ft.half) == beta_p(F, 2));
  PrecisionScope scope(60);
  const Real pi2 = real_pi() * real_pi();
  // pi^2/4 where c = sqrt 2; the conjugate slot sees another half of the cycle
  const int plus = F.slot_near(Complex(boost::multiprecision::sqrt(Real(2))));
  for (const auto& sv : reg_vector(*ft.half, 50)) {
    EXPECT_TRUE(sv.real);
    const Real quarter = pi2 / 4;
    const Complex want(sv.slot == plus ? quarter : Real(9 * quarter));
    EXPECT_LT(distance_mod_4pi2(sv.value.value, want), pow10(-30)) << sv.slot;
  }
  EXPECT_EQ(certify_order(*ft.half, 50), 16);
  // the full cycle is twice the half
  EXPECT_TRUE(same_element(ft.element, 2 * *ft.half));
}

TEST(FlattenedTorsion, ThreeOverQ) {
  NumberField Q = rationals();
  FlattenedTorsion ft = flattened_torsion(Q, 3);
  EXPECT_TRUE(ft.element_verdict.zero);
  EXPECT_TRUE(project(ft.element) == beta_p(Q, 3));
  EXPECT_EQ(certify_order(ft.element, 50), 3);
  EXPECT_EQ(certify_order(2 * ft.element, 50), 3);
  EXPECT_EQ(certify_order(3 * ft.element, 50), 1);
}

TEST(FlattenedTorsion, TwoOverQ) {
  NumberField Q = rationals();
  FlattenedTorsion ft = flattened_torsion(Q, 2);
  EXPECT_TRUE(ft.half_verdict->zero);
  long order = certify_order(*ft.half, 50);
  EXPECT_EQ(order, 8);
  EXPECT_EQ(certify_order(2 * *ft.half, 50), order / 2);
}

TEST(FlattenedTorsion, OrderScalesOnFixtures) {
  FlattenedTorsion ft = flattened_torsion(sqrt2(), 2);
  const long n = certify_order(*ft.half, 40);
  for (long k : {2, 3, 4, 6, 8}) EXPECT_EQ(certify_order(k * *ft.half, 40), n / std::gcd(k, n)) << k;
}
