#include <gtest/gtest.h>

#include <random>

#include "bloch/regulator.hpp"
#include "common.hpp"

using namespace bloch;
using namespace testing_fields;

namespace {

Real R(const char* s) { return Real(s); }

bool near(const Complex& a, const Complex& b, const Real& tol) { return abs(a - b) < tol; }

}  // namespace

TEST(Li2, SpecialValues) {
  PrecisionScope scope(60);
  const Real pi = real_pi(), ln2 = boost::multiprecision::log(Real(2));
  const Real tol = pow10(-48);
  EXPECT_TRUE(near(li2(Complex(1), 50), Complex(pi * pi / 6), tol));
  EXPECT_TRUE(near(li2(Complex(Real(0.5)), 50), Complex(pi * pi / 12 - ln2 * ln2 / 2), tol));
  EXPECT_TRUE(near(li2(Complex(-1), 50), Complex(-pi * pi / 12), tol));
  EXPECT_TRUE(near(li2(Complex(0), 50), Complex(0), tol));
  // Li2(2) from below: pi^2/4 - i pi ln 2
  EXPECT_TRUE(near(li2(Complex(2), 50), Complex(pi * pi / 4, -pi * ln2), tol));
}

TEST(Li2, AgreesWithSeriesAcrossRegions) {
  // reflection, inversion and Bernoulli branches against the direct series
  // at points where it still converges (|z| < 1)
  PrecisionScope scope(50);
  for (const auto& z : {Complex(R("0.7"), R("0.6")), Complex(R("-0.8"), R("0.3")), Complex(R("0.1"), R("-0.95")),
                        Complex(R("0.55"), R("0"))}) {
    Complex sum, power = z;
    for (long n = 1; n < 4000; ++n) {
      sum += power / Complex(Real(n * n));
      power *= z;
    }
    EXPECT_TRUE(near(li2(z, 30), sum, pow10(-28)));
  }
}

TEST(BlochWigner, Values) {
  PrecisionScope scope(60);
  const Complex z(Real(0.5), boost::multiprecision::sqrt(Real(3)) / 2);
  EXPECT_LT(abs(bloch_wigner(z, 50) - R("1.01494160640965362502120255427452028594168930753029979201748910677659747625824402213")),
            pow10(-45));
  EXPECT_LT(abs(bloch_wigner(Complex(R("0.3")), 50)), pow10(-45));
  EXPECT_LT(abs(bloch_wigner(Complex(R("-3.5")), 50)), pow10(-45));
  const Complex w(R("0.4"), R("1.7"));
  EXPECT_LT(abs(bloch_wigner(w, 50) + bloch_wigner(Complex(1) / w, 50)), pow10(-45));
}

TEST(Regulator, ExampleValue) {
  NumberField F = example_field();
  MultBasis B = example_basis(F);
  ExtBlochSum a = example_alpha(B);
  EmbeddingContext ctx = F.embedding(F.slot_near(Complex(R("-0.1217"), R("1.3066"))), 50);
  LogLift L = cover_to_C(B, ctx);
  EXPECT_EQ(L.k_unit, -1);
  PrecisionScope scope(60);
  EXPECT_TRUE(near(L.lambda_w, Complex(0, -real_pi() / 3), pow10(-45)));
  EXPECT_TRUE(near(L.lambda_p[0], Complex(R("-0.2717"), R("-0.6165")), R("1e-4")));
  RegulatorValue v = reg_sum(a, L);
  EXPECT_TRUE(near(v.symmetric(), Complex(R("-7.4532"), R("-2.3126")), R("1e-4")));
}

TEST(Regulator, ReflectionPairGives24Torsion) {
  NumberField Q = rationals();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-40, 40);
  for (int i = 0; i < 10; ++i) {
    mpq_class z(d(rng), std::abs(d(rng)) + 1);
    z.canonicalize();
    if (z == 0 || z == 1) continue;
    std::vector<mpq_class> vals{z, 1 - z};
    MultBasis B = rational_prime_basis(Q, vals);
    ExtElement e = log_lift(Q.from_rational(z), B), f = log_lift(Q.from_rational(1 - z), B);
    ExtBlochSum s(B);
    s.add(1, make_flattening(e, f, B)).add(1, make_flattening(f, e, B));
    auto vec = reg_vector(s, 40);
    ASSERT_EQ(vec.size(), 1u);
    PrecisionScope scope(50);
    EXPECT_LT(distance_mod_4pi2(vec[0].value.value, Complex(-real_pi() * real_pi() / 6)), pow10(-30));
    EXPECT_EQ(certify_order(s, 40), 24);
  }
}

TEST(Regulator, TorsionOrderExamples) {
  PrecisionScope scope(60);
  const Real pi2 = real_pi() * real_pi();
  EXPECT_EQ(torsion_order(reduce_mod_4pi2(Complex(pi2 / 4), 50)), 16);
  EXPECT_EQ(torsion_order(reduce_mod_4pi2(Complex(-pi2 / 6), 50)), 24);
  EXPECT_EQ(torsion_order(reduce_mod_4pi2(Complex(0), 50)), 1);
  EXPECT_FALSE(torsion_order(reduce_mod_4pi2(Complex(R("1.2345")), 50)).has_value());
}

TEST(Regulator, ZagierFormAtQZero) {
  PrecisionScope scope(60);
  for (const auto& z : {Complex(R("0.3"), R("0.8")), Complex(R("-2.5"), R("0.1")), Complex(R("1.5"), R("-0.7"))}) {
    const Complex w0 = log(z), w1 = log(Complex(1) - z);
    const Complex ours = li2(z, 50) + Complex(Real(0.5)) * w0 * w1 - Complex(real_pi() * real_pi() / 6);
    EXPECT_TRUE(near(ours, zagier_regulator(w0, w1, 50), pow10(-40)));
  }
}
