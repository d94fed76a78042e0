#include <gtest/gtest.h>

#include "bloch/field.hpp"

using namespace bloch;

namespace {

NumberField example_field() { return NumberField::create({1, -2, 2, -1, 1}); }

}  // namespace

TEST(Field, ExampleTorsion) {
  NumberField F = example_field();
  EXPECT_EQ(F.degree(), 4);
  EXPECT_EQ(F.r1(), 0);
  EXPECT_EQ(F.r2(), 2);
  EXPECT_EQ(F.torsion_order(), 6u);
  EXPECT_EQ(F.torsion_generator().to_string(), "x^3 + x");
}
