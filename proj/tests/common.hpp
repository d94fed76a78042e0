#pragma once

#include "bloch/errors.hpp"
#include "bloch/extbloch.hpp"
#include "bloch/field.hpp"

namespace testing_fields {

using namespace bloch;

inline NumberField example_field() { return NumberField::create({1, -2, 2, -1, 1}); }
inline NumberField rationals() { return NumberField::create({0, 1}); }
inline NumberField sqrt2() { return NumberField::create({-2, 0, 1}); }
inline NumberField gaussian() { return NumberField::create({1, 0, 1}); }

inline FieldElement el(const NumberField& nf, std::vector<mpq_class> c) { return nf.element(std::move(c)); }

// u = -x^3 - 2x + 1, v = x^2 - x + 1 in the example field
inline FieldElement example_u(const NumberField& F) { return el(F, {1, -2, 0, -1}); }
inline FieldElement example_v(const NumberField& F) { return el(F, {1, -1, 1}); }

inline MultBasis example_basis(const NumberField& F) { return MultBasis::create(F, {example_u(F)}, true); }

// (u~, 2u~ + 4w~) + 2(-2u~ + 3w~, -3u~ + w~) - 3 chi(u~)
inline ExtBlochSum example_alpha(const MultBasis& B) {
  ExtBlochSum s(B);
  s.add(1, make_flattening(ExtElement(0, {1}), ExtElement(4, {2}), B));
  s.add(2, make_flattening(ExtElement(3, {-2}), ExtElement(1, {-3}), B));
  s.add_chi(ExtElement(0, {1}), -3);
  return s;
}

}  // namespace testing_fields
