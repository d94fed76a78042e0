#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bloch/extbloch.hpp"

namespace bloch {

// principal dilogarithm, cut [1, inf) continuous from below; error below 10^-precision
Complex li2(const Complex& z, unsigned precision);

// D(z) = Im Li2(z) + arg(1 - z) log|z|
Real bloch_wigner(const Complex& z, unsigned precision);

// value mod 4 pi^2, real part in [0, 4 pi^2)
struct RegulatorValue {
  Complex value;
  unsigned precision = 50;

  // real part moved into (-2 pi^2, 2 pi^2]
  Complex symmetric() const;
  std::string to_string(unsigned frac_digits, bool symmetric_range = false) const;
};

RegulatorValue reduce_mod_4pi2(const Complex& v, unsigned precision);
// distance between two values on the circle R / 4 pi^2 Z (imaginary parts compared directly)
Real distance_mod_4pi2(const Complex& a, const Complex& b);

// unreduced R(z; p, q) = Li2(z) + 1/2 w0 (Log(1 - z) - 2 q pi i) - pi^2/6
Complex reg_flattening_raw(const Flattening& fl, const LogLift& lift);
RegulatorValue reg_flattening(const Flattening& fl, const LogLift& lift);
// Zagier's form F(w1) + w0 w1 / 2 - pi^2/6 with F(x) = Li2(1 - e^x); agrees with R only when q = 0
Complex zagier_regulator(const Complex& w0, const Complex& w1, unsigned precision);

// sum of flattening terms plus -pi i k_unit lift(chi_part)
RegulatorValue reg_sum(const ExtBlochSum& s, const LogLift& lift);

struct SlotRegulator {
  int slot;
  bool real;
  RegulatorValue value;
};

// one value per real slot and per complex-pair representative, principal branches
std::vector<SlotRegulator> reg_vector(const ExtBlochSum& s, unsigned precision);

// sum n B(lift(e), lift(f)) with B(x, y) = Re x Im y - Im x Re y; the
// imaginary part of reg_sum equals sum n D(z) - 1/2 this pairing on nu_hat(s)
Real wedge_pairing(const WedgeElement& w, const LogLift& lift);
Real bloch_wigner_sum(const ExtBlochSum& s, const LogLift& lift);

// denominator of value / 4 pi^2 mod 1, if it is rational with denominator <= max_den
std::optional<long> torsion_order(const RegulatorValue& v, long max_den = 10000);
// lcm over all slots; NotTorsion when some slot has no rational reconstruction
long certify_order(const ExtBlochSum& s, unsigned precision = 50);

}  // namespace bloch
