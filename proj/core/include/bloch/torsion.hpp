#pragma once

#include <optional>
#include <vector>

#include "bloch/extbloch.hpp"

namespace bloch {

struct NuP {
  unsigned long p = 2;
  int nu = 0;
  int nu_prime = 0;  // nu minus the exponent of p in |mu_F|
  // reconstruction ran out of budget: nu is only a lower bound
  bool lower_bound_only = false;
};

struct TorsionProfile {
  std::vector<NuP> primes;  // every prime up to max(5, 2d + 1)
  mpz_class w;              // 2 prod p^nu_p
  bool certified = true;
};

NuP nu_p(const NumberField& nf, unsigned long p);
TorsionProfile torsion_profile(const NumberField& nf);

// 2cos(2 pi / n) as an element of F (canonical root when several), if present
std::optional<FieldElement> two_cos_in_field(const NumberField& nf, unsigned long n);

// odd p: a_0 = 2, a_1 = c, z_k = a_{k+1} a_{k-1} / a_k^2 for k = 1..p^nu;
// p = 2: b_0 = -1, b_1 = 1, same recurrence, k = 1..2^(nu-1).  NotApplicable if nu_p = 0.
BlochSum beta_p(const NumberField& nf, unsigned long p);

struct FlattenedTorsion {
  unsigned long p = 0;
  unsigned long n = 0;  // p^nu_p
  FieldElement c;
  ExtBlochSum element;                  // sum over k = 1..n
  std::optional<ExtBlochSum> half;      // p = 2: sum over k = 1..n/2
  WedgeVerdict element_verdict;
  std::optional<WedgeVerdict> half_verdict;
};

// flattenings (e_k, f_k) over a symbolic log basis, one symbol per distinct value
FlattenedTorsion flattened_torsion(const NumberField& nf, unsigned long p);

}  // namespace bloch
