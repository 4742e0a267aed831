#pragma once

#include <cstdint>

#include "nalin/laurent.hpp"
#include "nalin/powerseries.hpp"

namespace nalin {

enum class RootOfUnity { kNo, kYes, kUndetermined };

// Arithmetic data of a unit multiplier lambda.
//
// Over F_q((T)) the roots of unity are exactly the nonzero constants, so
// lambda is screened by its non-constant part. The residue field is finite,
// hence every unit has a root-of-unity reduction: m is the order of the
// reduction, p does not divide m, and k' is the least multiple of p that is
// 1 mod m.
struct MultiplierProfile {
  LaurentSeries lambda;
  int p = 0;
  int category = 2;
  std::int64_t m = 0;
  Rational v_m{0};  // v(1 - lambda^m) > 0
  std::int64_t k_prime = 0;
  RootOfUnity root_of_unity = RootOfUnity::kNo;
};

struct DiscProfile {
  Rational A{0};
  Rational v_rho{0};    // v_m/(mp) - A
  Rational v_sigma{0};  // v_m/(k'-1) - A
};

MultiplierProfile mult_profile(const LaurentSeries& lambda);

// Closed form: 0 if m does not divide n, v_m p^j if n = m a p^j with p not
// dividing a.
Rational small_divisor_valuation(const MultiplierProfile& profile, std::int64_t n);

// v(1 - lambda^n) by square-and-multiply in K. The horizon starts at
// policy.initial and doubles up to policy.max while the difference is zero to
// precision; the result is +inf (flagged) if it never resolves.
struct DirectValuation {
  Valuation value;
  bool zero_to_precision = false;
  std::int64_t horizon = 0;
};
DirectValuation small_divisor_direct(const LaurentSeries& lambda, std::int64_t n,
                                     const PrecisionPolicy& policy = {});

// Sum over i = 1..p^{N-1} of v(1 - lambda^{ip}) both term by term and in
// closed form; requires m = 1.
struct SmallDivisorProduct {
  Rational term_sum{0};
  Rational closed_form{0};
};
SmallDivisorProduct product_small_divisors(const MultiplierProfile& profile, std::int64_t N);

// Number of l <= k with p | l and m | l - 1.
std::int64_t count_resonant(const MultiplierProfile& profile, std::int64_t k);

DiscProfile disc_profile(const MultiplierProfile& profile, const Gauge& gauge);

// v_p(n).
int p_adic_order(std::int64_t n, int p);

}  // namespace nalin
