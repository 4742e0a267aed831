#include "nalin/multiplier.hpp"

#include "nalin/error.hpp"

namespace nalin {

int p_adic_order(std::int64_t n, int p) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "p-adic order of 0");
  int j = 0;
  while (n % p == 0) {
    n /= p;
    ++j;
  }
  return j;
}

MultiplierProfile mult_profile(const LaurentSeries& lambda) {
  if (!lambda.field()) fail(ErrorCode::kInvalidArgument, "multiplier has no field");
  if (lambda.is_zero()) fail(ErrorCode::kNonUnitMultiplier, "multiplier is zero to known precision");
  if (lambda.valuation() != Valuation(0)) {
    fail(ErrorCode::kNonUnitMultiplier, "multiplier must satisfy v(lambda) = 0, got " + lambda.valuation().str());
  }
  const FieldPtr& field = lambda.field();
  MultiplierProfile prof;
  prof.lambda = lambda;
  prof.p = field->p();

  const FqElement residue = lambda.reduce();
  const LaurentSeries tail = lambda - LaurentSeries::constant(field, residue.code(), lambda.ram());
  if (tail.is_zero()) {
    if (tail.is_exact()) {
      fail(ErrorCode::kRootOfUnity, "multiplier " + lambda.render() + " is a constant, hence a root of unity");
    }
    fail(ErrorCode::kRootOfUnity, "multiplier " + lambda.render() +
                                      " is constant to known precision; root-of-unity status undetermined");
  }

  prof.m = static_cast<std::int64_t>(fq_mult_order(residue));
  if (prof.m % prof.p == 0) fail(ErrorCode::kInternal, "residue order divisible by p");
  const LaurentSeries one = LaurentSeries::constant(field, 1, lambda.ram());
  const LaurentSeries distance = one - lambda.pow(static_cast<std::uint64_t>(prof.m));
  if (distance.is_zero()) {
    fail(ErrorCode::kRootOfUnity, "1 - lambda^m is zero to known precision; root-of-unity status undetermined");
  }
  prof.v_m = distance.valuation().value();
  if (prof.v_m <= 0) fail(ErrorCode::kInternal, "v(1 - lambda^m) must be positive");

  for (std::int64_t k = prof.p; k <= prof.m * prof.p; k += prof.p) {
    if ((k - 1) % prof.m == 0) {
      prof.k_prime = k;
      break;
    }
  }
  if (prof.k_prime == 0) fail(ErrorCode::kInternal, "no k' found");
  return prof;
}

Rational small_divisor_valuation(const MultiplierProfile& profile, std::int64_t n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "small divisor index must be >= 1");
  if (n % profile.m != 0) return Rational(0);
  std::int64_t scale = 1;
  std::int64_t a = n / profile.m;
  while (a % profile.p == 0) {
    a /= profile.p;
    scale *= profile.p;
  }
  return profile.v_m * scale;
}

DirectValuation small_divisor_direct(const LaurentSeries& lambda, std::int64_t n, const PrecisionPolicy& policy) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "small divisor index must be >= 1");
  policy.validate();
  if (lambda.is_zero() || lambda.valuation() != Valuation(0)) {
    fail(ErrorCode::kNonUnitMultiplier, "multiplier must be a unit");
  }
  const LaurentSeries one = LaurentSeries::constant(lambda.field(), 1, lambda.ram());
  std::int64_t horizon = policy.initial;
  while (true) {
    const LaurentSeries d = one - lambda.pow(static_cast<std::uint64_t>(n), horizon);
    if (!d.is_zero()) return {d.valuation(), false, horizon};
    const std::int64_t nxt = policy.next(horizon);
    if (nxt == 0 || d.precision() < horizon) return {Valuation::infinity(), true, d.precision()};
    horizon = nxt;
  }
}

SmallDivisorProduct product_small_divisors(const MultiplierProfile& profile, std::int64_t N) {
  if (profile.m != 1) {
    fail(ErrorCode::kHypothesisViolated, "product formula requires v(1 - lambda) > 0 (m = 1), got m = " +
                                             std::to_string(profile.m));
  }
  if (N < 1) fail(ErrorCode::kInvalidArgument, "N must be >= 1");
  const std::int64_t p = profile.p;
  std::int64_t terms = 1;
  for (std::int64_t i = 1; i < N; ++i) terms *= p;
  SmallDivisorProduct out;
  for (std::int64_t i = 1; i <= terms; ++i) out.term_sum += small_divisor_valuation(profile, i * p);
  const std::int64_t pN = terms * p;
  out.closed_form = profile.v_m * pN * (Rational(1) + Rational((p - 1) * (N - 1), p));
  if (out.term_sum != out.closed_form) {
    fail(ErrorCode::kInternal, "small divisor product mismatch: " + to_string(out.term_sum) + " vs " +
                                   to_string(out.closed_form));
  }
  return out;
}

std::int64_t count_resonant(const MultiplierProfile& profile, std::int64_t k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "count_resonant needs k >= 1");
  const std::int64_t step = profile.m * profile.p;
  return std::max<std::int64_t>(0, floor_div(k - profile.k_prime, step) + 1);
}

DiscProfile disc_profile(const MultiplierProfile& profile, const Gauge& gauge) {
  if (profile.category != 2) fail(ErrorCode::kHypothesisViolated, "disc profile needs a category-2 multiplier");
  if (gauge.linear) fail(ErrorCode::kInvalidArgument, "linear map has no gauge");
  DiscProfile d;
  d.A = gauge.A;
  d.v_rho = profile.v_m / Rational(profile.m * profile.p) - gauge.A;
  d.v_sigma = profile.v_m / Rational(profile.k_prime - 1) - gauge.A;
  if (!(d.v_sigma > d.v_rho && d.v_rho > -gauge.A)) {
    fail(ErrorCode::kInternal, "disc ordering v_sigma > v_rho > -A violated");
  }
  return d;
}

}  // namespace nalin
