#pragma once

// Truncated Laurent series over F_q in a uniformizer U with U^e = T.
//
// A series is either exact (a Laurent polynomial, every coefficient known) or
// known modulo O(U^M) for an absolute horizon M. Arithmetic propagates the
// horizon pessimistically: a result never claims digits its inputs do not
// justify. Zero tests are relative to the horizon; an exact zero and a
// zero-to-precision value are distinct states.

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "nalin/coeffield.hpp"
#include "nalin/valuation.hpp"

namespace nalin {

struct PrecisionPolicy {
  std::int64_t initial = 64;  // working relative precision, in U-units
  std::int64_t max = 1024;
  bool auto_retry = true;

  void validate() const;
  // Next horizon to try after a precision failure, or 0 when exhausted.
  std::int64_t next(std::int64_t current) const;
};

class LaurentSeries {
 public:
  static constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max();

  // Default-constructed series carry no field; they exist only as container
  // placeholders and must be assigned before use.
  LaurentSeries() = default;
  LaurentSeries(FieldPtr field, int ram);  // exact zero

  static LaurentSeries zero(FieldPtr field, int ram, std::int64_t prec = kExact);
  static LaurentSeries constant(FieldPtr field, Code c, int ram = 1);
  static LaurentSeries monomial(FieldPtr field, Code c, std::int64_t exponent, int ram = 1);
  static LaurentSeries from_coeffs(FieldPtr field, int ram, std::int64_t lead,
                                   std::vector<Code> coeffs, std::int64_t prec = kExact);
  // Grammar: term (("+"|"-") term)*, a term being a product of factors among
  // integers, `b`, `b^k`, `T^j`, `U^j` (ram > 1), parenthesised field
  // literals; an optional trailing `O(T^M)` sets the horizon. `prec` is an
  // absolute horizon in U-units (kExact for an exact literal).
  static LaurentSeries parse(std::string_view text, FieldPtr field, int ram = 1,
                             std::int64_t prec = kExact);

  const FieldPtr& field() const { return field_; }
  int ram() const { return ram_; }
  bool is_exact() const { return prec_ == kExact; }
  std::int64_t precision() const { return prec_; }
  // No known nonzero coefficient (exact zero or zero-to-precision).
  bool is_zero() const { return coeffs_.empty(); }
  bool is_exact_zero() const { return coeffs_.empty() && prec_ == kExact; }
  bool zero_to_precision() const { return coeffs_.empty() && prec_ != kExact; }

  // Exponent of the first nonzero coefficient, in U-units. Requires !is_zero().
  std::int64_t lead() const;
  const std::vector<Code>& coeffs() const { return coeffs_; }
  // One past the last stored exponent.
  std::int64_t end() const { return lead_ + static_cast<std::int64_t>(coeffs_.size()); }
  Code coeff(std::int64_t exponent) const;

  // Exact v(x) = lead/e; +inf when no nonzero coefficient is known.
  Valuation valuation() const;
  // Largest value certainly <= v(x): the valuation, or the horizon when zero.
  Valuation valuation_lower_bound() const;
  // Horizon as a valuation (+inf when exact).
  Valuation horizon() const;
  // Digits known beyond the leading one (kExact for exact nonzero series).
  std::int64_t relative_precision() const;

  LaurentSeries truncated(std::int64_t horizon) const;
  // Keeps at most rel digits past the leading one; exact series that fit stay exact.
  LaurentSeries truncated_relative(std::int64_t rel) const;
  LaurentSeries scaled(Code c) const;
  LaurentSeries scaled_int(std::int64_t n) const;
  LaurentSeries shifted(std::int64_t s) const;  // times U^s
  LaurentSeries negated() const;

  // Multiplicative inverse, with at most `rel_cap` digits of relative
  // precision (the input's own relative precision also bounds it).
  LaurentSeries inverse(std::int64_t rel_cap) const;
  LaurentSeries pow(std::uint64_t n, std::int64_t rel_cap = kExact) const;
  // x^p, computed coefficientwise.
  LaurentSeries frobenius() const;

  // Residue class of an integral series.
  FqElement reduce() const;
  // Reinterpret in U' with U'^e = U.
  LaurentSeries ramify(int e) const;
  LaurentSeries embed(const FieldEmbedding& emb) const;

  // True when both series agree on every exponent below the smaller horizon.
  bool agrees_with(const LaurentSeries& other) const;

  std::string render() const;

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b);

 private:
  void normalize();
  void require_field() const;

  FieldPtr field_;
  int ram_ = 1;
  std::int64_t lead_ = 0;
  std::vector<Code> coeffs_;
  std::int64_t prec_ = kExact;

  friend LaurentSeries operator+(const LaurentSeries& x, const LaurentSeries& y);
  friend LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y);
};

void require_compatible(const LaurentSeries& x, const LaurentSeries& y);

LaurentSeries operator+(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries operator-(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries operator-(const LaurentSeries& x);
LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y);
// Quotient with relative precision at most rel_cap.
LaurentSeries divide(const LaurentSeries& x, const LaurentSeries& y, std::int64_t rel_cap);

// Saturating helpers for horizons (kExact absorbs).
std::int64_t horizon_add(std::int64_t a, std::int64_t b);

}  // namespace nalin
