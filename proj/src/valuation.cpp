#include "nalin/valuation.hpp"

#include <cctype>

#include "nalin/error.hpp"

namespace nalin {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kIncompatibleField: return "incompatible-field";
    case ErrorCode::kDivisionByZero: return "division-by-zero";
    case ErrorCode::kNotIntegral: return "not-integral";
    case ErrorCode::kNonUnitMultiplier: return "non-unit-multiplier";
    case ErrorCode::kRootOfUnity: return "root-of-unity";
    case ErrorCode::kPrecisionExhausted: return "precision-exhausted";
    case ErrorCode::kHypothesisViolated: return "hypothesis-violated";
    case ErrorCode::kOutsideDomain: return "outside-domain";
    case ErrorCode::kCheckFailed: return "check-failed";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kInternal: return "internal-error";
  }
  return "unknown";
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> std::int64_t {
    if (s.empty()) fail(ErrorCode::kParse, "empty rational component in '" + text + "'");
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, "invalid rational '" + text + "'");
    }
    if (pos != s.size()) fail(ErrorCode::kParse, "invalid rational '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::kParse, "zero denominator in '" + text + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

std::int64_t floor(const Rational& r) {
  return floor_div(r.numerator(), r.denominator());
}

std::int64_t ceil(const Rational& r) {
  return ceil_div(r.numerator(), r.denominator());
}

const Rational& Valuation::value() const {
  if (infinite_) fail(ErrorCode::kInternal, "value() of infinite valuation");
  return value_;
}

std::string Valuation::str() const {
  return infinite_ ? "inf" : to_string(value_);
}

}  // namespace nalin
