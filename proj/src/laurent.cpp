#include "nalin/laurent.hpp"

#include <algorithm>
#include <cctype>

#include "nalin/error.hpp"

namespace nalin {

void PrecisionPolicy::validate() const {
  if (initial <= 0 || initial > max) {
    fail(ErrorCode::kInvalidArgument, "precision policy requires 0 < M0 <= M_max");
  }
}

std::int64_t PrecisionPolicy::next(std::int64_t current) const {
  if (!auto_retry || current >= max) return 0;
  return std::min(max, 2 * current);
}

std::int64_t horizon_add(std::int64_t a, std::int64_t b) {
  if (a == LaurentSeries::kExact || b == LaurentSeries::kExact) return LaurentSeries::kExact;
  return a + b;
}

LaurentSeries::LaurentSeries(FieldPtr field, int ram) : field_(std::move(field)), ram_(ram) {
  require_field();
  if (ram_ < 1) fail(ErrorCode::kInvalidArgument, "ramification index must be >= 1");
}

LaurentSeries LaurentSeries::zero(FieldPtr field, int ram, std::int64_t prec) {
  LaurentSeries s(std::move(field), ram);
  s.prec_ = prec;
  return s;
}

LaurentSeries LaurentSeries::constant(FieldPtr field, Code c, int ram) {
  return monomial(std::move(field), c, 0, ram);
}

LaurentSeries LaurentSeries::monomial(FieldPtr field, Code c, std::int64_t exponent, int ram) {
  LaurentSeries s(std::move(field), ram);
  if (c >= s.field_->q()) fail(ErrorCode::kInvalidArgument, "coefficient not in field");
  if (c != 0) {
    s.lead_ = exponent;
    s.coeffs_.push_back(c);
  }
  return s;
}

LaurentSeries LaurentSeries::from_coeffs(FieldPtr field, int ram, std::int64_t lead,
                                         std::vector<Code> coeffs, std::int64_t prec) {
  LaurentSeries s(std::move(field), ram);
  for (Code c : coeffs) {
    if (c >= s.field_->q()) fail(ErrorCode::kInvalidArgument, "coefficient not in field");
  }
  s.lead_ = lead;
  s.coeffs_ = std::move(coeffs);
  s.prec_ = prec;
  s.normalize();
  return s;
}

void LaurentSeries::require_field() const {
  if (!field_) fail(ErrorCode::kInvalidArgument, "series has no field");
}

void LaurentSeries::normalize() {
  if (prec_ != kExact) {
    if (lead_ >= prec_) {
      coeffs_.clear();
    } else if (end() > prec_) {
      coeffs_.resize(static_cast<std::size_t>(prec_ - lead_));
    }
  }
  std::size_t first = 0;
  while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
  if (first == coeffs_.size()) {
    coeffs_.clear();
    lead_ = 0;
    return;
  }
  if (first > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
    lead_ += static_cast<std::int64_t>(first);
  }
  while (coeffs_.back() == 0) coeffs_.pop_back();
}

std::int64_t LaurentSeries::lead() const {
  if (coeffs_.empty()) fail(ErrorCode::kPrecisionExhausted, "leading exponent of a zero series");
  return lead_;
}

Code LaurentSeries::coeff(std::int64_t exponent) const {
  if (prec_ != kExact && exponent >= prec_) {
    fail(ErrorCode::kPrecisionExhausted,
         "coefficient of U^" + std::to_string(exponent) + " beyond horizon " + std::to_string(prec_));
  }
  if (coeffs_.empty() || exponent < lead_ || exponent >= end()) return 0;
  return coeffs_[static_cast<std::size_t>(exponent - lead_)];
}

Valuation LaurentSeries::valuation() const {
  if (coeffs_.empty()) return Valuation::infinity();
  return Valuation(Rational(lead_, ram_));
}

Valuation LaurentSeries::valuation_lower_bound() const {
  if (!coeffs_.empty()) return valuation();
  if (prec_ == kExact) return Valuation::infinity();
  return Valuation(Rational(prec_, ram_));
}

Valuation LaurentSeries::horizon() const {
  if (prec_ == kExact) return Valuation::infinity();
  return Valuation(Rational(prec_, ram_));
}

std::int64_t LaurentSeries::relative_precision() const {
  if (coeffs_.empty()) return 0;
  if (prec_ == kExact) return kExact;
  return prec_ - lead_;
}

LaurentSeries LaurentSeries::truncated(std::int64_t horizon) const {
  LaurentSeries s = *this;
  s.prec_ = std::min(prec_, horizon);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::truncated_relative(std::int64_t rel) const {
  if (coeffs_.empty() || rel == kExact) return *this;
  if (is_exact() && static_cast<std::int64_t>(coeffs_.size()) <= rel) return *this;
  return truncated(lead_ + rel);
}

LaurentSeries LaurentSeries::scaled(Code c) const {
  require_field();
  LaurentSeries s = *this;
  if (c == 0) {
    // 0 * (x + O(U^M)) is exactly zero.
    s.coeffs_.clear();
    s.prec_ = kExact;
    s.lead_ = 0;
    return s;
  }
  for (Code& x : s.coeffs_) x = field_->mul(x, c);
  return s;
}

LaurentSeries LaurentSeries::scaled_int(std::int64_t n) const {
  require_field();
  return scaled(field_->from_int(n));
}

LaurentSeries LaurentSeries::shifted(std::int64_t s) const {
  LaurentSeries out = *this;
  if (!out.coeffs_.empty()) out.lead_ += s;
  if (out.prec_ != kExact) out.prec_ += s;
  return out;
}

LaurentSeries LaurentSeries::negated() const {
  require_field();
  LaurentSeries s = *this;
  for (Code& x : s.coeffs_) x = field_->neg(x);
  return s;
}

void require_compatible(const LaurentSeries& x, const LaurentSeries& y) {
  if (!x.field() || !y.field()) fail(ErrorCode::kInvalidArgument, "series has no field");
  if (!(*x.field() == *y.field()) || x.ram() != y.ram()) {
    fail(ErrorCode::kIncompatibleField,
         "incompatible series: " + x.field()->describe() + " e=" + std::to_string(x.ram()) +
             " vs " + y.field()->describe() + " e=" + std::to_string(y.ram()));
  }
}

LaurentSeries operator+(const LaurentSeries& x, const LaurentSeries& y) {
  require_compatible(x, y);
  const std::int64_t prec = std::min(x.prec_, y.prec_);
  if (x.coeffs_.empty() && y.coeffs_.empty()) return LaurentSeries::zero(x.field_, x.ram_, prec);
  std::int64_t lo = LaurentSeries::kExact;
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const LaurentSeries* s : {&x, &y}) {
    if (s->coeffs_.empty()) continue;
    lo = std::min(lo, s->lead_);
    hi = std::max(hi, s->end());
  }
  hi = std::min(hi, prec);
  if (lo >= hi) return LaurentSeries::zero(x.field_, x.ram_, prec);
  LaurentSeries out(x.field_, x.ram_);
  out.lead_ = lo;
  out.prec_ = prec;
  out.coeffs_.assign(static_cast<std::size_t>(hi - lo), 0);
  const FieldParams& f = *x.field_;
  for (const LaurentSeries* s : {&x, &y}) {
    for (std::size_t i = 0; i < s->coeffs_.size(); ++i) {
      const std::int64_t e = s->lead_ + static_cast<std::int64_t>(i);
      if (e >= hi) break;
      Code& slot = out.coeffs_[static_cast<std::size_t>(e - lo)];
      slot = f.add(slot, s->coeffs_[i]);
    }
  }
  out.normalize();
  return out;
}

LaurentSeries operator-(const LaurentSeries& x) { return x.negated(); }

LaurentSeries operator-(const LaurentSeries& x, const LaurentSeries& y) { return x + y.negated(); }

LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y) {
  require_compatible(x, y);
  if (x.is_exact_zero() || y.is_exact_zero()) return LaurentSeries(x.field_, x.ram_);
  if (x.coeffs_.empty() || y.coeffs_.empty()) {
    // At least one factor is O(U^M); bound the product by valuations.
    const std::int64_t vx = x.coeffs_.empty() ? x.prec_ : x.lead_;
    const std::int64_t vy = y.coeffs_.empty() ? y.prec_ : y.lead_;
    return LaurentSeries::zero(x.field_, x.ram_, vx + vy);
  }
  const std::int64_t prec =
      std::min(horizon_add(x.prec_, y.lead_), horizon_add(y.prec_, x.lead_));
  const std::int64_t lo = x.lead_ + y.lead_;
  std::int64_t hi = x.end() + y.end() - 1;
  hi = std::min(hi, prec);
  if (lo >= hi) return LaurentSeries::zero(x.field_, x.ram_, prec);
  const auto n = static_cast<std::size_t>(hi - lo);
  const FieldParams& f = *x.field_;
  LaurentSeries out(x.field_, x.ram_);
  out.lead_ = lo;
  out.prec_ = prec;
  out.coeffs_.assign(n, 0);

  const LaurentSeries& a = x.coeffs_.size() <= y.coeffs_.size() ? x : y;
  const LaurentSeries& b = &a == &x ? y : x;
  const std::size_t nb = std::min(b.coeffs_.size(), n);
  if (f.q() == 2) {
    for (std::size_t i = 0; i < a.coeffs_.size() && i < n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      const std::size_t lim = std::min(nb, n - i);
      Code* dst = out.coeffs_.data() + i;
      const Code* src = b.coeffs_.data();
      for (std::size_t j = 0; j < lim; ++j) dst[j] ^= src[j];
    }
  } else {
    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> logb(nb);
    for (std::size_t j = 0; j < nb; ++j) logb[j] = b.coeffs_[j] == 0 ? kNone : f.log(b.coeffs_[j]);
    for (std::size_t i = 0; i < a.coeffs_.size() && i < n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      const std::uint32_t la = f.log(a.coeffs_[i]);
      const std::size_t lim = std::min(nb, n - i);
      Code* dst = out.coeffs_.data() + i;
      for (std::size_t j = 0; j < lim; ++j) {
        if (logb[j] == kNone) continue;
        dst[j] = f.add(dst[j], f.exp(la + logb[j]));
      }
    }
  }
  out.normalize();
  return out;
}

LaurentSeries LaurentSeries::inverse(std::int64_t rel_cap) const {
  require_field();
  if (is_exact_zero()) fail(ErrorCode::kDivisionByZero, "inverse of exact zero");
  if (coeffs_.empty()) {
    fail(ErrorCode::kPrecisionExhausted, "inverse of a zero-to-precision series O(U^" +
                                             std::to_string(prec_) + ")");
  }
  const FieldParams& f = *field_;
  const Code w0 = f.inv(coeffs_[0]);
  if (coeffs_.size() == 1 && prec_ == kExact) return monomial(field_, w0, -lead_, ram_);
  std::int64_t rel = std::min(relative_precision(), rel_cap);
  if (rel == kExact) fail(ErrorCode::kInvalidArgument, "inverse of a non-monomial exact series needs a finite cap");
  const auto n = static_cast<std::size_t>(rel);
  std::vector<Code> w(n, 0);
  w[0] = w0;
  const Code neg_w0 = f.neg(w0);
  for (std::size_t k = 1; k < n; ++k) {
    Code s = 0;
    const std::size_t lim = std::min(k, coeffs_.size() - 1);
    for (std::size_t i = 1; i <= lim; ++i) s = f.add(s, f.mul(coeffs_[i], w[k - i]));
    w[k] = f.mul(neg_w0, s);
  }
  return from_coeffs(field_, ram_, -lead_, std::move(w), -lead_ + rel);
}

LaurentSeries divide(const LaurentSeries& x, const LaurentSeries& y, std::int64_t rel_cap) {
  require_compatible(x, y);
  if (y.is_exact_zero()) fail(ErrorCode::kDivisionByZero, "division by exact zero");
  if (y.zero_to_precision()) {
    fail(ErrorCode::kPrecisionExhausted,
         "division by zero-to-precision O(U^" + std::to_string(y.precision()) + ")");
  }
  if (x.is_exact_zero()) return LaurentSeries(x.field(), x.ram());
  if (x.zero_to_precision()) return LaurentSeries::zero(x.field(), x.ram(), x.precision() - y.lead());
  std::int64_t rel = rel_cap;
  if (x.relative_precision() != LaurentSeries::kExact) rel = std::min(rel, x.relative_precision());
  LaurentSeries q = x * y.inverse(rel);
  if (!q.is_exact()) q = q.truncated_relative(rel_cap);
  return q;
}

LaurentSeries LaurentSeries::pow(std::uint64_t n, std::int64_t rel_cap) const {
  require_field();
  LaurentSeries acc = constant(field_, 1, ram_);
  LaurentSeries base = truncated_relative(rel_cap);
  while (n) {
    if (n & 1) acc = (acc * base).truncated_relative(rel_cap);
    n >>= 1;
    if (n) base = (base * base).truncated_relative(rel_cap);
  }
  return acc;
}

LaurentSeries LaurentSeries::frobenius() const {
  require_field();
  const auto p = static_cast<std::int64_t>(field_->p());
  LaurentSeries out(field_, ram_);
  if (prec_ != kExact) out.prec_ = prec_ * p;
  if (!coeffs_.empty()) {
    out.lead_ = lead_ * p;
    out.coeffs_.assign((coeffs_.size() - 1) * static_cast<std::size_t>(p) + 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      out.coeffs_[i * static_cast<std::size_t>(p)] = field_->pow(coeffs_[i], static_cast<std::uint64_t>(p));
    }
  }
  out.normalize();
  return out;
}

FqElement LaurentSeries::reduce() const {
  require_field();
  if (coeffs_.empty()) {
    if (prec_ != kExact && prec_ <= 0) {
      fail(ErrorCode::kPrecisionExhausted, "residue of O(U^" + std::to_string(prec_) + ") unknown");
    }
    return FqElement(field_, 0);
  }
  if (lead_ < 0) {
    fail(ErrorCode::kNotIntegral, "reduction of a series with negative valuation " + valuation().str());
  }
  return FqElement(field_, lead_ == 0 ? coeffs_[0] : 0);
}

LaurentSeries LaurentSeries::ramify(int e) const {
  require_field();
  if (e < 1) fail(ErrorCode::kInvalidArgument, "ramification factor must be >= 1");
  LaurentSeries out(field_, ram_ * e);
  if (prec_ != kExact) out.prec_ = prec_ * e;
  if (!coeffs_.empty()) {
    out.lead_ = lead_ * e;
    out.coeffs_.assign((coeffs_.size() - 1) * static_cast<std::size_t>(e) + 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i * static_cast<std::size_t>(e)] = coeffs_[i];
  }
  out.normalize();
  return out;
}

LaurentSeries LaurentSeries::embed(const FieldEmbedding& emb) const {
  require_field();
  if (!(*emb.source() == *field_)) fail(ErrorCode::kIncompatibleField, "embedding source mismatch");
  LaurentSeries out = *this;
  out.field_ = emb.target();
  for (Code& c : out.coeffs_) c = emb(c);
  return out;
}

bool LaurentSeries::agrees_with(const LaurentSeries& other) const {
  require_compatible(*this, other);
  const std::int64_t h = std::min(prec_, other.prec_);
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const LaurentSeries* s : {this, &other}) {
    if (s->coeffs_.empty()) continue;
    lo = std::min(lo, s->lead_);
    hi = std::max(hi, s->end());
  }
  hi = std::min(hi, h);
  auto get = [](const LaurentSeries& s, std::int64_t e) -> Code {
    if (s.coeffs_.empty() || e < s.lead_ || e >= s.end()) return 0;
    return s.coeffs_[static_cast<std::size_t>(e - s.lead_)];
  };
  for (std::int64_t e = lo; e < hi; ++e) {
    if (get(*this, e) != get(other, e)) return false;
  }
  return true;
}

bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
  if (!a.field_ || !b.field_) return a.field_ == b.field_;
  return *a.field_ == *b.field_ && a.ram_ == b.ram_ && a.prec_ == b.prec_ &&
         a.coeffs_ == b.coeffs_ && (a.coeffs_.empty() || a.lead_ == b.lead_);
}

std::string LaurentSeries::render() const {
  require_field();
  const char var = ram_ > 1 ? 'U' : 'T';
  auto power = [&](std::int64_t e) {
    std::string s(1, var);
    if (e != 1) s += "^" + std::to_string(e);
    return s;
  };
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Code c = coeffs_[i];
    if (c == 0) continue;
    const std::int64_t e = lead_ + static_cast<std::int64_t>(i);
    if (!out.empty()) out += "+";
    std::string cs = field_->render(c);
    if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
    if (e == 0) {
      out += cs;
    } else if (c == 1) {
      out += power(e);
    } else {
      out += cs + "*" + power(e);
    }
  }
  if (prec_ != kExact) {
    const std::string big_o = "O(" + power(prec_) + ")";
    out = out.empty() ? big_o : out + " + " + big_o;
  }
  return out.empty() ? "0" : out;
}

namespace {

class LiteralParser {
 public:
  LiteralParser(std::string_view text, const FieldPtr& field, int ram)
      : text_(text), field_(field), ram_(ram) {}

  LaurentSeries run(std::int64_t prec) {
    std::vector<std::pair<std::int64_t, Code>> terms;
    std::int64_t horizon = prec;
    bool first = true;
    skip();
    if (at_end()) throw error("empty literal");
    while (!at_end()) {
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip();
      } else if (!first) {
        throw error("expected '+' or '-'");
      }
      first = false;
      if (peek() == 'O') {
        if (negative) throw error("negated O-term");
        horizon = std::min(horizon, read_big_o());
        skip();
        if (!at_end()) throw error("O-term must come last");
        break;
      }
      auto [exponent, c] = read_term();
      if (negative) c = field_->neg(c);
      terms.emplace_back(exponent, c);
      skip();
    }
    if (terms.empty()) return LaurentSeries::zero(field_, ram_, horizon);
    std::int64_t lo = terms.front().first;
    std::int64_t hi = lo;
    for (const auto& [e, c] : terms) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    std::vector<Code> coeffs(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto& [e, c] : terms) {
      Code& slot = coeffs[static_cast<std::size_t>(e - lo)];
      slot = field_->add(slot, c);
    }
    return LaurentSeries::from_coeffs(field_, ram_, lo, std::move(coeffs), horizon);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  Error error(const std::string& msg) const {
    return Error(ErrorCode::kParse,
                 msg + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  std::int64_t read_uint() {
    skip();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw error("expected integer");
    if (pos_ - start > 15) throw error("integer too large");
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  std::int64_t read_signed_exponent() {
    skip();
    bool paren = false;
    if (peek() == '(') {
      paren = true;
      ++pos_;
      skip();
    }
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    const std::int64_t v = read_uint();
    if (paren) {
      skip();
      if (peek() != ')') throw error("expected ')'");
      ++pos_;
    }
    return negative ? -v : v;
  }

  // Exponent of a variable factor, converted to U-units.
  std::int64_t read_variable() {
    const char var = peek();
    if (var == 'U' && ram_ == 1) throw error("variable U requires ramification index > 1");
    ++pos_;
    std::int64_t e = 1;
    skip();
    if (peek() == '^') {
      ++pos_;
      e = read_signed_exponent();
    }
    return var == 'T' ? e * ram_ : e;
  }

  std::int64_t read_big_o() {
    ++pos_;  // 'O'
    skip();
    if (peek() != '(') throw error("expected '(' after O");
    ++pos_;
    skip();
    if (peek() != 'T' && peek() != 'U') throw error("expected T or U inside O()");
    const std::int64_t e = read_variable();
    skip();
    if (peek() != ')') throw error("expected ')'");
    ++pos_;
    return e;
  }

  std::pair<std::int64_t, Code> read_term() {
    Code c = 1;
    std::int64_t exponent = 0;
    bool have = false;
    while (true) {
      skip();
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        c = field_->mul(c, field_->from_int(read_uint() % field_->p()));
      } else if (ch == 'b') {
        const std::size_t start = pos_;
        ++pos_;
        skip();
        if (peek() == '^') {
          ++pos_;
          read_uint();
        }
        try {
          c = field_->mul(c, field_->parse(text_.substr(start, pos_ - start)));
        } catch (const Error&) {
          pos_ = start;
          throw error("generator 'b' not available in prime field");
        }
      } else if (ch == 'T' || ch == 'U') {
        exponent += read_variable();
      } else if (ch == '(') {
        const std::size_t close = text_.find(')', pos_);
        if (close == std::string_view::npos) throw error("unbalanced '('");
        try {
          c = field_->mul(c, field_->parse(text_.substr(pos_ + 1, close - pos_ - 1)));
        } catch (const Error& e) {
          throw error(std::string("bad coefficient: ") + e.what());
        }
        pos_ = close + 1;
      } else {
        break;
      }
      have = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        skip();
        const char nx = peek();
        if (!(std::isdigit(static_cast<unsigned char>(nx)) || nx == 'b' || nx == 'T' || nx == 'U' ||
              nx == '(')) {
          throw error("expected factor after '*'");
        }
      }
    }
    if (!have) throw error("expected term");
    return {exponent, c};
  }

  std::string_view text_;
  const FieldPtr& field_;
  int ram_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentSeries LaurentSeries::parse(std::string_view text, FieldPtr field, int ram, std::int64_t prec) {
  if (!field) fail(ErrorCode::kInvalidArgument, "series has no field");
  if (ram < 1) fail(ErrorCode::kInvalidArgument, "ramification index must be >= 1");
  return LiteralParser(text, field, ram).run(prec);
}

}  // namespace nalin
