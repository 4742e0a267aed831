#include "nalin/coeffield.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "nalin/error.hpp"

namespace nalin {
namespace {

constexpr Code kMaxFieldSize = 1u << 20;

// Conway polynomials, constant coefficient first.
const std::map<std::pair<int, int>, std::vector<int>>& conway_table() {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 1}, {1, 1}},       {{2, 2}, {1, 1, 1}},       {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{3, 1}, {1, 1}},       {{3, 2}, {2, 2, 1}},       {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{5, 1}, {3, 1}},       {{5, 2}, {2, 4, 1}},       {{5, 3}, {3, 3, 0, 1}},
      {{5, 4}, {2, 4, 4, 0, 1}},
      {{7, 1}, {4, 1}},       {{7, 2}, {3, 6, 1}},       {{7, 3}, {4, 0, 6, 1}},
      {{7, 4}, {3, 4, 5, 0, 1}},
  };
  return table;
}

int mod(std::int64_t a, int p) {
  const std::int64_t r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

// Remainder of a by the monic polynomial d over F_p (constant first).
std::vector<int> poly_rem(std::vector<int> a, const std::vector<int>& d, int p) {
  const std::size_t dd = d.size() - 1;
  for (std::size_t i = a.size(); i-- > dd;) {
    const int c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) {
      a[i - dd + j] = mod(a[i - dd + j] - static_cast<std::int64_t>(c) * d[j], p);
    }
  }
  a.resize(std::min(a.size(), dd));
  return a;
}

bool all_zero(const std::vector<int>& v) {
  for (int c : v) {
    if (c != 0) return false;
  }
  return true;
}

Code ipow(int p, int r) {
  std::uint64_t q = 1;
  for (int i = 0; i < r; ++i) {
    q *= static_cast<std::uint64_t>(p);
    if (q > kMaxFieldSize) fail(ErrorCode::kInvalidArgument, "field too large (q > 2^20)");
  }
  return static_cast<Code>(q);
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible(int p, const std::vector<int>& poly) {
  if (poly.size() < 2) return false;
  const int deg = static_cast<int>(poly.size()) - 1;
  if (poly.back() == 0) return false;
  for (int k = 1; k <= deg / 2; ++k) {
    // All monic divisors of degree k.
    const std::uint64_t count = ipow(p, k);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<int> d(k + 1, 0);
      std::uint64_t t = idx;
      for (int j = 0; j < k; ++j) {
        d[j] = static_cast<int>(t % p);
        t /= p;
      }
      d[k] = 1;
      if (all_zero(poly_rem(poly, d, p))) return false;
    }
  }
  return true;
}

FieldPtr FieldParams::make(int p, int r) {
  if (!is_prime(p)) fail(ErrorCode::kInvalidArgument, "p = " + std::to_string(p) + " is not prime");
  if (r < 1) fail(ErrorCode::kInvalidArgument, "extension degree r must be >= 1");
  const auto& table = conway_table();
  if (auto it = table.find({p, r}); it != table.end()) return make(p, it->second);
  const Code count = ipow(p, r);
  for (Code idx = 0; idx < count; ++idx) {
    std::vector<int> m(r + 1, 0);
    Code t = idx;
    for (int j = 0; j < r; ++j) {
      m[j] = static_cast<int>(t % p);
      t /= p;
    }
    m[r] = 1;
    if (is_irreducible(p, m)) return make(p, m);
  }
  fail(ErrorCode::kInternal, "no irreducible polynomial found");
}

FieldPtr FieldParams::make(int p, const std::vector<int>& modulus) {
  return FieldPtr(new FieldParams(p, modulus));
}

FieldParams::FieldParams(int p, std::vector<int> modulus)
    : p_(p), r_(static_cast<int>(modulus.size()) - 1), q_(0), modulus_(std::move(modulus)) {
  if (!is_prime(p_)) fail(ErrorCode::kInvalidArgument, "p = " + std::to_string(p_) + " is not prime");
  if (r_ < 1) fail(ErrorCode::kInvalidArgument, "modulus must have degree >= 1");
  for (int c : modulus_) {
    if (c < 0 || c >= p_) fail(ErrorCode::kInvalidArgument, "modulus coefficient out of range [0, p)");
  }
  if (modulus_.back() != 1) fail(ErrorCode::kInvalidArgument, "modulus must be monic");
  if (!is_irreducible(p_, modulus_)) fail(ErrorCode::kInvalidArgument, "modulus is reducible over F_p");
  q_ = ipow(p_, r_);

  neg_.resize(q_);
  for (Code a = 0; a < q_; ++a) {
    auto c = coords(a);
    for (int& x : c) x = (p_ - x) % p_;
    neg_[a] = from_coords(c);
  }

  // Primitive element by exhaustive search, using schoolbook multiplication.
  const std::uint64_t n = q_ - 1;
  const auto factors = prime_factors(static_cast<std::int64_t>(n));
  auto slow_pow = [&](Code a, std::uint64_t e) {
    Code acc = 1;
    Code base = a;
    while (e) {
      if (e & 1) acc = slow_mul(acc, base);
      base = slow_mul(base, base);
      e >>= 1;
    }
    return acc;
  };
  Code gen = 0;
  for (Code c = 1; c < q_ && gen == 0; ++c) {
    bool primitive = true;
    for (auto l : factors) {
      if (slow_pow(c, n / static_cast<std::uint64_t>(l)) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) gen = c;
  }
  if (gen == 0) fail(ErrorCode::kInternal, "no primitive element found");

  exp_.resize(2 * n);
  log_.assign(q_, 0);
  Code x = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    exp_[i] = x;
    exp_[i + n] = x;
    log_[x] = static_cast<std::uint32_t>(i);
    x = slow_mul(x, gen);
  }

  zech_.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto c = coords(exp_[i]);
    c[0] = (c[0] + 1) % p_;
    const Code s = from_coords(c);
    zech_[i] = s == 0 ? -1 : static_cast<std::int64_t>(log_[s]);
  }
}

Code FieldParams::add_nonzero(Code a, Code b) const {
  const std::int64_t n = q_ - 1;
  const std::int64_t la = log_[a];
  const std::int64_t d = (static_cast<std::int64_t>(log_[b]) - la + n) % n;
  const std::int64_t z = zech_[d];
  if (z < 0) return 0;
  return exp_[la + z];
}

Code FieldParams::slow_mul(Code a, Code b) const {
  const auto ca = coords(a);
  const auto cb = coords(b);
  std::vector<int> prod(2 * r_ - 1, 0);
  for (int i = 0; i < r_; ++i) {
    for (int j = 0; j < r_; ++j) {
      prod[i + j] = mod(prod[i + j] + static_cast<std::int64_t>(ca[i]) * cb[j], p_);
    }
  }
  auto rem = poly_rem(prod, modulus_, p_);
  rem.resize(r_, 0);
  return from_coords(rem);
}

Code FieldParams::inv(Code a) const {
  if (a == 0) fail(ErrorCode::kDivisionByZero, "inverse of zero in " + describe());
  const std::uint32_t n = q_ - 1;
  return exp_[(n - log_[a]) % n];
}

Code FieldParams::pow(Code a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  const std::uint64_t n = q_ - 1;
  return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % n)) % n];
}

Code FieldParams::from_int(std::int64_t n) const { return static_cast<Code>(mod(n, p_)); }

std::uint64_t FieldParams::mult_order(Code a) const {
  if (a == 0) fail(ErrorCode::kDivisionByZero, "multiplicative order of zero");
  std::uint64_t n = q_ - 1;
  for (auto l : prime_factors(static_cast<std::int64_t>(q_ - 1))) {
    const auto ul = static_cast<std::uint64_t>(l);
    while (n % ul == 0 && pow(a, n / ul) == 1) n /= ul;
  }
  return n;
}

std::vector<int> FieldParams::coords(Code a) const {
  std::vector<int> c(r_, 0);
  for (int i = 0; i < r_; ++i) {
    c[i] = static_cast<int>(a % p_);
    a /= p_;
  }
  return c;
}

Code FieldParams::from_coords(const std::vector<int>& coords) const {
  if (static_cast<int>(coords.size()) > r_) {
    fail(ErrorCode::kInvalidArgument, "too many coordinates for " + describe());
  }
  Code code = 0;
  for (std::size_t i = coords.size(); i-- > 0;) code = code * p_ + static_cast<Code>(mod(coords[i], p_));
  return code;
}

std::string FieldParams::render(Code a) const {
  if (r_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  const auto c = coords(a);
  std::string out;
  for (int i = r_ - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]) + "*";
    out += "b";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

Code FieldParams::parse(std::string_view text) const {
  std::size_t pos = 0;
  auto error = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::kParse,
                 msg + " at position " + std::to_string(pos) + " in '" + std::string(text) + "'");
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&]() -> std::int64_t {
    skip();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw error("expected integer");
    return std::stoll(std::string(text.substr(start, pos - start)));
  };

  std::vector<int> acc(r_, 0);
  bool first = true;
  skip();
  if (pos == text.size()) throw error("empty field literal");
  while (pos < text.size()) {
    int sign = 1;
    skip();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw error("expected '+' or '-'");
    }
    first = false;
    skip();
    std::int64_t coeff = 1;
    int degree = 0;
    bool have_factor = false;
    while (true) {
      skip();
      if (pos >= text.size()) break;
      const char ch = text[pos];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        coeff = mod(coeff * mod(read_int(), p_), p_);
      } else if (ch == 'b') {
        if (r_ == 1) throw error("generator 'b' not available in prime field");
        ++pos;
        int e = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          e = static_cast<int>(read_int());
        }
        degree += e;
      } else {
        break;
      }
      have_factor = true;
      skip();
      if (pos < text.size() && text[pos] == '*') ++pos;
    }
    if (!have_factor) throw error("expected term");
    // Reduce b^degree via the modulus.
    std::vector<int> mono(degree + 1, 0);
    mono[degree] = static_cast<int>(coeff);
    auto rem = poly_rem(mono, modulus_, p_);
    rem.resize(r_, 0);
    for (int i = 0; i < r_; ++i) acc[i] = mod(acc[i] + sign * rem[i], p_);
  }
  return from_coords(acc);
}

std::string FieldParams::describe() const {
  std::ostringstream os;
  os << "F_" << q_;
  if (r_ > 1) {
    os << " = F_" << p_ << "[b]/(";
    bool first = true;
    for (int i = r_; i >= 0; --i) {
      if (modulus_[i] == 0) continue;
      if (!first) os << "+";
      first = false;
      if (i == 0) {
        os << modulus_[i];
        continue;
      }
      if (modulus_[i] != 1) os << modulus_[i] << "*";
      os << "b";
      if (i > 1) os << "^" << i;
    }
    os << ")";
  }
  return os.str();
}

FqElement::FqElement(FieldPtr field, Code code) : field_(std::move(field)), code_(code) {
  if (!field_) fail(ErrorCode::kInvalidArgument, "null field");
  if (code_ >= field_->q()) fail(ErrorCode::kInvalidArgument, "element code out of range");
}

FqElement FqElement::from_coeffs(FieldPtr field, const std::vector<int>& coeffs) {
  if (static_cast<int>(coeffs.size()) != field->r()) {
    fail(ErrorCode::kInvalidArgument, "coefficient vector must have length r");
  }
  for (int c : coeffs) {
    if (c < 0 || c >= field->p()) fail(ErrorCode::kInvalidArgument, "coefficient not reduced mod p");
  }
  const Code code = field->from_coords(coeffs);
  return FqElement(std::move(field), code);
}

namespace {
void require_same(const FqElement& x, const FqElement& y) {
  if (!(*x.field() == *y.field())) {
    fail(ErrorCode::kIncompatibleField,
         "incompatible fields: " + x.field()->describe() + " vs " + y.field()->describe());
  }
}
}  // namespace

FqElement fq_add(const FqElement& x, const FqElement& y) {
  require_same(x, y);
  return FqElement(x.field(), x.field()->add(x.code(), y.code()));
}

FqElement fq_sub(const FqElement& x, const FqElement& y) {
  require_same(x, y);
  return FqElement(x.field(), x.field()->sub(x.code(), y.code()));
}

FqElement fq_mul(const FqElement& x, const FqElement& y) {
  require_same(x, y);
  return FqElement(x.field(), x.field()->mul(x.code(), y.code()));
}

FqElement fq_inv(const FqElement& x) { return FqElement(x.field(), x.field()->inv(x.code())); }

FqElement fq_pow(const FqElement& x, std::uint64_t n) {
  return FqElement(x.field(), x.field()->pow(x.code(), n));
}

std::uint64_t fq_mult_order(const FqElement& x) { return x.field()->mult_order(x.code()); }

FieldEmbedding::FieldEmbedding(FieldPtr source, FieldPtr target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_->p() != target_->p() || target_->r() % source_->r() != 0) {
    fail(ErrorCode::kIncompatibleField,
         "cannot embed " + source_->describe() + " into " + target_->describe());
  }
  if (*source_ == *target_) {
    image_.resize(source_->q());
    for (Code a = 0; a < source_->q(); ++a) image_[a] = a;
    return;
  }
  const auto& m = source_->modulus();
  const FieldParams& t = *target_;
  auto eval = [&](Code x) {
    Code acc = 0;
    for (std::size_t i = m.size(); i-- > 0;) acc = t.add(t.mul(acc, x), t.from_int(m[i]));
    return acc;
  };
  Code root = 0;
  bool found = false;
  for (Code x = 0; x < t.q() && !found; ++x) {
    if (eval(x) == 0) {
      root = x;
      found = true;
    }
  }
  if (!found) fail(ErrorCode::kInternal, "source modulus has no root in target field");
  image_.resize(source_->q());
  for (Code a = 0; a < source_->q(); ++a) {
    const auto c = source_->coords(a);
    Code acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = t.add(t.mul(acc, root), t.from_int(c[i]));
    image_[a] = acc;
  }
}

}  // namespace nalin
