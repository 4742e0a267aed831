#include "nalin/powerseries.hpp"

#include <algorithm>

#include "nalin/error.hpp"

namespace nalin {

PowerSeriesMap::PowerSeriesMap(LaurentSeries lambda, std::map<int, LaurentSeries> higher)
    : lambda_(std::move(lambda)) {
  if (!lambda_.field()) fail(ErrorCode::kInvalidArgument, "multiplier has no field");
  if (lambda_.is_zero()) fail(ErrorCode::kNonUnitMultiplier, "multiplier is zero to known precision");
  if (lambda_.valuation() != Valuation(0)) {
    fail(ErrorCode::kNonUnitMultiplier, "multiplier must be a unit, got v(lambda) = " + lambda_.valuation().str());
  }
  for (auto& [deg, a] : higher) {
    if (deg < 2) fail(ErrorCode::kInvalidArgument, "nonlinear term of degree " + std::to_string(deg));
    require_compatible(lambda_, a);
    if (a.is_exact_zero()) continue;
    if (a.zero_to_precision()) {
      fail(ErrorCode::kPrecisionExhausted,
           "coefficient of x^" + std::to_string(deg) + " is zero to known precision");
    }
    terms_.emplace(deg, std::move(a));
  }
}

PowerSeriesMap PowerSeriesMap::parse(const std::map<int, std::string>& table, FieldPtr field, int ram) {
  auto it = table.find(1);
  if (it == table.end()) fail(ErrorCode::kParse, "map literal needs a degree-1 entry");
  LaurentSeries lambda = LaurentSeries::parse(it->second, field, ram);
  std::map<int, LaurentSeries> higher;
  for (const auto& [deg, text] : table) {
    if (deg == 1) continue;
    if (deg < 1) fail(ErrorCode::kParse, "map degree must be >= 1, got " + std::to_string(deg));
    higher.emplace(deg, LaurentSeries::parse(text, field, ram));
  }
  return PowerSeriesMap(std::move(lambda), std::move(higher));
}

LaurentSeries PowerSeriesMap::coefficient(int degree) const {
  if (degree == 1) return lambda_;
  auto it = terms_.find(degree);
  if (it == terms_.end()) return LaurentSeries(field(), ram());
  return it->second;
}

int PowerSeriesMap::lowest_nonlinear_degree() const {
  if (terms_.empty()) fail(ErrorCode::kInvalidArgument, "linear map has no nonlinear term");
  return terms_.begin()->first;
}

bool PowerSeriesMap::in_p_divisible_family() const {
  const int p = field()->p();
  return std::all_of(terms_.begin(), terms_.end(), [p](const auto& t) { return t.first % p == 0; });
}

bool PowerSeriesMap::is_binomial(int degree) const {
  return terms_.size() == 1 && terms_.begin()->first == degree;
}

CoefficientTable PowerSeriesMap::table(int max_degree) const {
  CoefficientTable t(static_cast<std::size_t>(max_degree) + 1, LaurentSeries(field(), ram()));
  if (max_degree >= 1) t[1] = lambda_;
  for (const auto& [deg, a] : terms_) {
    if (deg <= max_degree) t[static_cast<std::size_t>(deg)] = a;
  }
  return t;
}

PowerSeriesMap PowerSeriesMap::ramify(int e) const {
  std::map<int, LaurentSeries> higher;
  for (const auto& [deg, a] : terms_) higher.emplace(deg, a.ramify(e));
  return PowerSeriesMap(lambda_.ramify(e), std::move(higher));
}

PowerSeriesMap PowerSeriesMap::embed(const FieldEmbedding& emb) const {
  std::map<int, LaurentSeries> higher;
  for (const auto& [deg, a] : terms_) higher.emplace(deg, a.embed(emb));
  return PowerSeriesMap(lambda_.embed(emb), std::move(higher));
}

std::string PowerSeriesMap::render() const {
  std::string out = "(" + lambda_.render() + ")*x";
  for (const auto& [deg, a] : terms_) out += " + (" + a.render() + ")*x^" + std::to_string(deg);
  return out;
}

Gauge ps_gauge(const PowerSeriesMap& f) {
  Gauge g;
  if (f.is_linear()) {
    g.linear = true;
    return g;
  }
  bool first = true;
  for (const auto& [deg, a] : f.terms()) {
    const Rational ratio = a.valuation().value() / Rational(deg - 1);
    if (first || ratio < g.A) {
      g.A = ratio;
      g.witness = deg;
      first = false;
    }
  }
  return g;
}

namespace {

void check_domain(const PowerSeriesMap& f, const LaurentSeries& x) {
  if (f.is_linear() || x.is_zero()) return;
  const Gauge g = ps_gauge(f);
  if (!(x.valuation() > Valuation(-g.A))) {
    fail(ErrorCode::kOutsideDomain, "point with v(x) = " + x.valuation().str() +
                                        " outside the disc v(x) > " + to_string(-g.A));
  }
}

std::int64_t min_lead(const PowerSeriesMap& f) {
  std::int64_t m = f.lambda().lead();
  for (const auto& [deg, a] : f.terms()) m = std::min(m, a.lead());
  return m;
}

}  // namespace

LaurentSeries ps_eval(const PowerSeriesMap& f, const LaurentSeries& x, std::int64_t cap) {
  require_compatible(f.lambda(), x);
  check_domain(f, x);
  const std::int64_t power_cap =
      cap == LaurentSeries::kExact ? cap : cap - std::min<std::int64_t>(min_lead(f), 0);
  LaurentSeries power = x.truncated(power_cap);
  LaurentSeries acc = (f.lambda() * power).truncated(cap);
  int current = 1;
  for (const auto& [deg, a] : f.terms()) {
    while (current < deg) {
      power = (power * x).truncated(power_cap);
      ++current;
    }
    acc = (acc + a * power).truncated(cap);
  }
  return acc;
}

LaurentSeries ps_iterate(const PowerSeriesMap& f, std::int64_t n, const LaurentSeries& x, std::int64_t cap) {
  if (n < 0) fail(ErrorCode::kInvalidArgument, "iteration count must be >= 0");
  LaurentSeries y = x.truncated(cap);
  for (std::int64_t i = 0; i < n; ++i) y = ps_eval(f, y, cap);
  return y;
}

LaurentSeries ps_derivative_at(const PowerSeriesMap& f, const LaurentSeries& x, std::int64_t cap) {
  require_compatible(f.lambda(), x);
  const std::int64_t power_cap =
      cap == LaurentSeries::kExact ? cap : cap - std::min<std::int64_t>(min_lead(f), 0);
  LaurentSeries acc = f.lambda().truncated(cap);
  LaurentSeries power = LaurentSeries::constant(f.field(), 1, f.ram());
  int current = 0;
  for (const auto& [deg, a] : f.terms()) {
    const LaurentSeries scaled = a.scaled_int(deg);
    if (scaled.is_exact_zero()) continue;
    while (current < deg - 1) {
      power = (power * x).truncated(power_cap);
      ++current;
    }
    acc = (acc + scaled * power).truncated(cap);
  }
  return acc;
}

CoefficientTable table_mul(const CoefficientTable& a, const CoefficientTable& b, int max_degree,
                           std::int64_t rel_cap) {
  if (a.empty() || b.empty()) fail(ErrorCode::kInvalidArgument, "empty coefficient table");
  const auto& proto = a.front();
  CoefficientTable out(static_cast<std::size_t>(max_degree) + 1, LaurentSeries(proto.field(), proto.ram()));
  for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= max_degree; ++i) {
    if (a[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= max_degree; ++j) {
      if (b[j].is_exact_zero()) continue;
      out[i + j] = out[i + j] + (a[i] * b[j]).truncated_relative(rel_cap);
    }
  }
  return out;
}

CoefficientTable compose_tables(const CoefficientTable& outer, const CoefficientTable& inner, int max_degree,
                                std::int64_t rel_cap) {
  if (inner.empty() || outer.empty()) fail(ErrorCode::kInvalidArgument, "empty coefficient table");
  if (!inner[0].is_exact_zero()) fail(ErrorCode::kInvalidArgument, "inner series must vanish at 0");
  const auto& proto = inner.front();
  CoefficientTable result(static_cast<std::size_t>(max_degree) + 1, LaurentSeries(proto.field(), proto.ram()));
  if (!outer[0].is_exact_zero()) result[0] = outer[0];
  CoefficientTable power = inner;
  power.resize(static_cast<std::size_t>(max_degree) + 1, LaurentSeries(proto.field(), proto.ram()));
  for (std::size_t l = 1; l < outer.size() && static_cast<int>(l) <= max_degree; ++l) {
    if (l > 1) power = table_mul(power, inner, max_degree, rel_cap);
    if (outer[l].is_exact_zero()) continue;
    for (std::size_t k = l; k <= static_cast<std::size_t>(max_degree); ++k) {
      if (power[k].is_exact_zero()) continue;
      result[k] = result[k] + (outer[l] * power[k]).truncated_relative(rel_cap);
    }
  }
  return result;
}

CoefficientTable ps_compose(const CoefficientTable& outer, const PowerSeriesMap& inner, int max_degree,
                            std::int64_t rel_cap) {
  return compose_tables(outer, inner.table(max_degree), max_degree, rel_cap);
}

CoefficientTable ps_invert(const CoefficientTable& g, int max_degree, std::int64_t rel_cap) {
  if (g.size() < 2) fail(ErrorCode::kInvalidArgument, "series has no linear term");
  if (!g[0].is_exact_zero()) fail(ErrorCode::kInvalidArgument, "series must vanish at 0");
  const LaurentSeries& g1 = g[1];
  if (g1.is_zero() || g1.valuation() != Valuation(0)) {
    fail(ErrorCode::kNonUnitMultiplier, "linear coefficient must be a unit");
  }
  const auto n = static_cast<std::size_t>(max_degree);
  const LaurentSeries zero(g1.field(), g1.ram());
  CoefficientTable c(n + 1, zero);
  if (n == 0) return c;
  // powers[j][k] = coefficient of x^k in h^j, h the inverse under construction.
  std::vector<CoefficientTable> powers(n + 1, CoefficientTable(n + 1, zero));
  c[1] = divide(LaurentSeries::constant(g1.field(), 1, g1.ram()), g1, rel_cap);
  powers[1][1] = c[1];
  const auto p = static_cast<std::size_t>(g1.field()->p());
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t j = 2; j <= k; ++j) {
      if (j % p == 0) {
        // h^j = (h^{j/p})^p has support in multiples of p.
        if (k % p == 0 && !powers[j / p][k / p].is_exact_zero()) {
          powers[j][k] = powers[j / p][k / p].frobenius().truncated_relative(rel_cap);
        }
        continue;
      }
      LaurentSeries acc = zero;
      for (std::size_t i = 1; i + j <= k + 1; ++i) {
        if (c[i].is_exact_zero() || powers[j - 1][k - i].is_exact_zero()) continue;
        acc = acc + (c[i] * powers[j - 1][k - i]).truncated_relative(rel_cap);
      }
      powers[j][k] = acc;
    }
    LaurentSeries s = zero;
    for (std::size_t j = 2; j <= k && j < g.size(); ++j) {
      if (g[j].is_exact_zero() || powers[j][k].is_exact_zero()) continue;
      s = s + (g[j] * powers[j][k]).truncated_relative(rel_cap);
    }
    c[k] = divide(s.negated(), g1, rel_cap);
    powers[1][k] = c[k];
  }
  return c;
}

int binomial_mod_p(std::int64_t n, std::int64_t k, int p) {
  if (k < 0 || k > n) return 0;
  // Lucas: product of digit binomials, each computed mod p directly.
  std::int64_t result = 1;
  while (n > 0 || k > 0) {
    const std::int64_t nd = n % p;
    const std::int64_t kd = k % p;
    if (kd > nd) return 0;
    std::int64_t num = 1;
    std::int64_t den = 1;
    for (std::int64_t i = 0; i < kd; ++i) {
      num = num * ((nd - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    // den is a unit mod p; invert by Fermat.
    std::int64_t inv = 1;
    std::int64_t base = den;
    for (std::int64_t e = p - 2; e > 0; e >>= 1) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
    }
    result = result * (num * inv % p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<int>(result);
}

}  // namespace nalin
