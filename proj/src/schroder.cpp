#include "nalin/schroder.hpp"

#include <algorithm>
#include <climits>
#include <functional>

#include "nalin/error.hpp"

namespace nalin {

const char* zero_kind_name(ZeroKind kind) {
  switch (kind) {
    case ZeroKind::kNonzero: return "nonzero";
    case ZeroKind::kStructural: return "structural";
    case ZeroKind::kComputed: return "computed-zero";
  }
  return "?";
}

const char* solver_source_name(SolverSource source) {
  switch (source) {
    case SolverSource::kTermMatching: return "term-matching";
    case SolverSource::kMultinomial: return "multinomial";
    case SolverSource::kSpecialized: return "specialized";
  }
  return "?";
}

namespace {

struct Shape {
  int p = 0;
  bool family = false;
  int i0 = INT_MAX;

  explicit Shape(const PowerSeriesMap& f)
      : p(f.field()->p()), family(f.in_p_divisible_family()),
        i0(f.is_linear() ? INT_MAX : f.lowest_nonlinear_degree()) {}

  // b_k = 0 is forced: below the lowest nonlinear degree, or prime to p
  // for family-F maps.
  bool proven_zero(std::int64_t k) const { return k > 1 && (k < i0 || (family && k % p != 0)); }
};

LaurentSeries one_like(const LaurentSeries& x) { return LaurentSeries::constant(x.field(), 1, x.ram()); }

// Horizon, in U-units, at which 1 - lambda^n is resolved to rel digits for
// every n < D.
std::int64_t divisor_horizon(const MultiplierProfile& prof, std::int64_t D, std::int64_t rel, int ram) {
  Rational worst{0};
  for (std::int64_t n = 1; n < D; ++n) worst = std::max(worst, small_divisor_valuation(prof, n));
  return rel + ceil(worst * ram);
}

// lambda (1 - lambda^n) from lambda^n, with the closed-form valuation checked.
LaurentSeries small_divisor(const MultiplierProfile& prof, const LaurentSeries& lam_n, std::int64_t n,
                            std::int64_t k) {
  const LaurentSeries d = prof.lambda * (one_like(lam_n) - lam_n);
  if (d.is_zero()) {
    fail(ErrorCode::kPrecisionExhausted,
         "1 - lambda^" + std::to_string(n) + " is zero to precision at k = " + std::to_string(k));
  }
  if (d.valuation() != Valuation(small_divisor_valuation(prof, n))) {
    fail(ErrorCode::kInternal, "small divisor valuation mismatch at n = " + std::to_string(n));
  }
  return d;
}

Conjugacy blank(const PowerSeriesMap& f, int D, const MultiplierProfile& prof, SolverSource src) {
  if (D < 1) fail(ErrorCode::kInvalidArgument, "degree must be >= 1");
  Conjugacy g;
  const LaurentSeries zero(f.field(), f.ram());
  g.coeffs.assign(static_cast<std::size_t>(D) + 1, zero);
  g.coeffs[1] = one_like(f.lambda());
  g.zero_kind.assign(static_cast<std::size_t>(D) + 1, ZeroKind::kComputed);
  g.zero_kind[0] = ZeroKind::kStructural;
  g.zero_kind[1] = ZeroKind::kNonzero;
  g.profile = prof;
  g.source = src;
  for (std::int64_t k = 2; k <= D; ++k) {
    if (k % prof.p == 0 && (k - 1) % prof.m == 0) g.resonant.push_back({k, count_resonant(prof, k)});
  }
  return g;
}

// Stores b_k = S_k / d_k; returns true when a coefficient the theory does not
// force to vanish came out zero to precision.
bool settle(Conjugacy& g, const Shape& shape, bool shortcuts, std::int64_t k, const LaurentSeries& s,
            const std::function<LaurentSeries()>& divisor, std::int64_t rel) {
  const auto idx = static_cast<std::size_t>(k);
  if (shortcuts && shape.proven_zero(k)) {
    if (!s.is_zero()) {
      fail(ErrorCode::kCheckFailed, "numerator of b_" + std::to_string(k) + " is nonzero at a proven zero");
    }
    g.coeffs[idx] = LaurentSeries(s.field(), s.ram());
    g.zero_kind[idx] = ZeroKind::kStructural;
    return false;
  }
  const LaurentSeries d = divisor();
  g.coeffs[idx] = divide(s, d, rel);
  if (!g.coeffs[idx].is_zero()) {
    g.zero_kind[idx] = ZeroKind::kNonzero;
    return false;
  }
  g.zero_kind[idx] = ZeroKind::kComputed;
  return g.coeffs[idx].zero_to_precision() && !shape.proven_zero(k);
}

template <typename Attempt>
Conjugacy with_retry(const SolveOptions& opts, Attempt attempt) {
  opts.policy.validate();
  std::int64_t rel = opts.policy.initial;
  while (true) {
    bool starved = false;
    Conjugacy g = attempt(rel, starved);
    g.working_precision = rel;
    if (!starved || !opts.policy.auto_retry) return g;
    const std::int64_t nxt = opts.policy.next(rel);
    if (nxt == 0) return g;
    rel = nxt;
  }
}

void add_into(LaurentSeries& acc, const LaurentSeries& term, std::int64_t rel) {
  if (term.is_exact_zero()) return;
  acc = acc + term.truncated_relative(rel);
}

}  // namespace

Conjugacy solve_sfe(const PowerSeriesMap& f, int D, const SolveOptions& opts) {
  const MultiplierProfile prof = mult_profile(f.lambda());
  const Shape shape(f);
  const bool shortcuts = opts.structural_shortcuts;
  const auto n = static_cast<std::size_t>(D);

  return with_retry(opts, [&](std::int64_t rel, bool& starved) {
    Conjugacy g = blank(f, D, prof, SolverSource::kTermMatching);
    const LaurentSeries zero(f.field(), f.ram());
    std::vector<std::pair<std::size_t, LaurentSeries>> fterms{{1, f.lambda()}};
    for (const auto& [deg, a] : f.terms()) fterms.emplace_back(static_cast<std::size_t>(deg), a);

    // powers[l] = f^l mod x^{D+1}, built on demand.
    std::vector<CoefficientTable> powers(n + 1);
    powers[1] = f.table(D);
    std::function<const CoefficientTable&(std::size_t)> power = [&](std::size_t l) -> const CoefficientTable& {
      if (!powers[l].empty()) return powers[l];
      CoefficientTable out(n + 1, zero);
      if (shortcuts && l % static_cast<std::size_t>(shape.p) == 0) {
        const CoefficientTable& base = power(l / static_cast<std::size_t>(shape.p));
        for (std::size_t i = 1; i * static_cast<std::size_t>(shape.p) <= n; ++i) {
          if (base[i].is_exact_zero()) continue;
          out[i * static_cast<std::size_t>(shape.p)] = base[i].frobenius().truncated_relative(rel);
        }
      } else {
        const CoefficientTable& prev = power(l - 1);
        for (std::size_t i = l - 1; i <= n; ++i) {
          if (prev[i].is_exact_zero()) continue;
          for (const auto& [deg, a] : fterms) {
            if (i + deg > n) break;
            add_into(out[i + deg], prev[i] * a, rel);
          }
        }
      }
      powers[l] = std::move(out);
      return powers[l];
    };

    CoefficientTable sums(n + 1, zero);
    for (std::size_t k = 2; k <= n; ++k) sums[k] = powers[1][k];

    const std::int64_t horizon = divisor_horizon(prof, D, rel, f.ram());
    LaurentSeries lam_pow = one_like(f.lambda());
    for (std::size_t k = 2; k <= n; ++k) {
      lam_pow = (lam_pow * f.lambda()).truncated(horizon);
      const auto kk = static_cast<std::int64_t>(k);
      const LaurentSeries& lp = lam_pow;
      if (settle(g, shape, shortcuts, kk, sums[k], [&] { return small_divisor(prof, lp, kk - 1, kk); }, rel)) {
        starved = true;
      }
      if (g.coeffs[k].is_exact_zero() || k == n) continue;
      const CoefficientTable& pk = power(k);
      for (std::size_t j = k + 1; j <= n; ++j) {
        if (pk[j].is_exact_zero()) continue;
        add_into(sums[j], g.coeffs[k] * pk[j], rel);
      }
    }
    return g;
  });
}

namespace {

// Multinomial l!/(alpha_1! ... alpha_s!) mod p as a product of binomials.
int multinomial_mod_p(const std::vector<std::int64_t>& alpha, int p) {
  std::int64_t total = 0;
  std::int64_t out = 1;
  for (std::int64_t a : alpha) {
    if (a == 0) continue;
    total += a;
    out = out * binomial_mod_p(total, a, p) % p;
    if (out == 0) return 0;
  }
  return static_cast<int>(out);
}

}  // namespace

Conjugacy solve_sfe_multinomial(const PowerSeriesMap& f, int D, const SolveOptions& opts) {
  const MultiplierProfile prof = mult_profile(f.lambda());
  const Shape shape(f);
  const bool shortcuts = opts.structural_shortcuts;

  return with_retry(opts, [&](std::int64_t rel, bool& starved) {
    Conjugacy g = blank(f, D, prof, SolverSource::kMultinomial);
    const LaurentSeries zero(f.field(), f.ram());
    std::vector<int> support{1};
    for (const auto& [deg, a] : f.terms()) {
      if (deg <= D) support.push_back(deg);
    }
    // apow[s][c] = a_{support[s]}^c
    std::vector<std::vector<LaurentSeries>> apow(support.size());
    for (std::size_t s = 0; s < support.size(); ++s) {
      const LaurentSeries a = f.coefficient(support[s]);
      apow[s].push_back(one_like(a));
      for (int c = 1; c * support[s] <= D; ++c) apow[s].push_back((apow[s].back() * a).truncated_relative(rel));
    }

    const std::int64_t horizon = divisor_horizon(prof, D, rel, f.ram());
    LaurentSeries lam_pow = one_like(f.lambda());
    std::vector<std::int64_t> alpha(support.size(), 0);
    for (int k = 2; k <= D; ++k) {
      lam_pow = (lam_pow * f.lambda()).truncated(horizon);
      LaurentSeries s = zero;
      // Enumerate alpha with sum_s alpha_s support[s] = k, largest parts first.
      std::function<void(std::size_t, int)> walk = [&](std::size_t idx, int remaining) {
        if (idx == 0) {
          alpha[0] = remaining;  // support[0] = 1 absorbs the rest
          std::int64_t l = 0;
          for (auto a : alpha) l += a;
          if (l >= k || g.coeffs[static_cast<std::size_t>(l)].is_exact_zero()) return;
          const int c = multinomial_mod_p(alpha, shape.p);
          if (c == 0) return;
          LaurentSeries term = g.coeffs[static_cast<std::size_t>(l)].scaled_int(c);
          for (std::size_t t = 0; t < alpha.size(); ++t) {
            if (alpha[t] > 0) term = (term * apow[t][static_cast<std::size_t>(alpha[t])]).truncated_relative(rel);
          }
          add_into(s, term, rel);
          return;
        }
        const int part = support[idx];
        for (int c = remaining / part; c >= 0; --c) {
          alpha[idx] = c;
          walk(idx - 1, remaining - c * part);
        }
        alpha[idx] = 0;
      };
      walk(support.size() - 1, k);
      const LaurentSeries& lp = lam_pow;
      if (settle(g, shape, shortcuts, k, s, [&] { return small_divisor(prof, lp, k - 1, k); }, rel)) {
        starved = true;
      }
    }
    return g;
  });
}

Conjugacy solve_specialized_p_plus_1(const PowerSeriesMap& f, int Jmax, const SolveOptions& opts) {
  const int p = f.field()->p();
  if (!f.is_binomial(p + 1)) {
    fail(ErrorCode::kInvalidArgument, "specialized recursion needs f = lambda x + a x^" + std::to_string(p + 1));
  }
  if (Jmax < 1) fail(ErrorCode::kInvalidArgument, "Jmax must be >= 1");
  const MultiplierProfile prof = mult_profile(f.lambda());
  const int D = Jmax * p + 1;
  const LaurentSeries a = f.coefficient(p + 1);

  return with_retry(opts, [&](std::int64_t rel, bool& starved) {
    Conjugacy g = blank(f, D, prof, SolverSource::kSpecialized);
    for (int k = 2; k <= D; ++k) {
      if ((k - 1) % p != 0) g.zero_kind[static_cast<std::size_t>(k)] = ZeroKind::kStructural;
    }
    std::vector<LaurentSeries> lam_pows{one_like(a)};
    for (int i = 1; i <= D; ++i) lam_pows.push_back((lam_pows.back() * f.lambda()).truncated_relative(rel));
    std::vector<LaurentSeries> a_pows{one_like(a)};
    for (int t = 1; t <= Jmax; ++t) a_pows.push_back((a_pows.back() * a).truncated_relative(rel));

    const std::int64_t horizon = divisor_horizon(prof, D, rel, f.ram());
    const LaurentSeries lam_p = f.lambda().pow(static_cast<std::uint64_t>(p));
    LaurentSeries lam_jp = one_like(a);
    for (int j = 1; j <= Jmax; ++j) {
      lam_jp = (lam_jp * lam_p).truncated(horizon);
      LaurentSeries s(a.field(), a.ram());
      for (int i = (j - 1 + p) / (p + 1); i <= j - 1; ++i) {
        const LaurentSeries& b = g.coeffs[static_cast<std::size_t>(i * p + 1)];
        if (b.is_exact_zero()) continue;
        const int c = binomial_mod_p(i * p + 1, j - i, p);
        if (c == 0) continue;
        const LaurentSeries term = (b.scaled_int(c) * lam_pows[static_cast<std::size_t>(i * p + 1 - (j - i))])
                                       .truncated_relative(rel) *
                                   a_pows[static_cast<std::size_t>(j - i)];
        add_into(s, term, rel);
      }
      const int k = j * p + 1;
      const LaurentSeries& lj = lam_jp;
      const Shape shape(f);
      if (settle(g, shape, false, k, s, [&] { return small_divisor(prof, lj, k - 1, k); }, rel)) {
        starved = true;
      }
    }
    return g;
  });
}

CoefficientTable sfe_defect(const PowerSeriesMap& f, const Conjugacy& g) {
  const int D = g.degree();
  const std::int64_t rel = std::max<std::int64_t>(g.working_precision, 1);
  CoefficientTable lhs = ps_compose(g.coeffs, f, D, rel);
  for (int k = 1; k <= D; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    lhs[idx] = lhs[idx] - (f.lambda() * g.coeffs[idx]).truncated_relative(rel);
  }
  return lhs;
}

StructuralZeroReport check_structural_zeros(const Conjugacy& g, const PowerSeriesMap& f) {
  StructuralZeroReport r;
  if (!f.in_p_divisible_family()) return r;
  r.applicable = true;
  const int p = f.field()->p();
  for (int k = 2; k <= g.degree(); ++k) {
    if (k % p != 0 && !g.is_zero(k)) r.violations.push_back(k);
  }
  return r;
}

Rational coefficient_lower_bound(const MultiplierProfile& profile, const Gauge& gauge, std::int64_t k) {
  return Rational(k - 1) * gauge.A - profile.v_m * count_resonant(profile, k);
}

BoundReport check_coefficient_bound(const Conjugacy& g, const PowerSeriesMap& f, const Gauge& gauge) {
  BoundReport r;
  if (!f.in_p_divisible_family() || gauge.linear) return r;
  r.applicable = true;
  for (int k = 2; k <= g.degree(); ++k) {
    if (g.zero_kind[static_cast<std::size_t>(k)] == ZeroKind::kStructural) continue;
    BoundRow row;
    row.k = k;
    row.bound = coefficient_lower_bound(g.profile, gauge, k);
    const LaurentSeries& b = g.coeffs[static_cast<std::size_t>(k)];
    if (b.is_exact_zero()) continue;
    if (b.zero_to_precision()) {
      if (!(b.valuation_lower_bound() >= Valuation(row.bound))) r.unresolved.push_back(k);
      continue;
    }
    row.value = b.valuation();
    row.margin = Valuation(row.value.value() - row.bound);
    if (row.margin < Valuation(0)) r.violations.push_back(k);
    r.rows.push_back(row);
  }
  return r;
}

DivergenceCertificate certify_divergence(const PowerSeriesMap& f, int Nmax, const DivergenceOptions& opts) {
  const int p = f.field()->p();
  if (!f.is_binomial(p + 1)) {
    fail(ErrorCode::kInvalidArgument, "divergence certificate needs f = lambda x + a x^" + std::to_string(p + 1));
  }
  if (Nmax < 1) fail(ErrorCode::kInvalidArgument, "Nmax must be >= 1");
  const MultiplierProfile prof = mult_profile(f.lambda());
  std::int64_t j_max = 1;
  for (int i = 1; i < Nmax; ++i) j_max *= p;
  const Conjugacy g = solve_specialized_p_plus_1(f, static_cast<int>(j_max), opts.solve);
  std::optional<Conjugacy> generic;
  if (opts.cross_check) generic = solve_sfe(f, static_cast<int>(j_max * p + 1), opts.solve);

  DivergenceCertificate cert;
  cert.conjectural = prof.m != 1;
  cert.all_match = true;
  const Rational va = f.coefficient(p + 1).valuation().value();
  std::int64_t j = 1;
  for (int N = 1; N <= Nmax; ++N, j *= p) {
    DivergenceRow row;
    row.N = N;
    row.degree = j * p + 1;
    const auto idx = static_cast<std::size_t>(row.degree);
    row.computed = g.coeffs[idx].valuation();
    if (row.computed.is_infinite()) {
      fail(ErrorCode::kPrecisionExhausted, "b_" + std::to_string(row.degree) + " is zero to precision");
    }
    if (generic) {
      const LaurentSeries& other = generic->coeffs[idx];
      if (other.valuation() != row.computed || !other.agrees_with(g.coeffs[idx])) cert.all_match = false;
    }
    row.slope = row.computed.value() / Rational(row.degree);
    if (!cert.conjectural) {
      Rational sum{0};
      for (std::int64_t i = 1; i <= j; ++i) sum += small_divisor_valuation(prof, i * p);
      row.term_sum = Rational(j) * va - sum;
      row.predicted = Rational(j) * va - product_small_divisors(prof, N).closed_form;
      if (*row.term_sum != *row.predicted || Valuation(*row.predicted) != row.computed) cert.all_match = false;
    }
    cert.rows.push_back(row);
  }
  cert.slopes_decreasing = true;
  for (std::size_t i = 1; i < cert.rows.size(); ++i) {
    if (!(cert.rows[i].slope < cert.rows[i - 1].slope)) cert.slopes_decreasing = false;
  }
  if (cert.conjectural) {
    cert.verdict = "conjectural";
  } else {
    cert.verdict = cert.all_match && cert.slopes_decreasing ? "diverges" : "failed";
  }
  return cert;
}

namespace {

std::int64_t min_lead(const CoefficientTable& c) {
  std::int64_t m = 0;
  for (const auto& x : c) {
    if (!x.is_zero()) m = std::min(m, x.lead());
  }
  return m;
}

// sum_k c_k y^k, every omitted digit at or beyond the U-horizon cap.
LaurentSeries eval_table(const CoefficientTable& c, const LaurentSeries& y, std::int64_t cap) {
  const std::int64_t power_cap = cap == LaurentSeries::kExact ? cap : cap - min_lead(c);
  LaurentSeries acc(y.field(), y.ram());
  LaurentSeries power = one_like(y);
  for (std::size_t k = 1; k < c.size(); ++k) {
    power = (power * y).truncated(power_cap);
    if (c[k].is_exact_zero()) continue;
    acc = (acc + c[k] * power).truncated(cap);
  }
  return acc;
}

void require_family(const PowerSeriesMap& f) {
  if (!f.in_p_divisible_family()) {
    fail(ErrorCode::kHypothesisViolated, "residual tail bounds need every nonlinear degree divisible by p");
  }
}

// min over k > D of coefficient_lower_bound(k) + k v.
Rational conjugacy_tail(const MultiplierProfile& prof, const Gauge& gauge, int D, Rational v) {
  const std::int64_t from = D + 1;
  const std::int64_t to = std::max<std::int64_t>(D, prof.k_prime) + prof.m * prof.p;
  Rational best = coefficient_lower_bound(prof, gauge, from) + v * from;
  for (std::int64_t k = from + 1; k <= to; ++k) {
    best = std::min(best, coefficient_lower_bound(prof, gauge, k) + v * k);
  }
  return best;
}

Residual finish(const LaurentSeries& diff, Rational tail) {
  Residual r;
  const std::int64_t cap = ceil(tail * diff.ram());
  r.value = diff.truncated(cap);
  const Rational computed = r.value.is_exact() ? tail : Rational(r.value.precision(), diff.ram());
  r.horizon = Valuation(std::min(tail, computed));
  r.zero_to_precision = r.value.is_zero();
  return r;
}

Residual exact_zero_residual(const LaurentSeries& x) {
  Residual r;
  r.value = LaurentSeries(x.field(), x.ram());
  r.zero_to_precision = true;
  return r;
}

}  // namespace

Residual semiconjugacy_residual(const PowerSeriesMap& f, const Conjugacy& g, const LaurentSeries& x) {
  require_compatible(f.lambda(), x);
  if (x.is_exact_zero() || f.is_linear()) {
    const LaurentSeries y = ps_eval(f, x);
    const LaurentSeries diff = eval_table(g.coeffs, y, LaurentSeries::kExact) -
                               f.lambda() * eval_table(g.coeffs, x, LaurentSeries::kExact);
    if (!diff.is_exact_zero()) fail(ErrorCode::kCheckFailed, "residual of an exact instance is nonzero");
    return exact_zero_residual(x);
  }
  require_family(f);
  const Gauge gauge = ps_gauge(f);
  const DiscProfile dp = disc_profile(g.profile, gauge);
  if (x.is_zero() || !(x.valuation() > Valuation(dp.v_rho))) {
    fail(ErrorCode::kOutsideDomain, "semi-conjugacy residual needs v(x) > v_rho = " + to_string(dp.v_rho));
  }
  const Rational v = x.valuation().value();
  const Rational tail = conjugacy_tail(g.profile, gauge, g.degree(), v);
  const std::int64_t cap = ceil(tail * x.ram());
  const LaurentSeries y = ps_eval(f, x);
  const LaurentSeries diff = eval_table(g.coeffs, y, cap) - f.lambda() * eval_table(g.coeffs, x, cap);
  return finish(diff, tail);
}

Residual full_conjugacy_residual(const PowerSeriesMap& f, const Conjugacy& g, const LaurentSeries& x) {
  require_compatible(f.lambda(), x);
  if (x.is_exact_zero()) return exact_zero_residual(x);
  if (f.is_linear()) {
    const LaurentSeries diff = ps_eval(f, x) - f.lambda() * x;
    if (!diff.is_exact_zero()) fail(ErrorCode::kCheckFailed, "residual of an exact instance is nonzero");
    return exact_zero_residual(x);
  }
  require_family(f);
  const Gauge gauge = ps_gauge(f);
  const DiscProfile dp = disc_profile(g.profile, gauge);
  if (x.is_zero() || !(x.valuation() > Valuation(dp.v_sigma))) {
    fail(ErrorCode::kOutsideDomain, "full conjugacy residual needs v(x) > v_sigma = " + to_string(dp.v_sigma));
  }
  const int D = g.degree();
  const Rational v = x.valuation().value();
  // g^{-1} is an isometry of the sigma-disc: v(c_k) >= (1 - k) v_sigma.
  const Rational inverse_tail = dp.v_sigma + Rational(D + 1) * (v - dp.v_sigma);
  const Rational tail = std::min(inverse_tail, conjugacy_tail(g.profile, gauge, D, v));
  const std::int64_t cap = ceil(tail * x.ram());
  const CoefficientTable inverse = ps_invert(g.coeffs, D, std::max<std::int64_t>(g.working_precision, 1));
  const LaurentSeries h = eval_table(inverse, x, cap);
  const LaurentSeries y = ps_eval(f, h, cap);
  const LaurentSeries diff = eval_table(g.coeffs, y, cap) - f.lambda() * x;
  return finish(diff, tail);
}

ExtensionReport check_bkprime_zero_extension(const Conjugacy& g, const PowerSeriesMap& f) {
  ExtensionReport r;
  const MultiplierProfile& prof = g.profile;
  r.next_resonant = prof.k_prime + prof.m * prof.p;
  if (!f.in_p_divisible_family() || f.is_linear() || prof.k_prime > g.degree() ||
      !g.is_zero(static_cast<int>(prof.k_prime))) {
    r.verdict = "not-applicable";
    return r;
  }
  r.applicable = true;
  const DiscProfile dp = disc_profile(prof, ps_gauge(f));
  for (int k = 2; k <= g.degree(); ++k) {
    const LaurentSeries& b = g.coeffs[static_cast<std::size_t>(k)];
    if (b.is_exact_zero()) continue;
    const Valuation lhs = b.valuation_lower_bound() + Valuation(dp.v_rho * k);
    if (!(lhs > Valuation(dp.v_rho))) r.violations.push_back(k);
  }
  r.holds = r.violations.empty();
  r.verdict = r.holds ? "full conjugacy on >= D_rho(0)" : "failed";
  return r;
}

}  // namespace nalin
