// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "nalin/discs.hpp"
#include "nalin/error.hpp"
#include "oracle.hpp"

using namespace nalin;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream out;
    out << summary << " (" << checks_ << " checks";
    if (failures_ > 0) out << ", " << failures_ << " failed: " << first_;
    out << ")";
    return {failures_ == 0, out.str()};
  }

 private:
  std::int64_t checks_ = 0;
  std::int64_t failures_ = 0;
  std::string first_;
};

std::string str(const Valuation& v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::string str(const Rational& r) { return str(Valuation(r)); }

LaurentSeries lit(const FieldPtr& F, const char* text) { return LaurentSeries::parse(text, F); }

PrecisionPolicy scaled_policy(int scale) {
  PrecisionPolicy pol;
  pol.initial *= scale;
  pol.max *= scale;
  return pol;
}

std::int64_t floor_of(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

// Divergence of lambda x + x^{p+1}, lambda = 1 + T: v(b_{p^N+1}) for N <= Nmax
// from the specialized recursion, the generic solver and the certificate.
struct DivergenceRun {
  std::vector<Valuation> specialized;
  std::vector<Valuation> generic;
  std::vector<Valuation> certified;
  std::string verdict;
};

DivergenceRun run_divergence(int p, int Nmax, int scale) {
  const auto F = FieldParams::make(p, 1);
  const PowerSeriesMap f(lit(F, "1+T"), {{p + 1, lit(F, "1")}});
  SolveOptions solve;
  solve.policy = scaled_policy(scale);
  std::int64_t top = 1;
  for (int i = 0; i < Nmax; ++i) top *= p;
  const auto spec = solve_specialized_p_plus_1(f, static_cast<int>(top / p), solve);
  const auto gen = solve_sfe(f, static_cast<int>(top + 1), solve);
  DivergenceOptions opts;
  opts.solve = solve;
  opts.cross_check = true;
  const auto cert = certify_divergence(f, Nmax, opts);
  DivergenceRun run;
  run.verdict = cert.verdict;
  std::int64_t pn = 1;
  for (int N = 1; N <= Nmax; ++N) {
    pn *= p;
    run.specialized.push_back(spec.valuation(static_cast<int>(pn + 1)));
    run.generic.push_back(gen.valuation(static_cast<int>(pn + 1)));
    run.certified.push_back(cert.rows[static_cast<std::size_t>(N - 1)].computed);
  }
  return run;
}

Outcome divergence_criterion(int p, int Nmax, const std::vector<std::int64_t>& expected) {
  Tally t;
  const auto run = run_divergence(p, Nmax, 1);
  std::ostringstream values;
  for (int N = 1; N <= Nmax; ++N) {
    const auto i = static_cast<std::size_t>(N - 1);
    // -p^N (1 + (p-1)(N-1)/p)
    Rational pn(1);
    for (int j = 0; j < N; ++j) pn *= p;
    const Rational closed = -pn * (Rational(1) + Rational((p - 1) * (N - 1), p));
    t.expect(closed == Rational(expected[i]), "closed form N=" + std::to_string(N));
    t.expect(run.specialized[i] == Valuation(expected[i]), "specialized N=" + std::to_string(N) + " gave " + str(run.specialized[i]));
    t.expect(run.generic[i] == Valuation(expected[i]), "generic N=" + std::to_string(N) + " gave " + str(run.generic[i]));
    t.expect(run.certified[i] == Valuation(expected[i]), "certificate N=" + std::to_string(N));
    values << (N > 1 ? "," : "") << str(run.generic[i]);
  }
  t.expect(run.verdict == "diverges", "verdict " + run.verdict);
  return t.outcome("v(b_{p^N+1}) = " + values.str() + ", verdict " + run.verdict);
}

Outcome criterion_1() { return divergence_criterion(2, 8, {-2, -6, -16, -40, -96, -224, -512, -1152}); }

Outcome criterion_2() { return divergence_criterion(3, 4, {-3, -15, -63, -243}); }

Outcome criterion_3() {
  Tally t;
  for (auto [p, Nmax] : {std::pair{2, 4}, {3, 4}, {5, 3}}) {
    const auto F = FieldParams::make(p, 1);
    const auto prof = mult_profile(lit(F, "1+T"));
    const Rational v1 = small_divisor_valuation(prof, 1);
    for (int N = 1; N <= Nmax; ++N) {
      const std::string tag = "p=" + std::to_string(p) + " N=" + std::to_string(N);
      std::int64_t pn = 1;
      for (int j = 0; j < N; ++j) pn *= p;
      const Rational expected = v1 * Rational(pn) * (Rational(1) + Rational((p - 1) * (N - 1), p));
      const auto prod = product_small_divisors(prof, N);
      Rational direct(0);
      bool resolved = true;
      for (std::int64_t i = 1; i <= pn / p; ++i) {
        const auto d = small_divisor_direct(prof.lambda, i * p);
        resolved = resolved && !d.zero_to_precision;
        if (!d.zero_to_precision) direct += d.value.value();
      }
      t.expect(prod.term_sum == expected, tag + " term sum " + str(prod.term_sum));
      t.expect(prod.closed_form == expected, tag + " closed form " + str(prod.closed_form));
      t.expect(resolved && direct == expected, tag + " direct " + str(direct));
    }
  }
  return t.outcome("p in {2,3,5}, term sum = closed form = direct series");
}

// Random family-F corpus shared by criteria 4 and 5.
std::vector<PowerSeriesMap> family_corpus() {
  oracle::Rng rng(20240601);
  std::vector<PowerSeriesMap> maps;
  for (int i = 0; i < 50; ++i) {
    const int p = std::array{2, 3, 5}[static_cast<std::size_t>(i % 3)];
    maps.push_back(corpus::random_family_f(rng, p, 50));
  }
  return maps;
}

struct CorpusRun {
  PowerSeriesMap f;
  Conjugacy g;
};

const std::vector<CorpusRun>& solved_corpus() {
  static const std::vector<CorpusRun> runs = [] {
    std::vector<CorpusRun> out;
    for (const auto& f : family_corpus()) out.push_back({f, solve_sfe(f, 400)});
    return out;
  }();
  return runs;
}

Outcome criterion_4() {
  Tally t;
  std::int64_t zeros = 0;
  for (const auto& run : solved_corpus()) {
    const auto rep = check_structural_zeros(run.g, run.f);
    t.expect(rep.applicable, "not applicable: " + run.f.render());
    t.expect(rep.violations.empty(), "violations in " + run.f.render());
    // Independent reading of the table.
    const int p = run.f.field()->p();
    for (int k = 2; k <= run.g.degree(); ++k) {
      if (k % p == 0) continue;
      t.expect(run.g.coeffs[static_cast<std::size_t>(k)].is_zero(),
               "b_" + std::to_string(k) + " nonzero in " + run.f.render());
      ++zeros;
    }
  }
  return t.outcome("50 maps to D=400, " + std::to_string(zeros) + " forced zeros");
}

// v(a_{k'}) = (k'-1)A and v(a_i) > (i-1)A for 2 <= i < k'.
bool sharp_at_k_prime(const PowerSeriesMap& f, const MultiplierProfile& prof, const Gauge& gauge) {
  const int kp = static_cast<int>(prof.k_prime);
  for (const auto& [i, a] : f.terms()) {
    const Valuation edge(Rational(i - 1) * gauge.A);
    if (i < kp && !(a.valuation() > edge)) return false;
    if (i == kp && !(a.valuation() == edge)) return false;
  }
  return f.terms().count(kp) == 1;
}

// Family-F maps with the sharp hypothesis at k', added to the corpus so that
// the margin-0 clause is exercised.
std::vector<PowerSeriesMap> sharp_supplement() {
  oracle::Rng rng(99);
  std::vector<PowerSeriesMap> maps;
  for (int i = 0; i < 12; ++i) {
    const int p = std::array{2, 3, 5}[static_cast<std::size_t>(i % 3)];
    const auto F = FieldParams::make(p, 1);
    const auto lambda = corpus::random_multiplier(rng, F, i % 2 == 0);
    const int kp = static_cast<int>(mult_profile(lambda).k_prime);
    const std::int64_t A = rng.uniform(-1, 1);
    std::map<int, LaurentSeries> terms;
    terms[kp] = LaurentSeries::monomial(F, rng.element(F->q(), true), A * (kp - 1));
    for (int extra = 0; extra < 2; ++extra) {
      const int deg = kp + p * static_cast<int>(rng.uniform(1, 6));
      terms[deg] = LaurentSeries::monomial(F, rng.element(F->q(), true), A * (deg - 1) + rng.uniform(0, 2));
    }
    maps.emplace_back(lambda, terms);
  }
  return maps;
}

Outcome criterion_5() {
  Tally t;
  std::int64_t sharp = 0;
  std::int64_t rows = 0;
  auto check = [&](const PowerSeriesMap& f, const Conjugacy& g) {
    const auto gauge = ps_gauge(f);
    const auto prof = mult_profile(f.lambda());
    const auto rep = check_coefficient_bound(g, f, gauge);
    t.expect(rep.applicable, "not applicable: " + f.render());
    t.expect(rep.violations.empty(), "violation in " + f.render());
    t.expect(rep.unresolved.empty(), "unresolved in " + f.render());
    for (const auto& row : rep.rows) {
      ++rows;
      const Rational bound = Rational(row.k - 1) * gauge.A - prof.v_m * count_resonant(prof, row.k);
      t.expect(row.bound == bound, "bound at k=" + std::to_string(row.k));
      const auto& b = g.coeffs[static_cast<std::size_t>(row.k)];
      t.expect(b.is_exact_zero() || b.valuation_lower_bound() >= Valuation(bound),
               "v(b_" + std::to_string(row.k) + ") below bound in " + f.render());
    }
    if (sharp_at_k_prime(f, prof, gauge)) {
      ++sharp;
      bool seen = false;
      for (const auto& row : rep.rows) {
        if (row.k != prof.k_prime) continue;
        seen = true;
        t.expect(row.margin == Valuation(0), "margin " + str(row.margin) + " at k' in " + f.render());
      }
      t.expect(seen, "k' row missing in " + f.render());
    }
  };
  for (const auto& run : solved_corpus()) check(run.f, run.g);
  const auto extra = sharp_supplement();
  for (const auto& f : extra) check(f, solve_sfe(f, 400));
  return t.outcome("50 corpus + " + std::to_string(extra.size()) + " sharp maps, " + std::to_string(rows) +
                   " bound rows, margin 0 at k' in " + std::to_string(sharp) + " sharp instances");
}

bool same_coefficient(const LaurentSeries& x, const LaurentSeries& y) {
  return x.agrees_with(y) && x.valuation() == y.valuation();
}

Outcome criterion_6() {
  Tally t;
  oracle::Rng rng(606);
  const std::pair<int, int> fields[] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}};
  for (int trial = 0; trial < 20; ++trial) {
    const auto [p, r] = fields[trial % 5];
    const auto f = corpus::random_map(rng, FieldParams::make(p, r), 6);
    const int D = 25;
    const auto a = solve_sfe(f, D);
    const auto b = solve_sfe_multinomial(f, D);
    for (int k = 1; k <= D; ++k) {
      const auto i = static_cast<std::size_t>(k);
      t.expect(same_coefficient(a.coeffs[i], b.coeffs[i]), "multinomial b_" + std::to_string(k) + " in " + f.render());
    }
  }
  int shapes = 0;
  for (auto [p, r] : {std::pair{2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2}, {3, 2}}) {
    for (int trial = 0; trial < 2; ++trial) {
      ++shapes;
      const auto f = corpus::random_p_plus_1(rng, p, r, trial == 0);
      const int Jmax = (200 - 1) / p;
      const int D = Jmax * p + 1;
      const auto spec = solve_specialized_p_plus_1(f, Jmax);
      const auto gen = solve_sfe(f, D);
      for (int k = 1; k <= D; ++k) {
        const auto i = static_cast<std::size_t>(k);
        t.expect(same_coefficient(spec.coeffs[i], gen.coeffs[i]),
                 "specialized b_" + std::to_string(k) + " in " + f.render());
      }
    }
  }
  return t.outcome("20 maps to D=25 vs multinomial, " + std::to_string(shapes) + " p+1 shapes to degree 200");
}

Outcome criterion_7() {
  Tally t;
  struct Case {
    int p;
    int r;
    const char* lambda;
  };
  const Case grid[] = {{2, 1, "1+T"}, {2, 1, "1+T^2+T^3"}, {3, 1, "1+T"}, {3, 1, "1+2*T^3"}, {5, 1, "1+T^2"},
                       {2, 2, "b+T"}, {3, 1, "2+T"},       {5, 1, "2+T"}, {7, 1, "3+T+T^2"}, {3, 2, "b+T"}};
  PrecisionPolicy pol;
  pol.max = 1 << 16;
  bool has_f4_m3 = false;
  for (const auto& c : grid) {
    const auto prof = mult_profile(LaurentSeries::parse(c.lambda, FieldParams::make(c.p, c.r)));
    has_f4_m3 = has_f4_m3 || (c.p == 2 && c.r == 2 && prof.m == 3);
    for (std::int64_t n = 1; n <= 1000; ++n) {
      const auto direct = small_divisor_direct(prof.lambda, n, pol);
      t.expect(!direct.zero_to_precision && direct.value == Valuation(small_divisor_valuation(prof, n)),
               std::string(c.lambda) + " n=" + std::to_string(n));
    }
  }
  t.expect(has_f4_m3, "grid lacks F_4 with m = 3");
  return t.outcome("10 profiles, n <= 1000");
}

struct QuadraticRun {
  std::string level;
  Rational v_sigma{0};
  int closed = 0;
  int open = 0;
  std::string point;
  int kappa = 0;
  bool multiplier_is_lambda = false;
  bool periodic = false;
  std::int64_t horizon = 0;
  std::vector<Valuation> coefficients;
};

QuadraticRun run_quadratic(int scale) {
  const auto F = FieldParams::make(2, 1);
  const PowerSeriesMap f(lit(F, "1+T"), {{2, lit(F, "1")}});
  ClassifyOptions opts;
  opts.solve.policy = scaled_policy(scale);
  const auto rep = classify_linearization_disc(f, opts);
  QuadraticRun run;
  run.level = certificate_level_name(rep.level);
  run.v_sigma = rep.discs.v_sigma;
  run.closed = rep.degrees.closed;
  run.open = rep.degrees.open;
  if (rep.periodic_point) {
    run.point = rep.periodic_point->point.render();
    run.kappa = rep.periodic_point->kappa;
    const auto check = verify_indifferent(f, rep.periodic_point->point, run.kappa, 128 * scale);
    run.periodic = check.periodic;
    run.horizon = check.residual.precision();
    run.multiplier_is_lambda = check.multiplier.agrees_with(f.lambda()) && check.multiplier_valuation == Valuation(0);
  }
  for (int k = 1; k <= rep.conjugacy.degree(); ++k) run.coefficients.push_back(rep.conjugacy.valuation(k));
  return run;
}

Outcome criterion_8() {
  Tally t;
  const auto run = run_quadratic(1);
  t.expect(run.level == "EXACT-sigma", "level " + run.level);
  t.expect(run.v_sigma == Rational(1), "v_sigma " + str(run.v_sigma));
  t.expect(run.closed == 2, "closed degree " + std::to_string(run.closed));
  t.expect(run.open == 1, "open degree " + std::to_string(run.open));
  t.expect(run.point == "T", "point " + run.point);
  t.expect(run.kappa == 1, "kappa " + std::to_string(run.kappa));
  t.expect(run.multiplier_is_lambda, "multiplier is not 1+T");
  t.expect(run.periodic && run.horizon >= 128, "f(T) = T only to horizon " + std::to_string(run.horizon));
  // f(T) = (1+T)T + T^2 = T exactly.
  const auto F = FieldParams::make(2, 1);
  const PowerSeriesMap f(lit(F, "1+T"), {{2, lit(F, "1")}});
  t.expect(ps_eval(f, lit(F, "T")) == lit(F, "T"), "exact evaluation");
  return t.outcome(run.level + ", v_sigma=" + str(run.v_sigma) + ", closed degree " + std::to_string(run.closed) +
                   ", point " + run.point + " kappa=" + std::to_string(run.kappa) + ", f(T)=T to O(T^" +
                   std::to_string(run.horizon) + ")");
}

struct DichotomyCase {
  int p;
  int r;
  const char* lambda;
};
const DichotomyCase kDichotomy[] = {{2, 1, "1+T"}, {2, 2, "b+T"}, {3, 1, "2+T"}};

Outcome criterion_9() {
  Tally t;
  std::int64_t strict = 0;
  for (const auto& c : kDichotomy) {
    const auto F = FieldParams::make(c.p, c.r);
    const auto prof = mult_profile(lit(F, c.lambda));
    const int kp = static_cast<int>(prof.k_prime);
    const int mp = static_cast<int>(prof.m * prof.p);
    const std::string tag = "(p,m)=(" + std::to_string(c.p) + "," + std::to_string(prof.m) + ")";
    for (const char* a : {"1", "T", "T^-1", "1+T^-2"}) {
      const auto rep = classify_linearization_disc(PowerSeriesMap(lit(F, c.lambda), {{kp, lit(F, a)}}));
      t.expect(rep.degrees.open == 1, tag + " open degree");
      t.expect(rep.degrees.closed == kp, tag + " closed degree " + std::to_string(rep.degrees.closed));
      t.expect(rep.degrees.closed_form_agrees, tag + " closed form");
    }
    for (int i0 : {kp + c.p, kp + mp, kp + 2 * mp}) {
      if (i0 % c.p != 0) continue;
      const std::string itag = tag + " i0=" + std::to_string(i0);
      const auto f = PowerSeriesMap(lit(F, c.lambda), {{i0, lit(F, "1")}, {i0 + mp, lit(F, "T")}});
      const auto rep = classify_linearization_disc(f);
      t.expect(rep.level == CertificateLevel::kExtendedRho, itag + " level " + certificate_level_name(rep.level));
      t.expect(rep.extension.has_value() && rep.extension->holds, itag + " extension");
      const Rational vr = rep.discs.v_rho;
      for (int k = 2; k <= rep.conjugacy.degree(); ++k) {
        const auto& b = rep.conjugacy.coeffs[static_cast<std::size_t>(k)];
        if (b.is_exact_zero()) continue;
        ++strict;
        t.expect(b.valuation_lower_bound() + Valuation(vr * k) > Valuation(vr),
                 itag + " k=" + std::to_string(k));
      }
    }
  }
  return t.outcome("deg_open=1, deg_closed=k' for a_{k'} x^{k'}; EXTENDED-rho with " + std::to_string(strict) +
                   " strict inequalities");
}

// Random point with v(x) > v, in the base field.
LaurentSeries sample_inside(oracle::Rng& rng, const FieldPtr& F, const Rational& v) {
  const std::int64_t lead = floor_of(v) + rng.uniform(1, 3);
  std::vector<Code> c(static_cast<std::size_t>(rng.uniform(1, 4)));
  for (auto& x : c) x = rng.element(F->q());
  c[0] = rng.element(F->q(), true);
  return LaurentSeries::from_coeffs(F, 1, lead, c);
}

Outcome criterion_10() {
  Tally t;
  oracle::Rng rng(1010);
  std::vector<PowerSeriesMap> instances;
  {
    const auto F = FieldParams::make(2, 1);
    instances.emplace_back(lit(F, "1+T"), std::map<int, LaurentSeries>{{2, lit(F, "1")}});
  }
  for (const auto& c : kDichotomy) {
    const auto F = FieldParams::make(c.p, c.r);
    const auto prof = mult_profile(lit(F, c.lambda));
    const int kp = static_cast<int>(prof.k_prime);
    const int mp = static_cast<int>(prof.m * prof.p);
    instances.emplace_back(lit(F, c.lambda), std::map<int, LaurentSeries>{{kp, lit(F, "1")}});
    instances.emplace_back(lit(F, c.lambda), std::map<int, LaurentSeries>{{kp + mp, lit(F, "1")}});
  }
  const int D = 200;
  std::int64_t points = 0;
  Valuation worst = Valuation::infinity();
  for (const auto& f : instances) {
    const auto rep = classify_linearization_disc(f);
    const auto g = solve_sfe(f, D);
    // The full-conjugacy residual is defined on D_sigma, which the certified
    // disc contains.
    const Rational full_radius = std::max(rep.disc.v_radius, rep.discs.v_sigma);
    for (int i = 0; i < 20; ++i) {
      const auto x = sample_inside(rng, f.field(), rep.disc.v_radius);
      const auto y = sample_inside(rng, f.field(), full_radius);
      ++points;
      const auto semi = semiconjugacy_residual(f, g, x);
      const auto full = full_conjugacy_residual(f, g, y);
      t.expect(semi.zero_to_precision && semi.horizon >= Valuation(64),
               "semi " + f.render() + " at " + x.render() + " horizon " + str(semi.horizon));
      t.expect(full.zero_to_precision && full.horizon >= Valuation(64),
               "full " + f.render() + " at " + y.render() + " horizon " + str(full.horizon));
      worst = std::min({worst, semi.horizon, full.horizon});
    }
  }
  return t.outcome(std::to_string(instances.size()) + " instances, " + std::to_string(points) +
                   " points, smallest horizon " + str(worst));
}

Outcome criterion_11() {
  Tally t;
  const auto a = run_divergence(2, 8, 1);
  const auto b = run_divergence(2, 8, 2);
  t.expect(a.specialized == b.specialized, "specialized valuations changed");
  t.expect(a.generic == b.generic, "generic valuations changed");
  t.expect(a.certified == b.certified, "certificate valuations changed");
  t.expect(a.verdict == b.verdict, "divergence verdict changed");
  const auto q1 = run_quadratic(1);
  const auto q2 = run_quadratic(2);
  t.expect(q1.level == q2.level, "certificate level changed");
  t.expect(q1.v_sigma == q2.v_sigma, "v_sigma changed");
  t.expect(q1.closed == q2.closed && q1.open == q2.open, "degrees changed");
  t.expect(q1.point == q2.point && q1.kappa == q2.kappa, "periodic point changed");
  t.expect(q1.multiplier_is_lambda == q2.multiplier_is_lambda && q1.periodic == q2.periodic, "indifference changed");
  t.expect(q2.horizon >= 2 * q1.horizon, "doubled horizon not reached");
  t.expect(q1.coefficients == q2.coefficients, "conjugacy valuations changed");
  return t.outcome("criteria 1 and 8 at doubled horizon: unchanged");
}

}  // namespace

int main() {
  const std::pair<int, std::function<Outcome()>> criteria[] = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},   {5, criterion_5},  {6, criterion_6},
      {7, criterion_7}, {8, criterion_8}, {9, criterion_9}, {10, criterion_10}, {11, criterion_11}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& err) {
      out = {false, std::string("exception: ") + err.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s [%.2fs]\n", id, out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
