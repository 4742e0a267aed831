#pragma once

// Formal solutions g(x) = x + sum_{k>=2} b_k x^k of g(f(x)) = lambda g(x),
// the checks run on their coefficients, and divergence certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nalin/multiplier.hpp"
#include "nalin/powerseries.hpp"

namespace nalin {

enum class ZeroKind { kNonzero, kStructural, kComputed };
enum class SolverSource { kTermMatching, kMultinomial, kSpecialized };

const char* zero_kind_name(ZeroKind kind);
const char* solver_source_name(SolverSource source);

struct ResonantDegree {
  std::int64_t k = 0;
  std::int64_t count = 0;  // count_resonant(k)
};

struct Conjugacy {
  CoefficientTable coeffs;  // index k holds b_k; b_0 = 0, b_1 = 1
  std::vector<ZeroKind> zero_kind;
  MultiplierProfile profile;
  SolverSource source = SolverSource::kTermMatching;
  std::vector<ResonantDegree> resonant;
  // Relative precision the coefficients were computed with.
  std::int64_t working_precision = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero(int k) const { return zero_kind[static_cast<std::size_t>(k)] != ZeroKind::kNonzero; }
  Valuation valuation(int k) const { return coeffs[static_cast<std::size_t>(k)].valuation(); }
};

struct SolveOptions {
  PrecisionPolicy policy;
  // Mark proven zeros without dividing and build p-th powers of f by Frobenius.
  bool structural_shortcuts = true;
};

Conjugacy solve_sfe(const PowerSeriesMap& f, int D, const SolveOptions& opts = {});
Conjugacy solve_sfe_multinomial(const PowerSeriesMap& f, int D, const SolveOptions& opts = {});
// Populates degrees jp+1 for j <= Jmax; requires f = lambda x + a x^{p+1}.
Conjugacy solve_specialized_p_plus_1(const PowerSeriesMap& f, int Jmax, const SolveOptions& opts = {});

// Coefficient of x^k in g(f(x)) - lambda g(x) for k <= D.
CoefficientTable sfe_defect(const PowerSeriesMap& f, const Conjugacy& g);

struct StructuralZeroReport {
  bool applicable = false;
  std::vector<std::int64_t> violations;
};
StructuralZeroReport check_structural_zeros(const Conjugacy& g, const PowerSeriesMap& f);

struct BoundRow {
  std::int64_t k = 0;
  Rational bound{0};  // (k-1)A - v_m count_resonant(k)
  Valuation value;
  Valuation margin;  // value - bound
};
struct BoundReport {
  bool applicable = false;
  std::vector<BoundRow> rows;
  std::vector<std::int64_t> violations;
  // Zero to a precision below the bound: neither confirmed nor refuted.
  std::vector<std::int64_t> unresolved;
};
// Lower bound (k-1)A - v_m count_resonant(k) on v(b_k) for family-F maps.
Rational coefficient_lower_bound(const MultiplierProfile& profile, const Gauge& gauge, std::int64_t k);
BoundReport check_coefficient_bound(const Conjugacy& g, const PowerSeriesMap& f, const Gauge& gauge);

struct DivergenceRow {
  int N = 0;
  std::int64_t degree = 0;  // p^N + 1
  Valuation computed;
  std::optional<Rational> predicted;
  std::optional<Rational> term_sum;  // j v(a) - sum_{i<=j} v(1 - lambda^{ip})
  Rational slope{0};                 // computed / degree
};
struct DivergenceCertificate {
  std::vector<DivergenceRow> rows;
  bool conjectural = false;
  bool slopes_decreasing = false;
  bool all_match = false;
  std::string verdict;  // "diverges", "conjectural" or "failed"
};
struct DivergenceOptions {
  SolveOptions solve;
  // Also solve by term matching to degree p^Nmax + 1 and compare.
  bool cross_check = false;
};
DivergenceCertificate certify_divergence(const PowerSeriesMap& f, int Nmax, const DivergenceOptions& opts = {});

struct Residual {
  LaurentSeries value;  // truncated at the justified horizon
  Valuation horizon;  // every omitted term has valuation >= horizon
  bool zero_to_precision = false;
  Valuation valuation() const { return value.valuation(); }
};
Residual semiconjugacy_residual(const PowerSeriesMap& f, const Conjugacy& g, const LaurentSeries& x);
Residual full_conjugacy_residual(const PowerSeriesMap& f, const Conjugacy& g, const LaurentSeries& x);

struct ExtensionReport {
  bool applicable = false;
  bool holds = false;
  std::int64_t next_resonant = 0;  // k' + mp
  std::vector<std::int64_t> violations;
  std::string verdict;
};
// When b_{k'} = 0: checks v(b_k) + k v_rho > v_rho for computed k >= 2.
ExtensionReport check_bkprime_zero_extension(const Conjugacy& g, const PowerSeriesMap& f);

}  // namespace nalin
