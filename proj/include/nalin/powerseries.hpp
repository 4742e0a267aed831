#pragma once

#include <map>
#include <string>
#include <vector>

#include "nalin/laurent.hpp"

namespace nalin {

// Truncated power series sum_k c_k x^k, indexed by degree (index 0 is the
// constant term). Entries share one field and ramification index.
using CoefficientTable = std::vector<LaurentSeries>;

// f(x) = lambda x + sum_{i>=2} a_i x^i with finitely many nonzero a_i and a
// unit multiplier lambda.
class PowerSeriesMap {
 public:
  PowerSeriesMap(LaurentSeries lambda, std::map<int, LaurentSeries> higher = {});

  // Table of "degree" -> Laurent literal; degree 1 is mandatory.
  static PowerSeriesMap parse(const std::map<int, std::string>& table, FieldPtr field, int ram = 1);

  const FieldPtr& field() const { return lambda_.field(); }
  int ram() const { return lambda_.ram(); }
  const LaurentSeries& lambda() const { return lambda_; }
  // Nonlinear terms only (degree >= 2), each nonzero.
  const std::map<int, LaurentSeries>& terms() const { return terms_; }
  LaurentSeries coefficient(int degree) const;

  int degree() const { return terms_.empty() ? 1 : terms_.rbegin()->first; }
  bool is_linear() const { return terms_.empty(); }
  int lowest_nonlinear_degree() const;
  // Every nonlinear degree divisible by the characteristic.
  bool in_p_divisible_family() const;
  // f = lambda x + a x^degree exactly.
  bool is_binomial(int degree) const;

  CoefficientTable table(int max_degree) const;
  PowerSeriesMap ramify(int e) const;
  PowerSeriesMap embed(const FieldEmbedding& emb) const;
  std::string render() const;

 private:
  LaurentSeries lambda_;
  std::map<int, LaurentSeries> terms_;
};

// A = min_{i>=2} v(a_i)/(i-1), so that a = eps^A = sup |a_i|^{1/(i-1)}.
struct Gauge {
  bool linear = false;
  Rational A{0};
  int witness = 0;
};

Gauge ps_gauge(const PowerSeriesMap& f);

// Sum a_i x^i; results are truncated at the absolute horizon `cap`.
LaurentSeries ps_eval(const PowerSeriesMap& f, const LaurentSeries& x,
                      std::int64_t cap = LaurentSeries::kExact);
LaurentSeries ps_iterate(const PowerSeriesMap& f, std::int64_t n, const LaurentSeries& x,
                         std::int64_t cap = LaurentSeries::kExact);
LaurentSeries ps_derivative_at(const PowerSeriesMap& f, const LaurentSeries& x,
                               std::int64_t cap = LaurentSeries::kExact);

// Product of truncated series, degrees <= max_degree; every product is kept to
// at most rel_cap digits of relative precision.
CoefficientTable table_mul(const CoefficientTable& a, const CoefficientTable& b, int max_degree,
                           std::int64_t rel_cap);
// outer(inner(x)) mod x^{max_degree+1}; inner must have no constant term.
CoefficientTable compose_tables(const CoefficientTable& outer, const CoefficientTable& inner,
                                int max_degree, std::int64_t rel_cap);
CoefficientTable ps_compose(const CoefficientTable& outer, const PowerSeriesMap& inner, int max_degree,
                            std::int64_t rel_cap);
// Compositional inverse of g (g(0) = 0, v(g'(0)) = 0) to degree max_degree.
CoefficientTable ps_invert(const CoefficientTable& g, int max_degree, std::int64_t rel_cap);

// Lucas' theorem: C(n, k) mod p.
int binomial_mod_p(std::int64_t n, std::int64_t k, int p);

}  // namespace nalin
