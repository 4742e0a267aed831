#pragma once

// Weierstrass data, linearization-disc classification and boundary periodic
// points.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nalin/schroder.hpp"

namespace nalin {

enum class Boundary { kOpen, kClosed };

// Disc around 0 of radius eps^v_radius. It is rational over the tower
// F_q((T^{1/e})) exactly when den(v_radius) divides e.
struct Disc {
  Rational v_radius{0};
  Boundary boundary = Boundary::kOpen;

  bool rational_in_base() const { return v_radius.denominator() == 1; }
  // Smallest ramification making the radius a value of the tower.
  std::int64_t rational_in_extension() const { return v_radius.denominator(); }
  std::string rationality() const;
  std::string str() const;
};

// Lower bound on v(c_k) valid for every k beyond the computed degree. The
// bound plus k v_r must be nondecreasing from one period to the next.
struct TailBound {
  std::function<Rational(std::int64_t)> lower;
  std::int64_t period = 1;
};

struct WeierstrassData {
  Rational v_s{0};  // min_k v(c_k) + k v_r
  int d = 0;        // largest minimizer
  int d_prime = 0;  // smallest minimizer
  bool certified_tail = false;
};

WeierstrassData weierstrass_data(const CoefficientTable& coeffs, const Rational& v_r,
                                 const std::optional<TailBound>& tail = std::nullopt);

struct DiscDegrees {
  int open = 0;
  int closed = 0;
  bool certified = false;
  // deg_closed = k' iff v(b_{k'}) = (k'-1)A - v_m.
  bool closed_form_agrees = false;
};
DiscDegrees degree_on_sigma(const Conjugacy& g, const DiscProfile& dp, const Gauge& gauge);

struct PeriodicPoint {
  LaurentSeries point;  // in F_{p^r}((U)), U^e = T
  int kappa = 0;
  int r = 0;
  int e = 1;
};

struct TowerLimits {
  int r_max = 1;
  int e_max = 64;
};

struct PeriodicSearch {
  std::optional<PeriodicPoint> found;
  std::vector<std::string> notes;
};

// Searches the sphere of radius eps^v for points of exact period kappa <=
// kappa_max, over residue degrees r, 2r, ... <= r_max.
PeriodicSearch find_periodic_point(const PowerSeriesMap& f, int kappa_max, const Disc& sphere,
                                   const TowerLimits& tower, const PrecisionPolicy& policy = {});

struct IndifferenceCheck {
  LaurentSeries residual;  // f^kappa(x) - x
  bool periodic = false;   // residual zero to its horizon
  LaurentSeries multiplier;
  Valuation multiplier_valuation;
  bool multiplier_is_lambda_power = false;
};
IndifferenceCheck verify_indifferent(const PowerSeriesMap& f, const LaurentSeries& point, int kappa,
                                     std::int64_t horizon);

enum class CertificateLevel { kGenericSigma, kExtendedRho, kExactSigma };
const char* certificate_level_name(CertificateLevel level);

struct ClassifyOptions {
  int D = 0;  // 0: choose from k' and mp
  SolveOptions solve;
  int kappa_max = 0;  // 0: k'
  TowerLimits tower;
};

struct LinearizationReport {
  MultiplierProfile profile;
  Gauge gauge;
  DiscProfile discs;
  CertificateLevel level = CertificateLevel::kGenericSigma;
  Disc disc;
  DiscDegrees degrees;
  int degree_computed = 0;
  Conjugacy conjugacy;
  StructuralZeroReport structural;
  BoundReport bound;
  std::optional<ExtensionReport> extension;
  std::optional<PeriodicPoint> periodic_point;
  std::optional<IndifferenceCheck> indifference;
  bool periodic_point_not_in_tower = false;
  std::vector<std::string> notes;
};

LinearizationReport classify_linearization_disc(const PowerSeriesMap& f, const ClassifyOptions& opts = {});

}  // namespace nalin
