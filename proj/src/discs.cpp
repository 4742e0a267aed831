#include "nalin/discs.hpp"

#include <algorithm>
#include <numeric>

#include "nalin/error.hpp"

namespace nalin {

std::string Disc::rationality() const {
  if (rational_in_base()) return "rational";
  return "rational-in-extension(e=" + std::to_string(rational_in_extension()) + ")";
}

std::string Disc::str() const {
  return std::string("{v(x) ") + (boundary == Boundary::kOpen ? "> " : ">= ") + to_string(v_radius) + "}";
}

const char* certificate_level_name(CertificateLevel level) {
  switch (level) {
    case CertificateLevel::kGenericSigma: return "GENERIC-sigma";
    case CertificateLevel::kExtendedRho: return "EXTENDED-rho";
    case CertificateLevel::kExactSigma: return "EXACT-sigma";
  }
  return "?";
}

WeierstrassData weierstrass_data(const CoefficientTable& coeffs, const Rational& v_r,
                                 const std::optional<TailBound>& tail) {
  WeierstrassData w;
  bool found = false;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const LaurentSeries& c = coeffs[k];
    if (c.is_zero()) continue;
    const Rational val = c.valuation().value() + v_r * static_cast<std::int64_t>(k);
    if (!found || val < w.v_s) {
      w.v_s = val;
      w.d = w.d_prime = static_cast<int>(k);
      found = true;
    } else if (val == w.v_s) {
      w.d = static_cast<int>(k);
    }
  }
  if (!found) fail(ErrorCode::kInvalidArgument, "Weierstrass data of a series with no known nonzero term");

  bool resolved = true;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const LaurentSeries& c = coeffs[k];
    if (!c.zero_to_precision()) continue;
    const Rational lb = Rational(c.precision(), c.ram()) + v_r * static_cast<std::int64_t>(k);
    if (lb <= w.v_s) resolved = false;
  }
  if (!tail || !resolved) return w;

  const auto D = static_cast<std::int64_t>(coeffs.size()) - 1;
  bool ok = tail->period >= 1;
  for (std::int64_t k = D + 1; ok && k <= D + tail->period; ++k) {
    const Rational here = tail->lower(k) + v_r * k;
    const Rational next = tail->lower(k + tail->period) + v_r * (k + tail->period);
    if (!(here > w.v_s) || next < here) ok = false;
  }
  w.certified_tail = ok;
  return w;
}

namespace {

void require_family(const PowerSeriesMap& f) {
  if (!f.in_p_divisible_family()) {
    fail(ErrorCode::kHypothesisViolated, "every nonlinear degree must be divisible by p");
  }
}

}  // namespace

DiscDegrees degree_on_sigma(const Conjugacy& g, const DiscProfile& dp, const Gauge& gauge) {
  const MultiplierProfile& prof = g.profile;
  if (g.degree() < prof.k_prime) {
    fail(ErrorCode::kInvalidArgument, "conjugacy must be solved to degree >= k' = " + std::to_string(prof.k_prime));
  }
  TailBound tail;
  tail.lower = [&](std::int64_t k) { return coefficient_lower_bound(prof, gauge, k); };
  tail.period = prof.m * prof.p;
  const WeierstrassData w = weierstrass_data(g.coeffs, dp.v_sigma, tail);
  DiscDegrees out;
  out.open = w.d_prime;
  out.closed = w.d;
  out.certified = w.certified_tail;
  const LaurentSeries& bk = g.coeffs[static_cast<std::size_t>(prof.k_prime)];
  const bool extremal = !bk.is_zero() && bk.valuation() == Valuation(Rational(prof.k_prime - 1) * gauge.A - prof.v_m);
  out.closed_form_agrees = (out.closed == prof.k_prime) == extremal;
  return out;
}

namespace {

PowerSeriesMap in_tower(const PowerSeriesMap& f, int r, int e) {
  PowerSeriesMap out = f;
  if (e != f.ram()) out = out.ramify(e / f.ram());
  if (r != f.field()->r()) out = out.embed(FieldEmbedding(f.field(), FieldParams::make(f.field()->p(), r)));
  return out;
}

using Poly = CoefficientTable;  // polynomial in u with series coefficients

std::size_t nonzero_terms(const Poly& a) {
  std::size_t n = 0;
  for (const auto& c : a) n += c.is_exact_zero() ? 0 : 1;
  return n;
}

Poly poly_mul(const Poly& a, const Poly& b, std::int64_t cap) {
  const LaurentSeries zero(a[0].field(), a[0].ram());
  Poly out(a.size() + b.size() - 1, zero);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_exact_zero()) continue;
      out[i + j] = (out[i + j] + a[i] * b[j]).truncated(cap);
    }
  }
  return out;
}

constexpr std::size_t kMaxSearchDegree = 4096;
// Series products allowed while composing one iterate.
constexpr std::size_t kMaxSearchWork = 4'000'000;

// f(y(u)) with every coefficient known modulo U^cap; empty when the degree
// or work limit is exceeded.
Poly compose_poly(const PowerSeriesMap& f, const Poly& y, std::int64_t cap) {
  const LaurentSeries zero(y[0].field(), y[0].ram());
  if (static_cast<std::size_t>(f.degree()) * (y.size() - 1) > kMaxSearchDegree) return {};
  Poly acc(y.size(), zero);
  for (std::size_t j = 0; j < y.size(); ++j) acc[j] = (f.lambda() * y[j]).truncated(cap);
  Poly power = y;
  int current = 1;
  std::size_t work = 0;
  const std::size_t ny = nonzero_terms(y);
  for (const auto& [deg, a] : f.terms()) {
    while (current < deg) {
      work += nonzero_terms(power) * ny;
      if (work > kMaxSearchWork) return {};
      power = poly_mul(power, y, cap);
      ++current;
    }
    if (acc.size() < power.size()) acc.resize(power.size(), zero);
    for (std::size_t j = 0; j < power.size(); ++j) {
      if (power[j].is_exact_zero()) continue;
      acc[j] = (acc[j] + a * power[j]).truncated(cap);
    }
  }
  return acc;
}

LaurentSeries poly_eval(const Poly& h, const LaurentSeries& u, std::int64_t cap, std::int64_t power_cap) {
  LaurentSeries acc(u.field(), u.ram());
  LaurentSeries power = LaurentSeries::constant(u.field(), 1, u.ram());
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (j > 0) power = (power * u).truncated(power_cap);
    if (h[j].is_exact_zero()) continue;
    acc = (acc + h[j] * power).truncated(cap);
  }
  return acc;
}

Poly derivative(const Poly& h) {
  const LaurentSeries zero(h[0].field(), h[0].ram());
  Poly d(std::max<std::size_t>(h.size(), 2) - 1, zero);
  for (std::size_t j = 1; j < h.size(); ++j) d[j - 1] = h[j].scaled_int(static_cast<std::int64_t>(j));
  return d;
}

struct Attempt {
  std::optional<LaurentSeries> point;
  bool retry = false;  // horizon too short to read the residue polynomial
};

Attempt search_in(const PowerSeriesMap& f, int kappa, std::int64_t n_pi, std::int64_t W, std::int64_t G,
                  std::vector<std::string>& notes) {
  const FieldPtr& field = f.field();
  const LaurentSeries zero(field, f.ram());
  const LaurentSeries pi = LaurentSeries::monomial(field, 1, n_pi, f.ram());
  Poly y{zero, pi};
  for (int i = 0; i < kappa; ++i) {
    y = compose_poly(f, y, G);
    if (y.empty()) {
      notes.push_back("kappa=" + std::to_string(kappa) + ": iterate exceeds the search degree or work limit");
      return {};
    }
  }
  Poly h = y;
  h[1] = (h[1] - pi).truncated(G);

  std::int64_t mu = LaurentSeries::kExact;
  for (const auto& c : h) {
    if (!c.is_zero()) mu = std::min(mu, c.lead());
  }
  if (mu == LaurentSeries::kExact) return {std::nullopt, true};
  for (const auto& c : h) {
    if (!c.is_exact() && c.precision() < mu + W) return {std::nullopt, true};
  }

  const Code q = field->q();
  std::vector<Code> residue(h.size(), 0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!h[j].is_zero() && h[j].lead() == mu) residue[j] = h[j].coeff(mu);
  }
  auto eval_residue = [&](const std::vector<Code>& poly, Code u) {
    Code acc = 0;
    for (std::size_t j = poly.size(); j-- > 0;) acc = field->add(field->mul(acc, u), poly[j]);
    return acc;
  };
  std::vector<Code> residue_d(residue.size() > 1 ? residue.size() - 1 : 1, 0);
  for (std::size_t j = 1; j < residue.size(); ++j) {
    residue_d[j - 1] = field->mul(residue[j], field->from_int(static_cast<std::int64_t>(j)));
  }

  const Poly hd = derivative(h);
  for (Code c = 1; c < q; ++c) {
    if (eval_residue(residue, c) != 0) continue;
    if (eval_residue(residue_d, c) == 0) {
      notes.push_back("kappa=" + std::to_string(kappa) + ": multiple residue root " + field->render(c) +
                      " left unresolved");
      continue;
    }
    LaurentSeries u = LaurentSeries::constant(field, c, f.ram());
    bool converged = false;
    for (std::int64_t step = 0, prec = 2; step < 64; ++step, prec = std::min(W, prec * 2)) {
      const LaurentSeries hu = poly_eval(h, u, mu + prec, prec);
      if (hu.is_zero()) {
        if (prec == W) {
          converged = true;
          break;
        }
        continue;
      }
      const LaurentSeries hdu = poly_eval(hd, u, mu + prec, prec);
      if (hdu.is_zero() || hdu.lead() != mu) {
        fail(ErrorCode::kInternal, "Newton derivative lost its leading term");
      }
      const LaurentSeries delta = divide(hu, hdu, prec);
      u = (u - delta).truncated(W);
      if (prec == W && (delta.is_zero() || delta.lead() >= W)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      notes.push_back("kappa=" + std::to_string(kappa) + ": Newton iteration did not converge");
      continue;
    }
    return {u.shifted(n_pi), false};
  }
  return {};
}

}  // namespace

PeriodicSearch find_periodic_point(const PowerSeriesMap& f, int kappa_max, const Disc& sphere,
                                   const TowerLimits& tower, const PrecisionPolicy& policy) {
  policy.validate();
  PeriodicSearch out;
  const int r = f.field()->r();
  const auto den = static_cast<int>(sphere.v_radius.denominator());
  const int e = std::lcm(f.ram(), den);
  if (e > tower.e_max) {
    out.notes.push_back("sphere needs ramification " + std::to_string(e) + " > e_max");
    return out;
  }
  const std::int64_t n_pi = sphere.v_radius.numerator() * (e / den);
  const std::int64_t W = 2 * policy.initial;
  for (int kappa = 1; kappa <= kappa_max; ++kappa) {
    for (int rr = r; rr <= tower.r_max; rr += r) {
      std::uint64_t q = 1;
      for (int i = 0; i < rr; ++i) q *= static_cast<std::uint64_t>(f.field()->p());
      if (q > (1u << 20)) break;
      const PowerSeriesMap ft = in_tower(f, rr, e);
      for (std::int64_t G = 2 * W + 2 * std::abs(n_pi);; G *= 2) {
        const Attempt a = search_in(ft, kappa, n_pi, W, G, out.notes);
        if (a.point) {
          out.found = PeriodicPoint{*a.point, kappa, rr, e};
          return out;
        }
        if (!a.retry) break;
        if (G > 64 * W + 4 * std::abs(n_pi)) {
          out.notes.push_back("kappa=" + std::to_string(kappa) + ", r=" + std::to_string(rr) +
                              ": residue polynomial unresolved at horizon " + std::to_string(G));
          break;
        }
      }
    }
  }
  return out;
}

IndifferenceCheck verify_indifferent(const PowerSeriesMap& f, const LaurentSeries& point, int kappa,
                                     std::int64_t horizon) {
  require_compatible(f.lambda(), point);
  if (kappa < 1) fail(ErrorCode::kInvalidArgument, "period must be >= 1");
  IndifferenceCheck c;
  LaurentSeries y = point.truncated(horizon);
  c.multiplier = LaurentSeries::constant(f.field(), 1, f.ram());
  for (int i = 0; i < kappa; ++i) {
    c.multiplier = (c.multiplier * ps_derivative_at(f, y, horizon)).truncated(horizon);
    y = ps_eval(f, y, horizon);
  }
  c.residual = (y - point).truncated(horizon);
  c.periodic = c.residual.is_zero();
  c.multiplier_valuation = c.multiplier.valuation();
  const LaurentSeries lk = f.lambda().pow(static_cast<std::uint64_t>(kappa)).truncated(horizon);
  c.multiplier_is_lambda_power = c.multiplier.agrees_with(lk) && c.multiplier.valuation() == lk.valuation();
  return c;
}

LinearizationReport classify_linearization_disc(const PowerSeriesMap& f, const ClassifyOptions& opts) {
  if (f.is_linear()) fail(ErrorCode::kInvalidArgument, "a linear map is its own linearization");
  require_family(f);
  LinearizationReport rep;
  rep.profile = mult_profile(f.lambda());
  rep.gauge = ps_gauge(f);
  rep.discs = disc_profile(rep.profile, rep.gauge);
  const MultiplierProfile& prof = rep.profile;
  const std::int64_t mp = prof.m * prof.p;
  const int D = opts.D > 0 ? opts.D : static_cast<int>(prof.k_prime + 4 * mp);
  if (D < prof.k_prime) fail(ErrorCode::kInvalidArgument, "degree must be >= k' = " + std::to_string(prof.k_prime));
  rep.degree_computed = D;

  rep.conjugacy = solve_sfe(f, D, opts.solve);
  const Conjugacy& g = rep.conjugacy;
  rep.structural = check_structural_zeros(g, f);
  rep.bound = check_coefficient_bound(g, f, rep.gauge);
  if (!rep.structural.violations.empty()) rep.notes.push_back("structural zero violations present");
  if (!rep.bound.violations.empty()) rep.notes.push_back("coefficient bound violations present");
  if (!rep.bound.unresolved.empty()) rep.notes.push_back("some coefficients unresolved at working precision");
  rep.degrees = degree_on_sigma(g, rep.discs, rep.gauge);
  if (!rep.degrees.certified) rep.notes.push_back("Weierstrass tail not certified; degree is best-effort");
  if (!rep.degrees.closed_form_agrees) rep.notes.push_back("closed-sigma degree disagrees with the b_k' criterion");

  if (rep.degrees.closed == prof.k_prime) {
    rep.level = CertificateLevel::kExactSigma;
    rep.disc = Disc{rep.discs.v_sigma, Boundary::kOpen};
    const int kappa_max = opts.kappa_max > 0 ? opts.kappa_max : static_cast<int>(prof.k_prime);
    PeriodicSearch search =
        find_periodic_point(f, kappa_max, Disc{rep.discs.v_sigma, Boundary::kClosed}, opts.tower, opts.solve.policy);
    for (auto& n : search.notes) rep.notes.push_back(std::move(n));
    if (search.found) {
      const PeriodicPoint& pt = *search.found;
      const PowerSeriesMap ft = in_tower(f, pt.r, pt.e);
      const std::int64_t horizon = pt.point.is_exact() ? pt.point.lead() + 2 * opts.solve.policy.initial
                                                       : pt.point.precision();
      rep.indifference = verify_indifferent(ft, pt.point, pt.kappa, horizon);
      rep.periodic_point = pt;
      if (!rep.indifference->periodic) rep.notes.push_back("periodic point failed verification");
    } else {
      rep.periodic_point_not_in_tower = true;
      rep.notes.push_back("periodic point exists in the completed algebraic closure; not constructed in the tower");
    }
  } else if (g.is_zero(static_cast<int>(prof.k_prime))) {
    rep.level = CertificateLevel::kExtendedRho;
    rep.disc = Disc{rep.discs.v_rho, Boundary::kOpen};
    rep.extension = check_bkprime_zero_extension(g, f);
    if (!rep.extension->holds) rep.notes.push_back("one-to-one extension to rho failed");
  } else {
    rep.level = CertificateLevel::kGenericSigma;
    rep.disc = Disc{rep.discs.v_sigma, Boundary::kOpen};
  }
  return rep;
}

}  // namespace nalin
