#include <doctest.h>

#include <numeric>

#include "corpus.hpp"
#include "nalin/discs.hpp"
#include "nalin/error.hpp"
#include "oracle.hpp"

using namespace nalin;

namespace {

LaurentSeries lit(const FieldPtr& F, const char* text, int ram = 1) { return LaurentSeries::parse(text, F, ram); }

// f moved into the field and ramification of the point.
PowerSeriesMap lift(const PowerSeriesMap& f, const PeriodicPoint& pt) {
  const FieldEmbedding emb(f.field(), pt.point.field());
  return f.ramify(pt.e).embed(emb);
}

PowerSeriesMap monomial_map(const FieldPtr& F, const char* lambda, int degree, const char* a) {
  return PowerSeriesMap(lit(F, lambda), {{degree, lit(F, a)}});
}

}  // namespace

TEST_CASE("Weierstrass data examples") {
  const auto F = FieldParams::make(2, 1);
  const CoefficientTable h{LaurentSeries(F, 1), lit(F, "1"), lit(F, "T^-1")};
  auto w = weierstrass_data(h, Rational(1));
  CHECK(w.v_s == Rational(1));
  CHECK(w.d == 2);
  CHECK(w.d_prime == 1);
  const CoefficientTable id{LaurentSeries(F, 1), lit(F, "1")};
  for (int v = -3; v <= 3; ++v) {
    w = weierstrass_data(id, Rational(v));
    CHECK(w.d == 1);
    CHECK(w.d_prime == 1);
  }
}

TEST_CASE("Weierstrass minimizers of a conjugacy on the sigma sphere") {
  for (auto [p, r, lambda] : {std::tuple{2, 1, "1+T"}, {2, 2, "b+T"}, {3, 1, "2+T"}, {5, 1, "1+T^2"}}) {
    const auto F = FieldParams::make(p, r);
    const auto prof = mult_profile(lit(F, lambda));
    const int kp = static_cast<int>(prof.k_prime);
    const auto f = PowerSeriesMap(lit(F, lambda), {{kp, lit(F, "T^-1")}, {2 * kp, lit(F, "1")}});
    const auto gauge = ps_gauge(f);
    const auto dp = disc_profile(prof, gauge);
    const auto g = solve_sfe(f, kp + 6 * static_cast<int>(prof.m * prof.p));
    TailBound tail;
    tail.lower = [&](std::int64_t k) { return coefficient_lower_bound(prof, gauge, k); };
    tail.period = prof.m * prof.p;
    const auto w = weierstrass_data(g.coeffs, dp.v_sigma, tail);
    CHECK(w.certified_tail);
    CHECK(w.d_prime == 1);
    CHECK((w.d == 1 || w.d == kp));
    CHECK(w.v_s == dp.v_sigma);
  }
}

TEST_CASE("degree on the sigma disc examples") {
  const auto F2 = FieldParams::make(2, 1);
  auto f = monomial_map(F2, "1+T", 2, "1");
  auto g = solve_sfe(f, 20);
  auto gauge = ps_gauge(f);
  auto deg = degree_on_sigma(g, disc_profile(g.profile, gauge), gauge);
  CHECK(deg.open == 1);
  CHECK(deg.closed == 2);
  CHECK(deg.certified);
  CHECK(deg.closed_form_agrees);
  CHECK(g.valuation(2) == Valuation(-1));
  f = monomial_map(F2, "1+T", 4, "1");
  g = solve_sfe(f, 20);
  gauge = ps_gauge(f);
  deg = degree_on_sigma(g, disc_profile(g.profile, gauge), gauge);
  CHECK(deg.open == 1);
  CHECK(deg.closed == 1);
}

TEST_CASE("degree dichotomy") {
  // (p, m) in {(2,1), (2,3), (3,2)}.
  for (auto [p, r, lambda] : {std::tuple{2, 1, "1+T"}, {2, 2, "b+T"}, {3, 1, "2+T"}}) {
    const auto F = FieldParams::make(p, r);
    const auto prof = mult_profile(lit(F, lambda));
    const int kp = static_cast<int>(prof.k_prime);
    const int mp = static_cast<int>(prof.m * prof.p);
    CAPTURE(lambda);
    for (const char* a : {"1", "T", "T^-2+1"}) {
      const auto rep = classify_linearization_disc(monomial_map(F, lambda, kp, a));
      CHECK(rep.degrees.open == 1);
      CHECK(rep.degrees.closed == kp);
      CHECK(rep.level == CertificateLevel::kExactSigma);
    }
    for (int i0 : {kp + mp, kp + 2 * mp}) {
      const auto rep = classify_linearization_disc(monomial_map(F, lambda, i0, "1"));
      CHECK(rep.degrees.open == 1);
      CHECK(rep.degrees.closed == 1);
      CHECK(rep.level == CertificateLevel::kExtendedRho);
      REQUIRE(rep.extension.has_value());
      CHECK(rep.extension->holds);
      CHECK(rep.disc.v_radius == rep.discs.v_rho);
      // Strict inequality v(b_k) + k v_rho > v_rho at every computed k >= 2.
      for (int k = 2; k <= rep.conjugacy.degree(); ++k) {
        const auto& b = rep.conjugacy.coeffs[static_cast<std::size_t>(k)];
        if (b.is_exact_zero()) continue;
        CHECK(b.valuation_lower_bound() + Valuation(rep.discs.v_rho * k) > Valuation(rep.discs.v_rho));
      }
    }
  }
}

TEST_CASE("classification examples") {
  const auto F2 = FieldParams::make(2, 1);
  auto rep = classify_linearization_disc(monomial_map(F2, "1+T", 2, "1"));
  CHECK(rep.level == CertificateLevel::kExactSigma);
  CHECK(rep.disc.v_radius == Rational(1));
  CHECK(rep.disc.boundary == Boundary::kOpen);
  CHECK(rep.disc.str() == "{v(x) > 1/1}");
  CHECK(rep.degrees.closed == 2);
  REQUIRE(rep.periodic_point.has_value());
  CHECK(rep.periodic_point->point == lit(F2, "T"));
  CHECK(rep.periodic_point->kappa == 1);

  rep = classify_linearization_disc(monomial_map(F2, "1+T", 4, "1"));
  CHECK(rep.level == CertificateLevel::kExtendedRho);
  CHECK(std::string(certificate_level_name(rep.level)) == "EXTENDED-rho");

  const auto h = PowerSeriesMap(lit(F2, "1+T"), {{2, lit(F2, "T")}, {4, lit(F2, "1")}});
  rep = classify_linearization_disc(h);
  CHECK(rep.level == CertificateLevel::kGenericSigma);
  CHECK(rep.degrees.closed == 1);
  CHECK_FALSE(rep.periodic_point.has_value());

  CHECK_THROWS_AS(classify_linearization_disc(PowerSeriesMap::parse({{1, "1+T"}}, F2)), Error);
  CHECK_THROWS_AS(classify_linearization_disc(PowerSeriesMap::parse({{1, "1+T"}, {3, "1"}}, F2)), Error);
}

TEST_CASE("periodic point search examples") {
  const auto F2 = FieldParams::make(2, 1);
  auto search = find_periodic_point(monomial_map(F2, "1+T", 2, "1"), 1, Disc{Rational(1), Boundary::kClosed}, {1, 1});
  REQUIRE(search.found.has_value());
  CHECK(search.found->point == lit(F2, "T"));
  CHECK(search.found->kappa == 1);

  const auto lin = PowerSeriesMap::parse({{1, "1+T"}}, F2);
  for (int v : {-1, 1, 2}) {
    CHECK_FALSE(find_periodic_point(lin, 4, Disc{Rational(v), Boundary::kClosed}, {2, 4}).found.has_value());
  }
}

TEST_CASE("fixed points of lambda x + a x^k' exist exactly when a root exists in the tower") {
  // x^2 = (1 - lambda)/a over F_3 with lambda = 1 + T, sphere v = 1/2.
  const auto F3 = FieldParams::make(3, 1);
  const Disc sphere{Rational(1, 2), Boundary::kClosed};
  // a = 2: x^2 = T, so x = U is already in F_3((T^{1/2})).
  auto f = monomial_map(F3, "1+T", 3, "2");
  auto found = find_periodic_point(f, 1, sphere, {1, 2});
  REQUIRE(found.found.has_value());
  {
    const auto& pt = *found.found;
    const auto fl = lift(f, pt);
    const auto u = pt.point;
    CHECK((u * u).agrees_with(lit(pt.point.field(), "U^2", 2)));
    CHECK((ps_eval(fl, u) - u).is_zero());
  }
  // a = 1: x^2 = 2T needs sqrt(2), absent from F_3 but present in F_9.
  f = monomial_map(F3, "1+T", 3, "1");
  CHECK_FALSE(find_periodic_point(f, 1, sphere, {1, 2}).found.has_value());
  found = find_periodic_point(f, 1, sphere, {2, 2});
  REQUIRE(found.found.has_value());
  const auto& pt = *found.found;
  CHECK(pt.r == 2);
  CHECK(pt.e == 2);
  const auto fl = lift(f, pt);
  CHECK((ps_eval(fl, pt.point) - pt.point).is_zero());
  const auto sq = pt.point * pt.point;
  const auto& F9 = pt.point.field();
  CHECK(sq.agrees_with(LaurentSeries::monomial(F9, F9->from_int(2), 2, 2)));
}

TEST_CASE("indifference examples") {
  const auto F2 = FieldParams::make(2, 1);
  const auto f = monomial_map(F2, "1+T", 2, "1");
  auto c = verify_indifferent(f, lit(F2, "T"), 1, 128);
  CHECK(c.periodic);
  CHECK(c.residual.is_zero());
  CHECK(c.residual.precision() >= 128);
  CHECK(c.multiplier.agrees_with(f.lambda()));
  CHECK(c.multiplier_valuation == Valuation(0));
  CHECK(c.multiplier_is_lambda_power);

  c = verify_indifferent(f, lit(F2, "T+T^2"), 1, 64);
  CHECK_FALSE(c.periodic);
  CHECK(c.residual.valuation() > Valuation(0));
  CHECK_FALSE(c.residual.valuation().is_infinite());

  const auto F3 = FieldParams::make(3, 1);
  const auto fam = PowerSeriesMap(lit(F3, "1+T"), {{3, lit(F3, "T^-1")}, {9, lit(F3, "1")}});
  for (int kappa : {1, 2, 3}) {
    const auto ci = verify_indifferent(fam, lit(F3, "T^2+T^3"), kappa, 40);
    CHECK(ci.multiplier.agrees_with(fam.lambda().pow(static_cast<std::uint64_t>(kappa))));
    CHECK(ci.multiplier_is_lambda_power);
  }
}

TEST_CASE("family F invariants across a random corpus") {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 24; ++trial) {
    const int p = std::array{2, 3, 5}[static_cast<std::size_t>(trial % 3)];
    const auto f = corpus::random_family_f(rng, p, 15);
    CAPTURE(f.render());
    ClassifyOptions opts;
    opts.tower = {2, 64};
    const auto rep = classify_linearization_disc(f, opts);
    CHECK(rep.degrees.open == 1);
    CHECK(rep.structural.violations.empty());
    CHECK(rep.bound.violations.empty());
    if (rep.level == CertificateLevel::kExactSigma) {
      CHECK(rep.periodic_point.has_value() != rep.periodic_point_not_in_tower);
      if (rep.periodic_point) {
        REQUIRE(rep.indifference.has_value());
        CHECK(rep.indifference->periodic);
        CHECK(rep.indifference->multiplier_valuation == Valuation(0));
        CHECK(rep.indifference->multiplier_is_lambda_power);
      }
    }
    // The sigma radius lives in the extension of degree den(v_sigma).
    const std::int64_t k1 = rep.profile.k_prime - 1;
    const std::int64_t bound = std::lcm(k1, rep.gauge.A.denominator());
    CHECK(bound % rep.discs.v_sigma.denominator() == 0);
    const Disc sigma{rep.discs.v_sigma, Boundary::kOpen};
    CHECK(sigma.rational_in_base() == (rep.discs.v_sigma.denominator() == 1));
    if (!sigma.rational_in_base()) {
      CHECK(sigma.rationality() ==
            "rational-in-extension(e=" + std::to_string(rep.discs.v_sigma.denominator()) + ")");
    }
  }
}

TEST_CASE("delta is maximal exactly at k'") {
  for (auto [p, r, lambda] : {std::tuple{2, 1, "1+T"}, {2, 2, "b+T"}, {3, 1, "2+T"}, {5, 1, "2+T"},
                              {7, 1, "3+T"}, {3, 2, "b+T"}}) {
    const auto F = FieldParams::make(p, r);
    const auto prof = mult_profile(lit(F, lambda));
    const std::int64_t limit = 10 * prof.m * prof.p + prof.k_prime;
    const Rational at_kp(count_resonant(prof, prof.k_prime), prof.k_prime - 1);
    for (std::int64_t k = 2; k <= limit; ++k) {
      const Rational delta(count_resonant(prof, k), k - 1);
      if (k == prof.k_prime) continue;
      CHECK(delta < at_kp);
    }
  }
}

TEST_CASE("disc rendering") {
  const Disc d{Rational(1, 3), Boundary::kClosed};
  CHECK(d.str() == "{v(x) >= 1/3}");
  CHECK(d.rationality() == "rational-in-extension(e=3)");
  CHECK(Disc{Rational(2), Boundary::kOpen}.rationality() == "rational");
}
