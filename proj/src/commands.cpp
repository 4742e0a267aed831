#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "nalin/commands.hpp"

namespace nalin {

namespace {

using ojson = nlohmann::ordered_json;

std::string rat(const Rational& r) { return to_string(r); }

std::string val(const Valuation& v) { return v.is_infinite() ? "inf" : to_string(v.value()); }

std::string csv_valuation(const Valuation& v) {
  if (v.is_infinite()) return "inf,inf";
  return std::to_string(v.value().numerator()) + "," + std::to_string(v.value().denominator());
}

// eps^v for presentation.
double radius(const Rational& eps, const Rational& v) {
  return std::pow(boost::rational_cast<double>(eps), boost::rational_cast<double>(v));
}

std::string render_table(const std::map<int, std::string>& f) {
  std::string out;
  for (const auto& [deg, lit] : f) {
    if (!out.empty()) out += ";";
    out += std::to_string(deg) + "=" + lit;
  }
  return out;
}

Rational display_epsilon(const CommandOptions& opts) {
  Rational eps{0};
  try {
    eps = parse_rational(opts.display_epsilon);
  } catch (const Error&) {
    fail(ErrorCode::kParse, "--display-epsilon must be a rational such as 1/2");
  }
  if (!(eps > 0 && eps < 1)) fail(ErrorCode::kParse, "--display-epsilon must lie strictly between 0 and 1");
  return eps;
}

ojson profile_json(const Job& job, const MultiplierProfile& prof) {
  ojson j;
  j["field"] = job.field->describe();
  j["p"] = job.p;
  j["r"] = job.field->r();
  j["e"] = job.e;
  j["lambda"] = job.lambda;
  j["m"] = prof.m;
  j["v_m"] = rat(prof.v_m);
  j["k_prime"] = prof.k_prime;
  j["root_of_unity"] = "no";
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

CommandResult cmd_analyze(const Job& job, const CommandOptions& opts) {
  const Rational eps = display_epsilon(opts);
  const PowerSeriesMap f = job.map();
  const MultiplierProfile prof = mult_profile(f.lambda());
  ojson j;
  j["command"] = "analyze";
  j.update(profile_json(job, prof));
  j["map"] = f.render();
  const Gauge gauge = ps_gauge(f);
  if (gauge.linear) {
    j["A"] = nullptr;
    j["v_rho"] = nullptr;
    j["v_sigma"] = nullptr;
  } else {
    const DiscProfile dp = disc_profile(prof, gauge);
    j["A"] = rat(gauge.A);
    j["gauge_witness"] = gauge.witness;
    j["v_rho"] = rat(dp.v_rho);
    j["v_sigma"] = rat(dp.v_sigma);
    j["p_divisible_family"] = f.in_p_divisible_family();
    ojson d;
    d["epsilon"] = rat(eps);
    d["one_over_a"] = radius(eps, -gauge.A);
    d["rho"] = radius(eps, dp.v_rho);
    d["sigma"] = radius(eps, dp.v_sigma);
    j["display"] = d;
  }
  return {kExitOk, dump(j), ""};
}

int degree_for(const Job& job, const CommandOptions& opts) {
  const int D = opts.degree > 0 ? opts.degree : job.D;
  if (D < 1) fail(ErrorCode::kParse, "no degree: set \"D\" in the job or pass --degree");
  return D;
}

CommandResult cmd_solve(const Job& job, const CommandOptions& opts) {
  const PowerSeriesMap f = job.map();
  const int D = degree_for(job, opts);
  SolveOptions so;
  so.policy = job.policy;
  const Conjugacy g = solve_sfe(f, D, so);
  CommandResult res;
  std::ostringstream out;
  out << "k,v_num,v_den,zero_kind\n";
  for (int k = 1; k <= D; ++k) {
    out << k << "," << csv_valuation(g.valuation(k)) << "," << zero_kind_name(g.zero_kind[static_cast<std::size_t>(k)])
        << "\n";
  }
  res.out = out.str();
  std::ostringstream err;
  err << "solved to degree " << D << " at relative precision " << g.working_precision << "\n";
  const StructuralZeroReport sz = check_structural_zeros(g, f);
  if (sz.applicable) {
    err << "structural zeros: " << (sz.violations.empty() ? "ok" : "VIOLATED") << "\n";
    for (auto k : sz.violations) err << "  b_" << k << " nonzero with p not dividing k\n";
  }
  const Gauge gauge = ps_gauge(f);
  const BoundReport br = check_coefficient_bound(g, f, gauge);
  if (br.applicable) {
    err << "coefficient bound: " << (br.violations.empty() ? "ok" : "VIOLATED") << "\n";
    for (auto k : br.violations) err << "  b_" << k << " below (k-1)A - v_m N(k)\n";
    for (auto k : br.unresolved) err << "  b_" << k << " unresolved at working precision\n";
  }
  res.err = err.str();
  if (!sz.violations.empty() || !br.violations.empty()) res.exit_code = kExitCheck;
  return res;
}

CommandResult cmd_certify(const Job& job, const CommandOptions&) {
  const PowerSeriesMap f = job.map();
  if (job.Nmax < 1) fail(ErrorCode::kParse, "certify-divergence needs \"Nmax\" >= 1");
  DivergenceOptions o;
  o.solve.policy = job.policy;
  o.cross_check = true;
  const DivergenceCertificate cert = certify_divergence(f, job.Nmax, o);
  const std::string tag = cert.conjectural ? "conjectural" : "certificate";
  std::ostringstream out;
  out << "# [" << tag << "] certify-divergence p=" << job.p << " lambda=" << job.lambda
      << " a=" << f.coefficient(job.p + 1).render() << "\n";
  out << "N,degree,computed_num,computed_den,predicted,term_sum,slope,status\n";
  for (const auto& row : cert.rows) {
    out << row.N << "," << row.degree << "," << csv_valuation(row.computed) << ","
        << (row.predicted ? rat(*row.predicted) : "none") << "," << (row.term_sum ? rat(*row.term_sum) : "none")
        << "," << rat(row.slope) << "," << tag << "\n";
  }
  out << "# [" << tag << "] slopes strictly decreasing: " << (cert.slopes_decreasing ? "yes" : "no") << "\n";
  out << "# [" << tag << "] solvers and closed form agree: " << (cert.all_match ? "yes" : "no") << "\n";
  out << "# [" << tag << "] verdict: " << cert.verdict << "\n";
  CommandResult res{kExitOk, out.str(), ""};
  if (cert.verdict == "failed") {
    res.exit_code = kExitCheck;
    res.err = "divergence certificate failed\n";
  }
  if (cert.conjectural) res.err = "# [conjectural] m > 1: growth data only, no certificate\n";
  return res;
}

ojson residual_json(const Residual& r) {
  ojson j;
  j["zero_to_precision"] = r.zero_to_precision;
  j["horizon"] = val(r.horizon);
  if (!r.zero_to_precision) j["valuation"] = val(r.valuation());
  return j;
}

CommandResult cmd_disc(const Job& job, const CommandOptions& opts) {
  const Rational eps = display_epsilon(opts);
  const PowerSeriesMap f = job.map();
  ClassifyOptions co;
  co.D = opts.degree > 0 ? opts.degree : job.D;
  co.solve.policy = job.policy;
  co.kappa_max = job.kappa_max;
  co.tower.r_max = job.r_max;
  co.tower.e_max = job.e_max;
  const LinearizationReport rep = classify_linearization_disc(f, co);
  bool failed = !rep.structural.violations.empty() || !rep.bound.violations.empty();

  ojson j;
  j["command"] = "disc";
  j.update(profile_json(job, rep.profile));
  j["map"] = f.render();
  j["A"] = rat(rep.gauge.A);
  j["v_rho"] = rat(rep.discs.v_rho);
  j["v_sigma"] = rat(rep.discs.v_sigma);
  j["degree_computed"] = rep.degree_computed;
  j["certificate"] = certificate_level_name(rep.level);
  ojson d;
  d["v_radius"] = rat(rep.disc.v_radius);
  d["boundary"] = rep.disc.boundary == Boundary::kOpen ? "open" : "closed";
  d["rationality"] = rep.disc.rationality();
  d["display_radius"] = radius(eps, rep.disc.v_radius);
  j["disc"] = d;
  ojson deg;
  deg["open_sigma"] = rep.degrees.open;
  deg["closed_sigma"] = rep.degrees.closed;
  deg["tail_certified"] = rep.degrees.certified;
  j["degree"] = deg;
  j["structural_zero_violations"] = rep.structural.violations;
  j["bound_violations"] = rep.bound.violations;
  if (rep.extension) {
    ojson e;
    e["verdict"] = rep.extension->verdict;
    e["next_resonant"] = rep.extension->next_resonant;
    e["violations"] = rep.extension->violations;
    j["extension"] = e;
    failed = failed || !rep.extension->holds;
  }
  if (rep.level == CertificateLevel::kExactSigma) {
    if (rep.periodic_point) {
      const PeriodicPoint& pt = *rep.periodic_point;
      const IndifferenceCheck& ic = *rep.indifference;
      ojson pp;
      pp["tower"] = pt.point.field()->describe() + ", U^" + std::to_string(pt.e) + " = T";
      pp["r"] = pt.r;
      pp["e"] = pt.e;
      pp["point"] = pt.point.render();
      pp["kappa"] = pt.kappa;
      pp["periodic_to_horizon"] = ic.periodic;
      pp["residual_horizon"] = val(ic.residual.horizon());
      pp["multiplier"] = ic.multiplier.render();
      pp["multiplier_valuation"] = val(ic.multiplier_valuation);
      pp["multiplier_is_lambda_power"] = ic.multiplier_is_lambda_power;
      j["periodic_point"] = pp;
      failed = failed || !ic.periodic || ic.multiplier_valuation != Valuation(0);
    } else {
      j["periodic_point"] = "not-found-in-tower";
    }
  }

  ojson samples = ojson::array();
  for (const auto& s : job.samples) {
    const LaurentSeries x = LaurentSeries::parse(s, job.field, job.e);
    ojson row;
    row["x"] = s;
    const Valuation vx = x.valuation();
    if (vx > Valuation(rep.discs.v_rho)) {
      const Residual r = semiconjugacy_residual(f, rep.conjugacy, x);
      row["semi"] = residual_json(r);
      failed = failed || !r.zero_to_precision;
    } else {
      row["semi"] = "outside";
    }
    if (vx > Valuation(rep.discs.v_sigma)) {
      const Residual r = full_conjugacy_residual(f, rep.conjugacy, x);
      row["full"] = residual_json(r);
      failed = failed || !r.zero_to_precision;
    } else {
      row["full"] = "outside";
    }
    samples.push_back(row);
  }
  j["samples"] = samples;
  j["notes"] = rep.notes;
  CommandResult res{kExitOk, dump(j), ""};
  if (failed) {
    res.exit_code = kExitCheck;
    res.err = "one or more checks failed; see report\n";
  }
  return res;
}

CommandResult cmd_sweep(const Job& job, const CommandOptions& opts) {
  int D = opts.degree > 0 ? opts.degree : (job.sweep_degree > 0 ? job.sweep_degree : job.D);
  std::ostringstream out;
  out << "instance,lambda,map,k_lo,k_hi,slope_num,slope_den\n";
  if (job.sweep.empty()) return {kExitOk, out.str(), ""};
  if (D < 2) fail(ErrorCode::kParse, "sweep needs a degree >= 2 (sweep.D, D or --degree)");
  SolveOptions so;
  so.policy = job.policy;
  for (std::size_t i = 0; i < job.sweep.size(); ++i) {
    const SweepInstance& inst = job.sweep[i];
    std::map<int, std::string> table = inst.f;
    table[1] = inst.lambda;
    const PowerSeriesMap f = PowerSeriesMap::parse(table, job.field, job.e);
    const Conjugacy g = solve_sfe(f, D, so);
    for (std::int64_t lo = 1; lo < D; lo *= 2) {
      const std::int64_t k_lo = std::max<std::int64_t>(2, lo + 1);
      const std::int64_t k_hi = std::min<std::int64_t>(2 * lo, D);
      Valuation slope;
      for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        if (g.is_zero(static_cast<int>(k))) continue;
        const Valuation s(g.valuation(static_cast<int>(k)).value() / Rational(k));
        if (s < slope) slope = s;
      }
      out << i << "," << inst.lambda << "," << render_table(inst.f) << "," << k_lo << "," << k_hi << ","
          << csv_valuation(slope) << "\n";
    }
  }
  return {kExitOk, out.str(), ""};
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kIo: return kExitParse;
    case ErrorCode::kCheckFailed: return kExitCheck;
    default: return kExitMath;
  }
}

CommandResult run_command(std::string_view job_text, std::string_view command, const CommandOptions& opts) {
  try {
    const Job job = parse_job(job_text);
    if (command == "analyze") return cmd_analyze(job, opts);
    if (command == "solve") return cmd_solve(job, opts);
    if (command == "certify-divergence") return cmd_certify(job, opts);
    if (command == "disc") return cmd_disc(job, opts);
    if (command == "sweep") return cmd_sweep(job, opts);
    return {kExitParse, "", "error: unknown command \"" + std::string(command) + "\"\n"};
  } catch (const Error& err) {
    return {exit_code_for(err.code()), "", std::string("error: [") + error_code_name(err.code()) + "] " + err.what() + "\n"};
  } catch (const std::exception& err) {
    return {kExitMath, "", std::string("error: [internal] ") + err.what() + "\n"};
  }
}

}  // namespace nalin
