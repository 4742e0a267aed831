#include "nalin/nalin.h"

#include <cstring>
#include <memory>
#include <optional>

#include "nalin/commands.hpp"

struct nalin_field {
  nalin::FieldPtr field;
};
struct nalin_series {
  nalin::LaurentSeries value;
};
struct nalin_map {
  nalin::PowerSeriesMap value;
};
struct nalin_conjugacy {
  nalin::Conjugacy value;
};

namespace {

thread_local std::string last_error;

nalin_status to_status(nalin::ErrorCode code) {
  return static_cast<nalin_status>(static_cast<int>(code) + 1);
}

template <typename Fn>
nalin_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return NALIN_OK;
  } catch (const nalin::Error& err) {
    last_error = err.what();
    return to_status(err.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NALIN_E_INTERNAL;
  } catch (const std::exception& err) {
    last_error = err.what();
    return NALIN_E_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) nalin::fail(nalin::ErrorCode::kInvalidArgument, what);
}

nalin_rational to_c(const nalin::Valuation& v) {
  if (v.is_infinite()) return {0, 1, 1};
  return {v.value().numerator(), v.value().denominator(), 0};
}

nalin_rational to_c(const nalin::Rational& r) { return {r.numerator(), r.denominator(), 0}; }

}  // namespace

extern "C" {

const char* nalin_version(void) { return "1.0.0"; }

const char* nalin_last_error(void) { return last_error.c_str(); }

const char* nalin_status_name(nalin_status status) {
  if (status == NALIN_OK) return "ok";
  if (status < NALIN_OK || status > NALIN_E_INTERNAL) return "unknown";
  return nalin::error_code_name(static_cast<nalin::ErrorCode>(static_cast<int>(status) - 1));
}

void nalin_string_free(char* s) { std::free(s); }

nalin_status nalin_field_new(int p, int r, nalin_field** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new nalin_field{nalin::FieldParams::make(p, r)};
  });
}

nalin_status nalin_field_new_modulus(int p, const int* modulus, size_t len, nalin_field** out) {
  return guarded([&] {
    require(out && modulus && len > 0, "null argument");
    *out = new nalin_field{nalin::FieldParams::make(p, std::vector<int>(modulus, modulus + len))};
  });
}

void nalin_field_free(nalin_field* field) { delete field; }

nalin_status nalin_field_describe(const nalin_field* field, char** out) {
  return guarded([&] {
    require(field && out, "null argument");
    *out = copy_string(field->field->describe());
  });
}

nalin_status nalin_field_mul(const nalin_field* field, const char* x, const char* y, char** out) {
  return guarded([&] {
    require(field && x && y && out, "null argument");
    const auto& F = *field->field;
    *out = copy_string(F.render(F.mul(F.parse(x), F.parse(y))));
  });
}

nalin_status nalin_field_inv(const nalin_field* field, const char* x, char** out) {
  return guarded([&] {
    require(field && x && out, "null argument");
    const auto& F = *field->field;
    *out = copy_string(F.render(F.inv(F.parse(x))));
  });
}

nalin_status nalin_field_order(const nalin_field* field, const char* x, uint64_t* out) {
  return guarded([&] {
    require(field && x && out, "null argument");
    *out = nalin::fq_mult_order(nalin::FqElement(field->field, field->field->parse(x)));
  });
}

nalin_status nalin_series_parse(const nalin_field* field, const char* text, int ram, int64_t prec,
                                nalin_series** out) {
  return guarded([&] {
    require(field && text && out, "null argument");
    require(ram >= 1, "ram must be >= 1");
    const std::int64_t horizon = prec < 0 ? nalin::LaurentSeries::kExact : prec;
    *out = new nalin_series{nalin::LaurentSeries::parse(text, field->field, ram, horizon)};
  });
}

void nalin_series_free(nalin_series* s) { delete s; }

nalin_status nalin_series_render(const nalin_series* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = copy_string(s->value.render());
  });
}

nalin_status nalin_series_valuation(const nalin_series* s, nalin_rational* out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = to_c(s->value.valuation());
  });
}

nalin_status nalin_series_add(const nalin_series* x, const nalin_series* y, nalin_series** out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    *out = new nalin_series{x->value + y->value};
  });
}

nalin_status nalin_series_mul(const nalin_series* x, const nalin_series* y, nalin_series** out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    *out = new nalin_series{x->value * y->value};
  });
}

nalin_status nalin_series_inverse(const nalin_series* x, int64_t rel_cap, nalin_series** out) {
  return guarded([&] {
    require(x && out, "null argument");
    require(rel_cap > 0, "rel_cap must be positive");
    *out = new nalin_series{x->value.inverse(rel_cap)};
  });
}

nalin_status nalin_map_new(const nalin_field* field, int ram, const char* lambda, const int* degrees,
                           const char* const* literals, size_t count, nalin_map** out) {
  return guarded([&] {
    require(field && lambda && out, "null argument");
    require(count == 0 || (degrees && literals), "null term arrays");
    std::map<int, std::string> table;
    for (size_t i = 0; i < count; ++i) {
      require(literals[i], "null literal");
      require(degrees[i] >= 2, "nonlinear degrees must be >= 2");
      table[degrees[i]] = literals[i];
    }
    table[1] = lambda;
    *out = new nalin_map{nalin::PowerSeriesMap::parse(table, field->field, ram)};
  });
}

void nalin_map_free(nalin_map* f) { delete f; }

nalin_status nalin_map_profile(const nalin_map* f, nalin_profile* out) {
  return guarded([&] {
    require(f && out, "null argument");
    const nalin::MultiplierProfile prof = nalin::mult_profile(f->value.lambda());
    nalin_profile p{};
    p.p = prof.p;
    p.m = prof.m;
    p.v_m = to_c(prof.v_m);
    p.k_prime = prof.k_prime;
    const nalin::Gauge gauge = nalin::ps_gauge(f->value);
    if (!gauge.linear) {
      const nalin::DiscProfile dp = nalin::disc_profile(prof, gauge);
      p.has_gauge = 1;
      p.A = to_c(gauge.A);
      p.v_rho = to_c(dp.v_rho);
      p.v_sigma = to_c(dp.v_sigma);
    }
    *out = p;
  });
}

nalin_status nalin_map_eval(const nalin_map* f, const nalin_series* x, int64_t cap, nalin_series** out) {
  return guarded([&] {
    require(f && x && out, "null argument");
    const std::int64_t horizon = cap < 0 ? nalin::LaurentSeries::kExact : cap;
    *out = new nalin_series{nalin::ps_eval(f->value, x->value, horizon)};
  });
}

nalin_status nalin_solve(const nalin_map* f, int degree, int64_t m0, int64_t m_max, nalin_conjugacy** out) {
  return guarded([&] {
    require(f && out, "null argument");
    nalin::SolveOptions opts;
    opts.policy.initial = m0;
    opts.policy.max = m_max;
    *out = new nalin_conjugacy{nalin::solve_sfe(f->value, degree, opts)};
  });
}

void nalin_conjugacy_free(nalin_conjugacy* g) { delete g; }

int nalin_conjugacy_degree(const nalin_conjugacy* g) { return g ? g->value.degree() : -1; }

nalin_status nalin_conjugacy_coefficient(const nalin_conjugacy* g, int k, nalin_series** out, nalin_zero_kind* kind) {
  return guarded([&] {
    require(g && out, "null argument");
    require(k >= 0 && k <= g->value.degree(), "coefficient index out of range");
    const auto idx = static_cast<std::size_t>(k);
    *out = new nalin_series{g->value.coeffs[idx]};
    if (kind) *kind = static_cast<nalin_zero_kind>(static_cast<int>(g->value.zero_kind[idx]));
  });
}

int nalin_run_command(const char* job_text, const char* command, int degree, const char* display_epsilon,
                      char** out, char** err) {
  nalin::CommandResult res;
  if (!job_text || !command) {
    res = {nalin::kExitParse, "", "error: null job or command\n"};
  } else {
    nalin::CommandOptions opts;
    opts.degree = degree;
    if (display_epsilon) opts.display_epsilon = display_epsilon;
    res = nalin::run_command(job_text, command, opts);
  }
  try {
    if (out) *out = copy_string(res.out);
    if (err) *err = copy_string(res.err);
  } catch (const std::bad_alloc&) {
    return nalin::kExitMath;
  }
  return res.exit_code;
}

}  // extern "C"
