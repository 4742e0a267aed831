#include <json.hpp>

#include "nalin/commands.hpp"

namespace nalin {

namespace {

using json = nlohmann::json;

struct Locator {
  std::string_view text;

  std::pair<std::size_t, std::size_t> line_col(std::size_t offset) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  std::size_t find_key(const std::string& key, std::size_t from = 0) const {
    const std::size_t at = text.find("\"" + key + "\"", from);
    return at == std::string_view::npos ? from : at;
  }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& what) const {
    const auto [line, col] = line_col(offset);
    fail(ErrorCode::kParse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
};

const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

int as_int(const Locator& loc, std::size_t at, const json& v, const std::string& key) {
  if (!v.is_number_integer()) loc.fail_at(at, "\"" + key + "\" must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < INT32_MIN || x > INT32_MAX) loc.fail_at(at, "\"" + key + "\" out of range");
  return static_cast<int>(x);
}

std::string as_string(const Locator& loc, std::size_t at, const json& v, const std::string& key) {
  if (!v.is_string()) loc.fail_at(at, "\"" + key + "\" must be a string");
  return v.get<std::string>();
}

void check_keys(const Locator& loc, std::size_t at, const json& obj, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) loc.fail_at(loc.find_key(k, at), "unknown key \"" + k + "\"");
  }
}

std::map<int, std::string> parse_table(const Locator& loc, std::size_t at, const json& v) {
  if (!v.is_object()) loc.fail_at(at, "map table must be an object of \"degree\": \"literal\"");
  std::map<int, std::string> out;
  for (const auto& [k, lit] : v.items()) {
    const std::size_t kat = loc.find_key(k, at);
    int deg = 0;
    try {
      std::size_t used = 0;
      deg = std::stoi(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::exception&) {
      loc.fail_at(kat, "degree \"" + k + "\" is not an integer");
    }
    if (deg == 1) loc.fail_at(kat, "degree 1 belongs in \"lambda\", not in the map table");
    if (deg < 2) loc.fail_at(kat, "degree must be >= 2");
    out[deg] = as_string(loc, kat, lit, k);
  }
  return out;
}

// Parses a literal to surface syntax errors at load time.
void check_literal(const Locator& loc, std::size_t at, const std::string& text, const FieldPtr& field, int ram) {
  try {
    (void)LaurentSeries::parse(text, field, ram);
  } catch (const Error& err) {
    loc.fail_at(at, "bad literal \"" + text + "\": " + err.what());
  }
}

}  // namespace

PowerSeriesMap Job::map() const {
  std::map<int, std::string> table = f;
  table[1] = lambda;
  return PowerSeriesMap::parse(table, field, e);
}

Job parse_job(std::string_view text) {
  const Locator loc{text};
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    loc.fail_at(err.byte > 0 ? err.byte - 1 : 0, "malformed JSON");
  }
  if (!doc.is_object()) loc.fail_at(0, "job must be a JSON object");
  check_keys(loc, 0, doc,
             {"p", "r", "modulus", "e", "precision", "lambda", "f", "D", "Nmax", "kappa_max", "r_max", "e_max",
              "samples", "sweep"});

  Job job;
  auto at = [&](const char* key) { return loc.find_key(key); };
  const json* v = member(doc, "p");
  if (!v) loc.fail_at(0, "missing \"p\"");
  job.p = as_int(loc, at("p"), *v, "p");
  if (!is_prime(job.p)) loc.fail_at(at("p"), "p must be prime");
  if ((v = member(doc, "r"))) job.r = as_int(loc, at("r"), *v, "r");
  if (job.r < 1) loc.fail_at(at("r"), "r must be >= 1");
  if ((v = member(doc, "modulus"))) {
    if (!v->is_array()) loc.fail_at(at("modulus"), "\"modulus\" must be a list of integers, constant term first");
    for (const auto& c : *v) job.modulus.push_back(as_int(loc, at("modulus"), c, "modulus"));
  }
  try {
    if (job.modulus.empty()) {
      job.field = FieldParams::make(job.p, job.r);
    } else {
      job.field = FieldParams::make(job.p, job.modulus);
      if (job.field->r() != job.r && member(doc, "r")) loc.fail_at(at("modulus"), "modulus degree differs from r");
      job.r = job.field->r();
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::kParse) throw;
    loc.fail_at(at(job.modulus.empty() ? "p" : "modulus"), err.what());
  }
  if ((v = member(doc, "e"))) job.e = as_int(loc, at("e"), *v, "e");
  if (job.e < 1) loc.fail_at(at("e"), "e must be >= 1");

  if ((v = member(doc, "precision"))) {
    const std::size_t pat = at("precision");
    if (!v->is_object()) loc.fail_at(pat, "\"precision\" must be an object");
    check_keys(loc, pat, *v, {"M0", "M_max", "auto_retry"});
    if (const json* w = member(*v, "M0")) job.policy.initial = as_int(loc, loc.find_key("M0", pat), *w, "M0");
    if (const json* w = member(*v, "M_max")) job.policy.max = as_int(loc, loc.find_key("M_max", pat), *w, "M_max");
    if (const json* w = member(*v, "auto_retry")) {
      if (!w->is_boolean()) loc.fail_at(loc.find_key("auto_retry", pat), "\"auto_retry\" must be true or false");
      job.policy.auto_retry = w->get<bool>();
    }
    if (!(0 < job.policy.initial && job.policy.initial <= job.policy.max)) {
      loc.fail_at(pat, "precision needs 0 < M0 <= M_max");
    }
  }

  v = member(doc, "lambda");
  if (!v) loc.fail_at(0, "missing \"lambda\"");
  job.lambda = as_string(loc, at("lambda"), *v, "lambda");
  check_literal(loc, at("lambda"), job.lambda, job.field, job.e);
  if ((v = member(doc, "f"))) {
    job.f = parse_table(loc, at("f"), *v);
    for (const auto& [deg, lit] : job.f) check_literal(loc, loc.find_key(std::to_string(deg), at("f")), lit, job.field, job.e);
  }

  const std::pair<const char*, int*> ints[] = {{"D", &job.D},         {"Nmax", &job.Nmax}, {"kappa_max", &job.kappa_max},
                                               {"r_max", &job.r_max}, {"e_max", &job.e_max}};
  for (const auto& [key, dst] : ints) {
    if ((v = member(doc, key))) {
      *dst = as_int(loc, at(key), *v, key);
      if (*dst < 0) loc.fail_at(at(key), std::string("\"") + key + "\" must be >= 0");
    }
  }
  if (job.r_max == 0) job.r_max = job.r;
  if (job.r_max % job.r != 0) loc.fail_at(at("r_max"), "r_max must be a multiple of r");

  if ((v = member(doc, "samples"))) {
    if (!v->is_array()) loc.fail_at(at("samples"), "\"samples\" must be a list of literals");
    for (const auto& s : *v) {
      job.samples.push_back(as_string(loc, at("samples"), s, "samples"));
      check_literal(loc, at("samples"), job.samples.back(), job.field, job.e);
    }
  }

  if ((v = member(doc, "sweep"))) {
    const std::size_t sat = at("sweep");
    if (!v->is_object()) loc.fail_at(sat, "\"sweep\" must be an object");
    check_keys(loc, sat, *v, {"lambda", "f", "D"});
    std::vector<std::string> lambdas;
    std::vector<std::map<int, std::string>> maps;
    if (const json* w = member(*v, "lambda")) {
      const std::size_t lat = loc.find_key("lambda", sat);
      if (!w->is_array()) loc.fail_at(lat, "sweep \"lambda\" must be a list");
      for (const auto& s : *w) {
        lambdas.push_back(as_string(loc, lat, s, "lambda"));
        check_literal(loc, lat, lambdas.back(), job.field, job.e);
      }
    }
    if (const json* w = member(*v, "f")) {
      const std::size_t fat = loc.find_key("f", sat);
      if (!w->is_array()) loc.fail_at(fat, "sweep \"f\" must be a list of map tables");
      for (const auto& t : *w) {
        maps.push_back(parse_table(loc, fat, t));
        for (const auto& [deg, lit] : maps.back()) check_literal(loc, fat, lit, job.field, job.e);
      }
    }
    if (const json* w = member(*v, "D")) job.sweep_degree = as_int(loc, loc.find_key("D", sat), *w, "D");
    for (const auto& l : lambdas) {
      for (const auto& m : maps) job.sweep.push_back({l, m});
    }
  }
  return job;
}

}  // namespace nalin
