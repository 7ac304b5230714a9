#include <hyperreg/config.hpp>
#include <hyperreg/json_util.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hyperreg {

namespace {

using nlohmann::json;

const std::vector<std::string> kSuites = {"periods", "iterated-props", "regulator",
                                          "kra",     "monreg2",        "johnson"};

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ConfigParse, what); }

cd read_complex(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(key + " must be a number or an [re, im] pair");
}

double read_positive(const json& v, const std::string& key) {
  if (!v.is_number() || !(v.get<double>() > 0)) fail(key + " must be a positive number");
  return v.get<double>();
}

int read_int(const json& v, const std::string& key, int lo, int hi) {
  if (!v.is_number_integer()) fail(key + " must be an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) fail(key + " out of range");
  return static_cast<int>(x);
}

void apply_tolerance(RunConfig& c, const std::string& name, const json& v) {
  const std::string key = "tolerances." + name;
  double* slot = nullptr;
  if (name == "clearance") slot = &c.curve_tolerances.clearance;
  else if (name == "residual") slot = &c.curve_tolerances.residual;
  else if (name == "quadrature") slot = &c.quad.tolerance;
  else if (name == "iterated") slot = &c.tolerances.iterated;
  else if (name == "period") slot = &c.tolerances.period;
  else if (name == "integrality") slot = &c.tolerances.integrality;
  else if (name == "min_eig") slot = &c.tolerances.min_eig;
  else if (name == "disk") slot = &c.tolerances.disk;
  else if (name == "kra") slot = &c.tolerances.kra;
  else if (name == "regulator") slot = &c.tolerances.regulator;
  else if (name == "monreg2") slot = &c.tolerances.monreg2;
  else if (name == "torsion") slot = &c.tolerances.torsion;
  else if (name == "torsion_single") slot = &c.tolerances.torsion_single;
  else fail("unknown key " + key);
  *slot = read_positive(v, key);
}

void apply_key(RunConfig& c, const std::string& key, const json& v) {
  if (key == "f_coeffs") {
    if (!v.is_array() || v.empty()) fail("f_coeffs must be a non-empty list of [re, im] pairs");
    c.f_coeffs.clear();
    for (const auto& e : v) c.f_coeffs.push_back(read_complex(e, key));
  } else if (key == "q1") {
    c.q1 = read_int(v, key, 0, 1000);
  } else if (key == "q2") {
    c.q2 = read_int(v, key, 0, 1000);
  } else if (key == "p") {
    c.p = read_int(v, key, 0, 1000);
  } else if (key == "lambda") {
    c.lambda = read_complex(v, key);
  } else if (key == "tolerances") {
    if (!v.is_object()) fail("tolerances must be an object");
    for (const auto& [name, value] : v.items()) apply_tolerance(c, name, value);
  } else if (key.rfind("tolerances.", 0) == 0) {
    apply_tolerance(c, key.substr(11), v);
  } else if (key == "quad_order") {
    c.quad.order = read_int(v, key, 4, 200);
    c.quad.check_order = c.quad.order + std::max(4, c.quad.order / 2);
  } else if (key == "seed") {
    if (!v.is_number_unsigned()) fail("seed must be a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  } else if (key == "instances") {
    c.instances = read_int(v, key, 1, 100000);
  } else if (key == "genus") {
    c.genus = read_int(v, key, 1, 4);
  } else if (key == "g1") {
    c.g1 = read_int(v, key, 0, 4);
  } else if (key == "suites" || key == "suite") {
    std::vector<std::string> s;
    if (v.is_string()) s.push_back(v.get<std::string>());
    else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_string()) fail("suites must be strings");
        s.push_back(e.get<std::string>());
      }
    } else {
      fail("suites must be a string or a list");
    }
    expand_suites(s);
    c.suites = s;
  } else {
    fail("unknown key " + key);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.f_coeffs = {0.0, 24.0, -50.0, 35.0, -10.0, 1.0};
  return c;
}

std::vector<std::string> expand_suites(const std::vector<std::string>& suites) {
  if (suites.empty()) fail("no suite selected");
  std::vector<std::string> out;
  for (const auto& s : suites) {
    if (s == "all") {
      out = kSuites;
      continue;
    }
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) fail("unknown suite " + s);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) apply_key(base, key, value);
    return base;
  }
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (key.empty() || raw.empty()) fail("line " + std::to_string(lineno) + ": empty key or value");
    json v;
    try {
      v = json::parse(raw);
    } catch (const json::parse_error&) {
      // bare words such as `suite = kra`
      if (raw.find_first_of("[]{},\"") != std::string::npos)
        fail("line " + std::to_string(lineno) + ": malformed value for " + key);
      v = raw;
    }
    apply_key(base, key, v);
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

HyperellipticCurve make_curve(const RunConfig& config) {
  return make_curve(config.f_coeffs, config.q1, config.q2, config.p, config.lambda,
                    config.curve_tolerances);
}

nlohmann::json to_json(const RunConfig& c) {
  json coeffs = json::array();
  for (cd z : c.f_coeffs) coeffs.push_back(to_json_complex(z));
  const auto& t = c.tolerances;
  return {
      {"f_coeffs", coeffs},
      {"q1", c.q1},
      {"q2", c.q2},
      {"p", c.p},
      {"lambda", to_json_complex(c.lambda)},
      {"quad_order", c.quad.order},
      {"check_order", c.quad.check_order},
      {"seed", c.seed},
      {"instances", c.instances},
      {"genus", c.genus},
      {"g1", c.g1},
      {"suites", expand_suites(c.suites)},
      {"tolerances",
       {{"clearance", c.curve_tolerances.clearance},
        {"residual", c.curve_tolerances.residual},
        {"quadrature", c.quad.tolerance},
        {"iterated", t.iterated},
        {"period", t.period},
        {"integrality", t.integrality},
        {"min_eig", t.min_eig},
        {"disk", t.disk},
        {"kra", t.kra},
        {"regulator", t.regulator},
        {"monreg2", t.monreg2},
        {"torsion", t.torsion},
        {"torsion_single", t.torsion_single}}},
  };
}

}  // namespace hyperreg
