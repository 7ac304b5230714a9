#pragma once

#include <hyperreg/integrate.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hyperreg {

/// Pass thresholds for the suite checks.
struct SuiteTolerances {
  double iterated = 1e-8;
  double period = 1e-8;
  double integrality = 1e-6;  // loop integrals of dh/h against 2 pi i Z
  double min_eig = 1e-6;
  double disk = 1e-5;
  double kra = 1e-4;
  double regulator = 1e-4;
  double monreg2 = 1e-5;
  double torsion = 1e-6;
  double torsion_single = 1e-2;  // the undoubled vector must stay at least this far off the lattice
};

struct RunConfig {
  std::vector<cd> f_coeffs;  // ascending
  int q1 = 0, q2 = 4, p = 2;
  cd lambda{0, -1};
  Tolerances curve_tolerances;
  QuadOptions quad;
  SuiteTolerances tolerances;
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = 20240521;
  int instances = 50;  // randomized iterated-integral cases
  int genus = 2, g1 = 1;  // johnson suite
};

/// x(x-1)(x-2)(x-3)(x-4), q1 = 0, q2 = 4, p = 2, lambda = -i.
RunConfig default_config();

/// A JSON object or `key = value` lines (values in JSON syntax, `#` comments,
/// dotted keys such as `tolerances.kra`). Unknown keys and malformed values
/// throw ConfigParse. Keys absent from the text keep their value in `base`.
RunConfig parse_config(const std::string& text, RunConfig base = default_config());
RunConfig load_config(const std::string& path, RunConfig base = default_config());

/// The concrete suite list, `all` expanded; ConfigParse on unknown names.
std::vector<std::string> expand_suites(const std::vector<std::string>& suites);

HyperellipticCurve make_curve(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

}  // namespace hyperreg
