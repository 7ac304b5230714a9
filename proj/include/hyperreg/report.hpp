#pragma once

#include <hyperreg/config.hpp>
#include <hyperreg/regulator.hpp>

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hyperreg {

/// One residual against its threshold. `at_least` flips the comparison for
/// quantities that must stay large (e.g. min eigenvalue).
struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool at_least = false;
  bool pass() const { return at_least ? value >= tolerance : value < tolerance; }
};

struct SuiteReport {
  std::string name;
  nlohmann::json data = nlohmann::json::object();
  std::vector<Check> checks;
  std::string error;  // module error, if the suite aborted
  double seconds = 0;
  bool pass() const;
};

/// Lazily built curve, loops, periods and surface integral shared by suites.
class Session {
 public:
  explicit Session(RunConfig config) : config_(std::move(config)) {}
  const RunConfig& config() const { return config_; }
  const HyperellipticCurve& curve();
  const RegulatorSetup& setup();
  const SurfaceResult& surface();

 private:
  RunConfig config_;
  std::optional<HyperellipticCurve> curve_;
  std::optional<RegulatorSetup> setup_;
  std::optional<SurfaceResult> surface_;
};

struct IteratedLaws {
  double composition = 0;  // int_{ab} w1 w2 = int_a w1 w2 + int_b w1 w2 + int_a w1 int_b w2
  double shuffle = 0;      // int w1 w2 + int w2 w1 = int w1 int w2
  double df_first = 0;     // int dR w = int R w - R(start) int w
  double df_last = 0;      // int w dR = R(end) int w - int R w
  double inverse = 0;      // int_{a a^-1} w1 w2 = 0
  double exact = 0;        // int dR = R(end) - R(start)
  int instances = 0;
  double max() const;
};

/// Randomized (path, forms) instances built from pieces of the basis loops.
IteratedLaws iterated_laws(const RegulatorSetup& setup, std::uint64_t seed, int instances);

struct PeriodCheck {
  std::vector<int> orders;
  double symmetry = 0;            // max over orders of |Z - Z^T|
  double min_eig = 0;             // min over orders of the smallest eigenvalue of Im Z
  double a_period_deviation = 0;  // max |int_{A_k} dz_i - delta| over both orders
  double order_change = 0;        // |Z(order 1) - Z(order 2)|
  Eigen::MatrixXcd Z;
};

PeriodCheck period_check(const HyperellipticCurve& curve, const QuadOptions& base);

struct DiskCheck {
  std::array<Eigen::MatrixXcd, 2> disk;  // + and -
  std::array<Eigen::MatrixXcd, 2> rhs;
  double residual = 0;
  double error = 0;
};

DiskCheck disk_identity(const RegulatorSetup& setup);

struct RegulatorComparison {
  RegFunctional paths, surface;
  double consistency_paths = 0, consistency_surface = 0;
  Reduction reduction;
  PrimitiveReport primitive;
  /// reg_paths + 2 c(m) cut(m, i) - 4 pi i int_{gamma+} dx_m int_{gamma+} dz_i
  Eigen::MatrixXcd cut_corrected;
  double cut_corrected_residual = 0;  // |reg_surface - cut_corrected|
};

RegulatorComparison compare_regulators(const RegulatorSetup& setup, const SurfaceResult& surface);

SuiteReport run_suite(const std::string& name, Session& session);

/// All requested suites; `pass` is true iff every check of every suite passed.
nlohmann::json run(const RunConfig& config, bool& pass);

nlohmann::json to_json(const SuiteReport& r);

}  // namespace hyperreg
