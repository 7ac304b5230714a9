#include <hyperreg/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Regulator and monodromy checks for hyperelliptic curves"};
  std::vector<std::string> suites;
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_order, genus, g1;
  app.add_option("--suite", suites,
                 "periods | regulator | kra | monreg2 | iterated-props | johnson | all (repeatable)");
  app.add_option("--config", config_path, "JSON object or key = value lines; default is the reference curve");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--seed", seed, "seed for the randomized suites");
  app.add_option("--quad-order", quad_order, "Gauss points per panel");
  app.add_option("--genus,--g", genus, "genus for the johnson suite");
  app.add_option("--g1", g1, "size of the fixed block for the johnson suite");
  CLI11_PARSE(app, argc, argv);

  using namespace hyperreg;
  bool pass = false;
  nlohmann::json report;
  try {
    RunConfig config = config_path.empty() ? default_config() : load_config(config_path);
    if (!suites.empty()) {
      expand_suites(suites);
      config.suites = suites;
    }
    if (seed) config.seed = *seed;
    if (quad_order) {
      if (*quad_order < 4 || *quad_order > 200) throw Error(ErrorCode::ConfigParse, "--quad-order out of range");
      config.quad.order = *quad_order;
      config.quad.check_order = *quad_order + std::max(4, *quad_order / 2);
    }
    if (genus) config.genus = *genus;
    if (g1) config.g1 = *g1;
    report = run(config, pass);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const std::string text = report.dump(2);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text << "\n";
  }
  for (const auto& [name, suite] : report["suites"].items()) {
    std::cerr << name << ": " << (suite["pass"].get<bool>() ? "pass" : "FAIL");
    if (suite.contains("error")) std::cerr << " (" << suite["error"].get<std::string>() << ")";
    for (const auto& c : suite["checks"])
      if (!c["pass"].get<bool>()) std::cerr << " " << c["name"].get<std::string>();
    std::cerr << "\n";
  }
  return pass ? 0 : 1;
}
