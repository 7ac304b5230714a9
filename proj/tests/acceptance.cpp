// Prints one PASS/FAIL line per acceptance criterion on the reference curve.
// Thresholds are fixed here, independent of any config.
//
//   acceptance [--expect-fail 4,5]
//
// Without the flag the exit status is 0 iff every criterion passes. With it,
// the status is 0 iff the failing criteria are exactly the listed ones.

#include <hyperreg/johnson.hpp>
#include <hyperreg/report.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace hyperreg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// omega X_l - X_l omega, spelled out (0-based l).
IntTensor expected_tau(int g, int l) {
  IntTensor t(2 * g, 3);
  for (int k = 0; k < g; ++k) {
    t.at({k, g + k, l}) += 1;
    t.at({g + k, k, l}) -= 1;
    t.at({l, k, g + k}) -= 1;
    t.at({l, g + k, k}) += 1;
  }
  return t;
}

const std::vector<std::pair<int, int>> kSplits = {{2, 1}, {3, 1}, {3, 2}};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  bool expecting = false;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--expect-fail" && a + 1 < argc) {
      expecting = true;
      std::stringstream ss(argv[++a]);
      for (std::string tok; std::getline(ss, tok, ',');) expect_fail.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: acceptance [--expect-fail i,j,...]\n";
      return 2;
    }
  }

  const RunConfig config = default_config();
  std::optional<RegulatorSetup> setup;
  std::optional<SurfaceResult> surface;
  double surface_seconds = 0;

  auto need_setup = [&]() -> const RegulatorSetup& {
    if (!setup) setup = make_setup(make_curve(config), config.quad);
    return *setup;
  };
  auto need_surface = [&]() -> const SurfaceResult& {
    if (!surface) {
      const auto t0 = std::chrono::steady_clock::now();
      surface = surface_integral_log(need_setup().curve, need_setup().basis);
      surface_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *surface;
  };

  std::vector<std::pair<double, std::function<Outcome()>>> criteria = {
      {60, [&] {
         const IteratedLaws L = iterated_laws(need_setup(), config.seed, 50);
         return Outcome{L.instances == 50 && L.max() < 1e-8,
                        std::to_string(L.instances) + " instances, max residual " + fmt(L.max())};
       }},
      {60, [&] {
         const PeriodCheck p = period_check(make_curve(config), config.quad);
         const bool ok = p.symmetry < 1e-8 && p.min_eig > 1e-6 && p.a_period_deviation < 1e-8;
         return Outcome{ok, "|Z-Z^T| " + fmt(p.symmetry) + ", min eig Im Z " + fmt(p.min_eig) +
                                ", A-periods " + fmt(p.a_period_deviation) + " at orders " +
                                std::to_string(p.orders[0]) + "/" + std::to_string(p.orders[1])};
       }},
      {300, [&] {
         const DiskCheck d = disk_identity(need_setup());
         return Outcome{d.residual < 1e-5, "max residual " + fmt(d.residual) + " over 8 pairs, both signs"};
       }},
      {1200, [&] {
         double worst = 0;
         int bad = 0;
         for (int l = 0; l < 4; ++l)
           for (int i = 0; i < 2; ++i) {
             const KraResult k = verify_kra(need_setup(), need_surface(), l, i);
             worst = std::max(worst, k.residual);
             bad += k.residual >= 1e-4;
           }
         return Outcome{worst < 1e-4, std::to_string(bad) + "/8 instances above 1e-4, max residual " + fmt(worst)};
       }},
      {1200, [&] {
         const RegulatorComparison c = compare_regulators(need_setup(), need_surface());
         const int nmax = c.reduction.coefficients.cwiseAbs().maxCoeff();
         std::string coeffs;
         for (double v : c.reduction.real_coefficients) coeffs += (coeffs.empty() ? "" : " ") + fmt(v);
         return Outcome{c.reduction.residual < 1e-4 && nmax <= 4,
                        "residual " + fmt(c.reduction.residual) + ", coefficients [" + coeffs + "]"};
       }},
      {300, [&] {
         const Monreg2Result m = verify_monreg2(need_setup(), separating_loop(need_setup().curve, {0, 1, 2}));
         return Outcome{m.residual < 1e-5, "max residual " + fmt(m.residual)};
       }},
      {60, [&] {
         const TwoTorsionResult t = two_torsion_check(need_setup());
         return Outcome{t.doubled_residual < 1e-6 && t.single_residual >= 1e-2,
                        "2 sigma residual " + fmt(t.doubled_residual) + ", sigma residual " + fmt(t.single_residual)};
       }},
      {60, [&] {
         int mismatches = 0;
         for (auto [g, g1] : kSplits) {
           const TensorMap t = tau_kJ(bounding_pair(g, g1), 3);
           for (int l = 0; l < 2 * g; ++l) {
             const bool fixed = l < g1 || (l >= g && l < g + g1);
             mismatches += fixed ? !t[l].is_zero() : !(t[l] == expected_tau(g, l));
           }
         }
         return Outcome{mismatches == 0, std::to_string(mismatches) + " mismatching images over (2,1) (3,1) (3,2)"};
       }},
      {60, [&] {
         int mismatches = 0;
         for (auto [g, g1] : kSplits) {
           const Automorphism f = bounding_pair(g, g1);
           const TensorMap a = tau_kJ(f, 3), b = tau_k_lie(f, 3);
           for (int l = 0; l < 2 * g; ++l) mismatches += !(a[l] == b[l]) || !is_lie_element(b[l]);
         }
         return Outcome{mismatches == 0, std::to_string(mismatches) + " mismatching images"};
       }},
      {60, [&] {
         bool ok = true;
         std::string detail;
         for (auto [g, g1] : kSplits) {
           const MonodromyReport r = monodromy_report(g, g1);
           ok = ok && r.proportional;
           detail += "(" + std::to_string(g) + "," + std::to_string(g1) + ") kappa " + std::to_string(r.kappa) +
                     " = " + fmt(r.ratio_two) + " x 2(2g+1) = " + fmt(r.ratio_four) + " x 4(2g+1); ";
         }
         return Outcome{ok, detail};
       }},
  };

  std::set<int> failed;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    const int id = static_cast<int>(n) + 1;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[n].second();
    } catch (const Error& e) {
      o = {false, e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (id == 4) seconds += surface_seconds;  // the shared 2D integral counts against the kra budget
    const bool in_time = seconds < criteria[n].first;
    if (!in_time) o.detail += " (over the " + fmt(criteria[n].first) + " s budget)";
    const bool pass = o.pass && in_time;
    if (!pass) failed.insert(id);
    std::printf("criterion %2d: %s  %s [%.2f s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
  }
  std::fflush(stdout);
  if (!expecting) return failed.empty() ? 0 : 1;
  if (failed != expect_fail) {
    std::printf("failing set differs from the expected one\n");
    return 1;
  }
  return 0;
}
