#include <hyperreg/json_util.hpp>
#include <hyperreg/johnson.hpp>
#include <hyperreg/report.hpp>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace hyperreg {

namespace {

using nlohmann::json;

const cd kTwoPiI(0, 2 * std::numbers::pi);

Form dz_form(const RegulatorSetup& s, int i) { return as_form(holomorphic(s.basis, i), s.basis); }
Form dx_form(const RegulatorSetup& s, int m) { return as_form(s.duals[m], s.basis); }

Rational linear_over_linear(cd r0, cd r1, cd pole) {
  Rational R;
  R.num = Poly(2);
  R.num << r0, r1;
  R.den = Poly(2);
  R.den << -pole, 1.0;
  return R;
}

}  // namespace

bool SuiteReport::pass() const {
  if (!error.empty()) return false;
  for (const Check& c : checks)
    if (!c.pass()) return false;
  return true;
}

const HyperellipticCurve& Session::curve() {
  if (!curve_) curve_ = make_curve(config_);
  return *curve_;
}

const RegulatorSetup& Session::setup() {
  if (!setup_) setup_ = make_setup(curve(), config_.quad);
  return *setup_;
}

const SurfaceResult& Session::surface() {
  if (!surface_) surface_ = surface_integral_log(curve(), setup().basis);
  return *surface_;
}

double IteratedLaws::max() const {
  return std::max({composition, shuffle, df_first, df_last, inverse, exact});
}

IteratedLaws iterated_laws(const RegulatorSetup& s, std::uint64_t seed, int instances) {
  const int g = s.genus();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), split(0.2, 0.8), far(3.0, 5.0);
  auto rc = [&] { return cd(unit(rng), unit(rng)); };
  // Poles well away from every loop: the loops stay within |Im x| < 3 for
  // the collinear branch layouts we construct.
  double span = 0;
  for (cd e : s.curve.roots()) span = std::max(span, std::abs(e - s.curve.p()));
  auto far_point = [&] {
    const double side = unit(rng) < 0 ? -1.0 : 1.0;
    return s.curve.p() + cd(span * unit(rng), side * (span + far(rng)));
  };
  auto random_form = [&] {
    RationalForm r;
    Poly b = Poly::Zero(g);
    for (int k = 0; k < g; ++k) b[k] = rc();
    r.b.num = b;
    r.a = linear_over_linear(rc(), 0.0, far_point());
    std::uniform_int_distribution<int> pick(0, 2 * g - 1);
    return as_form(r) + scale(rc(), dx_form(s, pick(rng)));
  };

  IteratedLaws out;
  std::uniform_int_distribution<int> pick_loop(0, static_cast<int>(s.loops.loops.size()) - 1);
  for (int n = 0; n < instances; ++n) {
    LiftedPath loop = s.loops.loops[pick_loop(rng)];
    if (unit(rng) < 0) loop = loop.reversed();
    std::uniform_int_distribution<int> pick_seg(0, loop.segment_count() - 1);
    const int seg = pick_seg(rng);
    const double t = split(rng);
    const LiftedPath a = loop.prefix(seg, t), b = loop.suffix(seg, t);
    const LiftedPath ab = a.then(b), aa = a.then(a.reversed());

    const Form w1 = random_form(), w2 = random_form();
    const Rational R = linear_over_linear(rc(), rc(), far_point());
    const Form dR = as_form(RationalForm{R.derivative(), Rational{poly_constant(0), poly_constant(1)}});
    const Form Rw1 = times([R](cd x, cd) { return R(x); }, w1, R.poles());

    std::vector<cd> poles = w1.poles;
    poles.insert(poles.end(), w2.poles.begin(), w2.poles.end());
    const std::vector<cd> r_poles = R.poles();
    poles.insert(poles.end(), r_poles.begin(), r_poles.end());
    PathQuadrature qa(a, s.quad, poles), qb(b, s.quad, poles), qab(ab, s.quad, poles), qaa(aa, s.quad, poles);

    const cd a1 = qa.integrate(w1).value, a2 = qa.integrate(w2).value;
    const cd b2 = qb.integrate(w2).value;
    const cd a12 = qa.iterated({w1, w2}).value, a21 = qa.iterated({w2, w1}).value;
    const cd ab12 = qab.iterated({w1, w2}).value;
    const cd b12 = qb.iterated({w1, w2}).value;
    out.composition = std::max(out.composition, std::abs(ab12 - a12 - b12 - a1 * b2));
    out.shuffle = std::max(out.shuffle, std::abs(a12 + a21 - a1 * a2));
    const cd aRw = qa.integrate(Rw1).value;
    out.df_first = std::max(out.df_first, std::abs(qa.iterated({dR, w1}).value - (aRw - R(a.start_x()) * a1)));
    out.df_last = std::max(out.df_last, std::abs(qa.iterated({w1, dR}).value - (R(a.end_x()) * a1 - aRw)));
    out.inverse = std::max(out.inverse, std::abs(qaa.iterated({w1, w2}).value));
    out.exact = std::max(out.exact, std::abs(qa.integrate(dR).value - (R(a.end_x()) - R(a.start_x()))));
    ++out.instances;
  }
  return out;
}

PeriodCheck period_check(const HyperellipticCurve& curve, const QuadOptions& base) {
  const int g = curve.genus();
  const LoopSystem loops = symplectic_basis(curve);
  PeriodCheck out;
  QuadOptions o1 = base, o2 = base;
  o2.order = 2 * base.order;
  o2.check_order = 2 * base.check_order;
  out.orders = {o1.order, o2.order};
  out.min_eig = std::numeric_limits<double>::infinity();
  std::vector<NormalizedBasis> bases;
  for (const QuadOptions* o : {&o1, &o2}) {
    NormalizedBasis nb = normalize(curve, loops, *o);
    out.symmetry = std::max(out.symmetry, (nb.Z - nb.Z.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nb.Z.imag());
    out.min_eig = std::min(out.min_eig, es.eigenvalues().minCoeff());
    bases.push_back(std::move(nb));
  }
  // A-periods of each normalized basis, integrated with the other order.
  for (int which = 0; which < 2; ++which) {
    const NormalizedBasis& nb = bases[which];
    const QuadOptions& other = which == 0 ? o2 : o1;
    for (int k = 0; k < g; ++k) {
      PathQuadrature q(loops.loops[k], other);
      for (int i = 0; i < g; ++i) {
        const cd v = q.integrate(as_form(holomorphic(nb, i), nb)).value;
        out.a_period_deviation = std::max(out.a_period_deviation, std::abs(v - (i == k ? 1.0 : 0.0)));
      }
    }
  }
  out.order_change = (bases[0].Z - bases[1].Z).cwiseAbs().maxCoeff();
  out.Z = bases[0].Z;
  return out;
}

DiskCheck disk_identity(const RegulatorSetup& s) {
  const int g = s.genus();
  DiskCheck out;
  for (int sign = 0; sign < 2; ++sign) {
    const LiftedPath& a = sign == 0 ? s.gamma.plus : s.gamma.minus;
    const LiftedPath& b = sign == 0 ? s.gamma.minus : s.gamma.plus;
    const DiskResult dr = disk_integral(a, s.basis, s.duals);
    out.disk[sign] = dr.value;
    out.error = std::max(out.error, dr.error);
    out.rhs[sign].resize(2 * g, g);
    PathQuadrature qa(a, s.quad), qb(b, s.quad);
    for (int m = 0; m < 2 * g; ++m)
      for (int i = 0; i < g; ++i) {
        const Form dx = dx_form(s, m), dz = dz_form(s, i);
        out.rhs[sign](m, i) = qa.iterated({dx, dz}).value - qb.iterated({dz, dx}).value;
      }
    out.residual = std::max(out.residual, (out.disk[sign] - out.rhs[sign]).cwiseAbs().maxCoeff());
  }
  return out;
}

RegulatorComparison compare_regulators(const RegulatorSetup& s, const SurfaceResult& surface) {
  const int g = s.genus();
  RegulatorComparison out{reg_paths(s), reg_surface(s, surface), 0, 0, {}, {}, {}, 0};
  out.consistency_paths = linear_consistency(out.paths.values, s.basis);
  out.consistency_surface = linear_consistency(out.surface.values, s.basis);
  const PeriodLattice lattice = lattice_basis(s.basis);
  out.reduction = reduce_mod(out.surface.values - out.paths.values, lattice);
  out.primitive = primitive_projection(s, out.paths, out.surface);

  out.cut_corrected = out.paths.values;
  PathQuadrature q(s.gamma.plus, s.quad);
  for (int m = 0; m < 2 * g; ++m) {
    const cd gx = q.integrate(dx_form(s, m)).value;
    for (int i = 0; i < g; ++i) {
      const KraResult k = verify_kra(s, surface, m, i);
      const cd gz = q.integrate(dz_form(s, i)).value;
      out.cut_corrected(m, i) += 2.0 * c_sign(m, g) * k.cut_term - 2.0 * kTwoPiI * gx * gz;
    }
  }
  out.cut_corrected_residual = (out.surface.values - out.cut_corrected).cwiseAbs().maxCoeff();
  return out;
}

namespace {

json reduction_json(const Reduction& r, const PeriodLattice* lattice) {
  json pairs = json::array();
  if (lattice)
    for (auto [k, l] : lattice->pairs) pairs.push_back({k + 1, l + 1});
  json real = json::array();
  for (double v : r.real_coefficients) real.push_back(to_json_number(v));
  json ints = json::array();
  for (int v : r.coefficients) ints.push_back(v);
  return {{"generator_pairs", pairs},
          {"real_coefficients", real},
          {"coefficients", ints},
          {"residual", to_json_number(r.residual)},
          {"remainder", to_json_matrix(r.remainder)}};
}

void periods_suite(Session& session, SuiteReport& r) {
  const RunConfig& c = session.config();
  const RegulatorSetup& s = session.setup();
  const PeriodCheck pc = period_check(s.curve, c.quad);
  const int g = s.genus();

  double integrality = 0;
  json dlog = json::array();
  const Form dh = as_form(dh_over_h(s.curve));
  for (const LiftedPath& loop : s.loops.loops) {
    const cd v = line_integral(dh, loop, s.quad).value;
    const cd n = v / kTwoPiI;
    integrality = std::max(integrality, std::abs(n - std::round(n.real())));
    dlog.push_back(to_json_complex(v));
  }
  Eigen::MatrixXi expected = Eigen::MatrixXi::Zero(2 * g, 2 * g);
  for (int k = 0; k < g; ++k) {
    expected(k, g + k) = 1;
    expected(g + k, k) = -1;
  }

  json roots = json::array();
  for (cd e : s.curve.roots()) roots.push_back(to_json_complex(e));
  json loops = json::array();
  for (std::size_t k = 0; k < s.loops.loops.size(); ++k)
    loops.push_back({{"label", s.loops.labels[k]}, {"path", to_json(s.loops.loops[k])}});
  r.data = {{"genus", g},
            {"roots", roots},
            {"log_h_p", to_json_complex(s.log_h_p)},
            {"loops", loops},
            {"intersection_matrix", to_json_matrix(s.loops.intersections)},
            {"N", to_json_matrix(s.basis.N)},
            {"Z", to_json_matrix(s.basis.Z)},
            {"P", to_json_matrix(s.basis.P)},
            {"raw_periods", to_json_matrix(s.basis.raw_periods)},
            {"period_error_estimate", to_json_number(s.basis.period_error.maxCoeff())},
            {"condition", to_json_number(s.basis.condition)},
            {"orders", pc.orders},
            {"Z_order_change", to_json_number(pc.order_change)},
            {"dlog_h_periods", dlog}};
  r.checks = {{"symmetry", pc.symmetry, c.tolerances.period},
              {"min_eig_im_Z", pc.min_eig, c.tolerances.min_eig, true},
              {"a_periods", pc.a_period_deviation, c.tolerances.period},
              {"intersection_matrix",
               static_cast<double>((s.loops.intersections - expected).cwiseAbs().maxCoeff()), 0.5},
              {"dlog_h_integrality", integrality, c.tolerances.integrality}};
}

void iterated_suite(Session& session, SuiteReport& r) {
  const RunConfig& c = session.config();
  const IteratedLaws L = iterated_laws(session.setup(), c.seed, c.instances);
  r.data = {{"seed", c.seed}, {"instances", L.instances}};
  const double tol = c.tolerances.iterated;
  r.checks = {{"composition", L.composition, tol}, {"shuffle", L.shuffle, tol},
              {"df_first", L.df_first, tol},       {"df_last", L.df_last, tol},
              {"path_times_inverse", L.inverse, tol}, {"exact_form", L.exact, tol}};
}

void regulator_suite(Session& session, SuiteReport& r) {
  const RunConfig& c = session.config();
  const RegulatorSetup& s = session.setup();
  const SurfaceResult& surf = session.surface();
  const RegulatorComparison cmp = compare_regulators(s, surf);
  const DiskCheck disk = disk_identity(s);
  const TwoTorsionResult tt = two_torsion_check(s);
  const PeriodLattice lattice = lattice_basis(s.basis);

  const Eigen::MatrixXcd area_expected = s.basis.Z.transpose() - s.basis.Z.conjugate();
  const double area = (surf.area - area_expected).cwiseAbs().maxCoeff();
  const double sheets = (surf.sheet_plus - surf.sheet_minus).cwiseAbs().maxCoeff();
  const int max_coeff = cmp.reduction.coefficients.size() ? cmp.reduction.coefficients.cwiseAbs().maxCoeff() : 0;

  json single = json::array();
  for (double v : tt.single_coefficients) single.push_back(to_json_number(v));
  json doubled = json::array();
  for (int v : tt.doubled_coefficients) doubled.push_back(v);
  json sigma = json::array();
  for (cd v : tt.sigma) sigma.push_back(to_json_complex(v));

  r.data = {
      {"log_h_p", to_json_complex(s.log_h_p)},
      {"reg_paths", to_json_matrix(cmp.paths.values)},
      {"reg_surface", to_json_matrix(cmp.surface.values)},
      {"surface_integral", {{"value", to_json_matrix(surf.value)},
                            {"area", to_json_matrix(surf.area)},
                            {"area_residual", to_json_number(area)},
                            {"sheet_difference", to_json_number(sheets)},
                            {"error_estimate", to_json_number(surf.error)},
                            {"tail_bound", to_json_number(surf.tail_bound)},
                            {"nodes", surf.nodes}}},
      {"linear_consistency", {{"paths", to_json_number(cmp.consistency_paths)},
                              {"surface", to_json_number(cmp.consistency_surface)}}},
      {"reduction", reduction_json(cmp.reduction, &lattice)},
      {"primitive", {{"paths_on_polarization", to_json_complex(cmp.primitive.paths_on_polarization)},
                     {"surface_on_polarization", to_json_complex(cmp.primitive.surface_on_polarization)},
                     {"difference", to_json_matrix(cmp.primitive.difference)},
                     {"reduction", reduction_json(cmp.primitive.reduction, nullptr)}}},
      {"cut_corrected", {{"value", to_json_matrix(cmp.cut_corrected)},
                         {"residual_vs_surface", to_json_number(cmp.cut_corrected_residual)}}},
      {"disk", {{"plus", to_json_matrix(disk.disk[0])},
                {"minus", to_json_matrix(disk.disk[1])},
                {"paths_plus", to_json_matrix(disk.rhs[0])},
                {"paths_minus", to_json_matrix(disk.rhs[1])},
                {"error_estimate", to_json_number(disk.error)}}},
      {"two_torsion", {{"sigma", sigma},
                       {"doubled_coefficients", doubled},
                       {"single_coefficients", single}}},
  };
  const double tol = c.tolerances.regulator;
  r.checks = {{"disk_identity", disk.residual, c.tolerances.disk},
              {"surface_area_vs_periods", area, tol},
              {"linear_consistency_paths", cmp.consistency_paths, tol},
              {"linear_consistency_surface", cmp.consistency_surface, tol},
              {"surface_minus_paths_mod_lattice", cmp.reduction.residual, tol},
              {"lattice_coefficients_small", static_cast<double>(max_coeff), 4.5},
              {"two_torsion_doubled", tt.doubled_residual, c.tolerances.torsion},
              {"two_torsion_single_off_lattice", tt.single_residual, c.tolerances.torsion_single, true}};
}

void kra_suite(Session& session, SuiteReport& r) {
  const RunConfig& c = session.config();
  const RegulatorSetup& s = session.setup();
  const SurfaceResult& surf = session.surface();
  const int g = s.genus();
  json cases = json::array();
  double worst = 0, worst_corrected = 0;
  for (int l = 0; l < 2 * g; ++l)
    for (int i = 0; i < g; ++i) {
      const KraResult k = verify_kra(s, surf, l, i);
      worst = std::max(worst, k.residual);
      worst_corrected = std::max(worst_corrected, k.corrected_residual);
      cases.push_back({{"l", l + 1},
                       {"i", i + 1},
                       {"lhs", to_json_complex(k.lhs)},
                       {"rhs", to_json_complex(k.rhs)},
                       {"residual", to_json_number(k.residual)},
                       {"cut_crossings", k.crossings},
                       {"cut_term", to_json_complex(k.cut_term)},
                       {"cut_corrected_residual", to_json_number(k.corrected_residual)}});
    }
  r.data = {{"cases", cases},
            {"max_cut_corrected_residual", to_json_number(worst_corrected)},
            {"surface_error_estimate", to_json_number(surf.error)},
            {"surface_tail_bound", to_json_number(surf.tail_bound)}};
  r.checks = {{"kra_residual", worst, c.tolerances.kra}};
}

void monreg2_suite(Session& session, SuiteReport& r) {
  const RunConfig& c = session.config();
  const RegulatorSetup& s = session.setup();
  const LiftedPath d = separating_loop(s.curve, {0, 1, 2});
  const Monreg2Result m = verify_monreg2(s, d);
  r.data = {{"subset", {0, 1, 2}},
            {"lhs", to_json_matrix(m.lhs)},
            {"rhs", to_json_matrix(m.rhs)},
            {"null_homology", to_json_number(m.null_homology)}};
  r.checks = {{"monreg2_residual", m.residual, c.tolerances.monreg2}};
}

void johnson_suite(const RunConfig& c, SuiteReport& r) {
  std::vector<std::pair<int, int>> cases = {{2, 1}, {3, 1}, {3, 2}};
  const std::pair<int, int> requested{c.genus, c.g1};
  if (std::find(cases.begin(), cases.end(), requested) == cases.end()) cases.insert(cases.begin(), requested);
  json reports = json::array();
  double tau_bad = 0, lie_bad = 0, not_prop = 0;
  for (auto [g, g1] : cases) {
    const MonodromyReport m = monodromy_report(g, g1);
    tau_bad += !m.tau3_matches_bracket;
    lie_bad += !m.lie_matches_tau;
    not_prop += !m.proportional;
    json j = to_json(m);
    if (std::pair{g, g1} == requested) r.data["requested"] = j;
    reports.push_back(std::move(j));
  }
  r.data["cases"] = reports;
  r.checks = {{"tau3J_mismatches", tau_bad, 0.5},
              {"lie_vs_tensor_mismatches", lie_bad, 0.5},
              {"phi_star_not_proportional", not_prop, 0.5}};
}

}  // namespace

SuiteReport run_suite(const std::string& name, Session& session) {
  SuiteReport r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (name == "periods") periods_suite(session, r);
    else if (name == "iterated-props") iterated_suite(session, r);
    else if (name == "regulator") regulator_suite(session, r);
    else if (name == "kra") kra_suite(session, r);
    else if (name == "monreg2") monreg2_suite(session, r);
    else if (name == "johnson") johnson_suite(session.config(), r);
    else throw Error(ErrorCode::ConfigParse, "unknown suite " + name);
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

nlohmann::json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", to_json_number(c.value)},
                      {"tolerance", to_json_number(c.tolerance)},
                      {"comparison", c.at_least ? ">=" : "<"},
                      {"pass", c.pass()}});
  json j = r.data;
  j["checks"] = checks;
  j["pass"] = r.pass();
  j["seconds"] = to_json_number(r.seconds);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

nlohmann::json run(const RunConfig& config, bool& pass) {
  const std::vector<std::string> suites = expand_suites(config.suites);
  Session session(config);
  json out = {{"schema", 1}, {"config", to_json(config)}, {"seed", config.seed}};
  json results = json::object();
  pass = true;
  for (const std::string& name : suites) {
    const SuiteReport r = run_suite(name, session);
    pass = pass && r.pass();
    results[name] = to_json(r);
  }
  out["suites"] = results;
  out["pass"] = pass;
  return out;
}

}  // namespace hyperreg
