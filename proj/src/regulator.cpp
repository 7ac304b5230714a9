#include <hyperreg/regulator.hpp>

#include <cmath>
#include <numbers>

namespace hyperreg {

namespace {

constexpr double kPi = std::numbers::pi;
const cd I(0, 1);
const cd kTwoPiI(0, 2 * kPi);

std::vector<Form> dz_forms(const RegulatorSetup& s) {
  std::vector<Form> out;
  for (int i = 0; i < s.genus(); ++i) out.push_back(as_form(holomorphic(s.basis, i), s.basis));
  return out;
}

std::vector<Form> dx_forms(const RegulatorSetup& s) {
  std::vector<Form> out;
  for (const HarmonicForm& w : s.duals) out.push_back(as_form(w, s.basis));
  return out;
}

}  // namespace

int sigma_index(int m, int g) { return m < g ? m + g : m - g; }
int c_sign(int m, int g) { return m < g ? 1 : -1; }

RegulatorSetup make_setup(const HyperellipticCurve& curve, const QuadOptions& quad) {
  LoopSystem loops = symplectic_basis(curve);
  NormalizedBasis basis = normalize(curve, loops, quad);
  std::vector<HarmonicForm> duals = harmonic_duals(basis);
  GammaHalves gamma = gamma_halves(curve);
  cd hp = *h_of_x(curve, curve.p());
  double arg = std::arg(hp);
  if (arg <= 0) arg += 2 * kPi;
  return RegulatorSetup{curve, std::move(loops), std::move(basis), std::move(duals), std::move(gamma), quad,
                        cd(std::log(std::abs(hp)), arg)};
}

RegFunctional reg_paths(const RegulatorSetup& s) {
  const int g = s.genus();
  Form dlog = as_form(dh_over_h(s.curve));
  std::vector<Form> dz = dz_forms(s);
  Eigen::MatrixXcd depth2(2 * g, g);
  double err = 0;
  for (int l = 0; l < 2 * g; ++l) {
    PathQuadrature q(s.loops.loops[l], s.quad, dlog.poles);
    for (int i = 0; i < g; ++i) {
      QuadResult r = q.iterated({dlog, dz[i]});
      depth2(l, i) = r.value;
      err = std::max(err, r.error);
    }
  }
  RegFunctional f{Eigen::MatrixXcd(2 * g, g), "path-formula", s.log_h_p, 0};
  for (int m = 0; m < 2 * g; ++m) {
    int l = sigma_index(m, g);
    for (int i = 0; i < g; ++i)
      f.values(m, i) = 2.0 * double(c_sign(m, g)) * (depth2(l, i) + s.log_h_p * s.basis.P(l, i));
  }
  f.error = 2 * err;
  return f;
}

RegFunctional reg_surface(const RegulatorSetup& s, const SurfaceResult& surface) {
  const int g = s.genus();
  std::vector<Form> dz = dz_forms(s), dx = dx_forms(s);
  Eigen::MatrixXcd chen = Eigen::MatrixXcd::Zero(2 * g, g);
  double err = 0;
  for (const LiftedPath* half : {&s.gamma.plus, &s.gamma.minus}) {
    PathQuadrature q(*half, s.quad);
    for (int m = 0; m < 2 * g; ++m)
      for (int i = 0; i < g; ++i) {
        QuadResult a = q.iterated({dx[m], dz[i]});
        QuadResult b = q.iterated({dz[i], dx[m]});
        chen(m, i) += a.value - b.value;
        err = std::max(err, a.error + b.error);
      }
  }
  RegFunctional f{Eigen::MatrixXcd(2 * g, g), "surface-formula", s.log_h_p, 0};
  for (int m = 0; m < 2 * g; ++m)
    for (int i = 0; i < g; ++i)
      f.values(m, i) = 2.0 * surface_pairing(surface, s.duals[m], holomorphic(s.basis, i)) + kTwoPiI * chen(m, i);
  f.error = 2 * surface.error + 2 * kPi * 2 * err;
  return f;
}

double linear_consistency(const Eigen::MatrixXcd& F, const NormalizedBasis& basis) {
  const int g = basis.genus;
  double worst = 0;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      cd v = 0;
      for (int m = 0; m < 2 * g; ++m) v += basis.P(m, j) * F(m, i) + basis.P(m, i) * F(m, j);
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

Eigen::MatrixXcd lattice_element(const NormalizedBasis& basis, int k, int l) {
  const int g = basis.genus;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2 * g, g);
  for (int i = 0; i < g; ++i) {
    G(k, i) += kTwoPiI * basis.P(l, i);
    G(l, i) -= kTwoPiI * basis.P(k, i);
  }
  return G;
}

namespace {

Eigen::VectorXd stack(const Eigen::MatrixXcd& F) {
  Eigen::VectorXd v(2 * F.size());
  Eigen::Index n = 0;
  for (Eigen::Index m = 0; m < F.rows(); ++m)
    for (Eigen::Index i = 0; i < F.cols(); ++i) {
      v[n++] = F(m, i).real();
      v[n++] = F(m, i).imag();
    }
  return v;
}

PeriodLattice make_lattice(std::vector<std::pair<int, int>> pairs, std::vector<Eigen::MatrixXcd> gens) {
  PeriodLattice L{std::move(pairs), std::move(gens), {}};
  L.stacked.resize(2 * L.generators.front().size(), L.generators.size());
  for (std::size_t c = 0; c < L.generators.size(); ++c) L.stacked.col(c) = stack(L.generators[c]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(L.stacked);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(L.generators.size()))
    throw Error(ErrorCode::RankDeficient, "period lattice generators are dependent");
  return L;
}

}  // namespace

PeriodLattice lattice_basis(const NormalizedBasis& basis) {
  const int g = basis.genus;
  std::vector<std::pair<int, int>> pairs;
  std::vector<Eigen::MatrixXcd> gens;
  for (int k = 0; k < 2 * g; ++k)
    for (int l = k + 1; l < 2 * g; ++l) {
      pairs.push_back({k, l});
      gens.push_back(lattice_element(basis, k, l));
    }
  return make_lattice(std::move(pairs), std::move(gens));
}

Reduction reduce_mod(const Eigen::MatrixXcd& f, const PeriodLattice& L) {
  Reduction r;
  Eigen::VectorXd b = stack(f);
  r.real_coefficients = L.stacked.colPivHouseholderQr().solve(b);
  r.coefficients = r.real_coefficients.array().round().cast<int>();
  r.remainder = f;
  for (std::size_t c = 0; c < L.generators.size(); ++c)
    r.remainder -= double(r.coefficients[c]) * L.generators[c];
  r.residual = r.remainder.cwiseAbs().maxCoeff();
  return r;
}

KraResult verify_kra(const RegulatorSetup& s, const SurfaceResult& surface, int l, int i) {
  const int g = s.genus();
  if (l < 0 || l >= 2 * g || i < 0 || i >= g) throw Error(ErrorCode::BadIndex, "kra index out of range");
  const int a = sigma_index(l, g);
  const double c = c_sign(l, g);
  const LiftedPath& alpha = s.loops.loops[a];
  Form dlog = as_form(dh_over_h(s.curve));
  Form dz = as_form(holomorphic(s.basis, i), s.basis);
  Form dx = as_form(s.duals[l], s.basis);

  KraResult k;
  k.l = l;
  k.i = i;
  cd depth2 = PathQuadrature(alpha, s.quad, dlog.poles).iterated({dlog, dz}).value;
  k.lhs = c * (depth2 + s.log_h_p * s.basis.P(a, i));
  cd chen = 0;
  for (const LiftedPath* half : {&s.gamma.plus, &s.gamma.minus})
    chen += PathQuadrature(*half, s.quad).iterated({dx, dz}).value;
  k.rhs = surface_pairing(surface, s.duals[l], holomorphic(s.basis, i)) + kTwoPiI * chen;
  k.residual = std::abs(k.lhs - k.rhs);

  // Where alpha crosses the cut the continued logarithm and the cut one
  // differ by 2 pi i; the sign follows the direction in which Im h grows.
  cd a_b = s.curve.q1() - s.curve.q2();
  for (const LiftedPath* half : {&s.gamma.plus, &s.gamma.minus}) {
    for (const Crossing& cr : crossings(alpha, *half)) {
      if (!cr.same_sheet) continue;
      ++k.crossings;
      cd hprime = s.curve.lambda() * a_b / ((cr.x - s.curve.q2()) * (cr.x - s.curve.q2()));
      double eps = (hprime * alpha.dx(cr.seg_a, cr.t_a)).imag() > 0 ? 1.0 : -1.0;
      cd gamma_tail = line_integral(dz, half->suffix(cr.seg_b, cr.t_b), s.quad).value;
      cd alpha_tail = line_integral(dz, alpha.suffix(cr.seg_a, cr.t_a), s.quad).value;
      k.cut_term += kTwoPiI * eps * (gamma_tail - alpha_tail);
    }
  }
  k.corrected_residual = std::abs(k.rhs - k.lhs - c * k.cut_term);
  return k;
}

Monreg2Result verify_monreg2(const RegulatorSetup& s, const LiftedPath& d) {
  const int g = s.genus();
  std::vector<Form> dz = dz_forms(s), dx = dx_forms(s);
  Monreg2Result r;
  {
    PathQuadrature q(d, s.quad);
    for (const auto* set : {&dz, &dx})
      for (const Form& w : *set) r.null_homology = std::max(r.null_homology, std::abs(q.integrate(w).value));
  }
  if (r.null_homology > 1e-8) throw Error(ErrorCode::DNotNullHomologous, "periods of d do not vanish");

  // gamma_d = gamma with d inserted where d meets the arc, on both sheets.
  std::vector<Crossing> cr = crossings(s.gamma.plus, d);
  const Crossing* hit = nullptr;
  for (const Crossing& c : cr)
    if (c.same_sheet) hit = &c;
  if (!hit) throw Error(ErrorCode::InvalidArgument, "separating loop must meet gamma+");
  double tau = hit->t_a;
  if (std::abs(d.start_x() - hit->x) > 1e-9 * (1 + std::abs(hit->x)))
    throw Error(ErrorCode::InvalidArgument, "separating loop must start on the gamma arc");

  Eigen::MatrixXcd chen_d = Eigen::MatrixXcd::Zero(2 * g, g), chen = chen_d;
  for (int sign = 0; sign < 2; ++sign) {
    const LiftedPath& half = sign == 0 ? s.gamma.plus : s.gamma.minus;
    LiftedPath dd = sign == 0 ? d : d.involuted();
    LiftedPath gd = half.prefix(0, tau).then(dd).then(half.suffix(0, tau));
    PathQuadrature q(half, s.quad), qd(gd, s.quad);
    for (int m = 0; m < 2 * g; ++m)
      for (int i = 0; i < g; ++i) {
        chen(m, i) += q.iterated({dx[m], dz[i]}).value - q.iterated({dz[i], dx[m]}).value;
        chen_d(m, i) += qd.iterated({dx[m], dz[i]}).value - qd.iterated({dz[i], dx[m]}).value;
      }
  }
  r.lhs = chen_d - chen;
  r.rhs.resize(2 * g, g);
  PathQuadrature q(d, s.quad);
  for (int m = 0; m < 2 * g; ++m)
    for (int i = 0; i < g; ++i) r.rhs(m, i) = 4.0 * q.iterated({dx[m], dz[i]}).value;
  r.residual = (r.lhs - r.rhs).cwiseAbs().maxCoeff();
  return r;
}

TwoTorsionResult two_torsion_check(const RegulatorSetup& s) {
  const int g = s.genus();
  TwoTorsionResult r;
  r.sigma.resize(g);
  PathQuadrature q(s.gamma.plus, s.quad);
  for (int i = 0; i < g; ++i) r.sigma[i] = q.integrate(as_form(holomorphic(s.basis, i), s.basis)).value;

  // Lattice of the Jacobian: columns of [I | Z], as a real 2g x 2g system.
  Eigen::MatrixXcd Pi(g, 2 * g);
  Pi << Eigen::MatrixXcd::Identity(g, g), s.basis.Z;
  Eigen::MatrixXd R(2 * g, 2 * g);
  R << Pi.real(), Pi.imag();
  auto solve = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXd b(2 * g);
    b << v.real(), v.imag();
    return Eigen::VectorXd(R.fullPivLu().solve(b));
  };
  auto residual = [&](const Eigen::VectorXcd& v, const Eigen::VectorXd& n) {
    return (v - Pi * n.cast<cd>()).cwiseAbs().maxCoeff();
  };
  Eigen::VectorXcd twice = 2.0 * r.sigma;
  Eigen::VectorXd n2 = solve(twice).array().round();
  r.doubled_coefficients = n2.cast<int>();
  r.doubled_residual = residual(twice, n2);
  r.single_coefficients = solve(r.sigma);
  r.single_residual = residual(r.sigma, r.single_coefficients.array().round().matrix());
  return r;
}

PrimitiveReport primitive_projection(const RegulatorSetup& s, const RegFunctional& paths,
                                     const RegFunctional& surface) {
  const int g = s.genus();
  const auto& P = s.basis.P;
  PrimitiveReport rep;
  rep.integral_over_C.resize(2 * g, g);
  for (int m = 0; m < 2 * g; ++m)
    for (int i = 0; i < g; ++i) rep.integral_over_C(m, i) = double(c_sign(m, g)) * P(sigma_index(m, g), i);

  // Polarization sum_k dx_k ^ dx_{g+k} as a combination of dx_m ^ dz_i, using
  // dx_m ^ dz_i = sum_n P(n, i) dx_m ^ dx_n.
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < 2 * g; ++a)
    for (int b = a + 1; b < 2 * g; ++b) slots.push_back({a, b});
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(slots.size(), 2 * g * g);
  Eigen::VectorXcd target = Eigen::VectorXcd::Zero(slots.size());
  for (std::size_t r = 0; r < slots.size(); ++r) {
    auto [a, b] = slots[r];
    if (b == a + g && a < g) target[r] = 1;
    for (int m = 0; m < 2 * g; ++m)
      for (int i = 0; i < g; ++i) {
        int col = m * g + i;
        if (m == a) E(r, col) += P(b, i);
        if (m == b) E(r, col) -= P(a, i);
      }
  }
  Eigen::VectorXcd M = E.completeOrthogonalDecomposition().solve(target);
  auto on_polarization = [&](const Eigen::MatrixXcd& F) {
    cd v = 0;
    for (int m = 0; m < 2 * g; ++m)
      for (int i = 0; i < g; ++i) v += M[m * g + i] * F(m, i);
    return v;
  };
  const cd cOmega = on_polarization(rep.integral_over_C);  // equals g
  auto project = [&](const Eigen::MatrixXcd& F) -> Eigen::MatrixXcd {
    return F - (on_polarization(F) / cOmega) * rep.integral_over_C;
  };
  rep.paths_on_polarization = on_polarization(paths.values);
  rep.surface_on_polarization = on_polarization(surface.values);
  rep.difference = project(surface.values - paths.values);

  PeriodLattice full = lattice_basis(s.basis);
  std::vector<Eigen::MatrixXcd> gens;
  std::vector<std::pair<int, int>> pairs;
  // The projected generators span a lattice of rank C(2g, 2) - 1.
  for (std::size_t c = 0; c < full.generators.size(); ++c) {
    auto [k, l] = full.pairs[c];
    if (k == g - 1 && l == 2 * g - 1) continue;
    pairs.push_back(full.pairs[c]);
    gens.push_back(project(full.generators[c]));
  }
  rep.reduction = reduce_mod(rep.difference, make_lattice(std::move(pairs), std::move(gens)));
  return rep;
}

}  // namespace hyperreg
