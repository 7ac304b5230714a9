#pragma once

#include <hyperreg/integrate.hpp>

#include <string>
#include <utility>
#include <vector>

namespace hyperreg {

/// Everything the regulator formulas share: loops, periods, dual basis and
/// the two halves of gamma.
struct RegulatorSetup {
  HyperellipticCurve curve;
  LoopSystem loops;
  NormalizedBasis basis;
  std::vector<HarmonicForm> duals;  // dx_l
  GammaHalves gamma;
  QuadOptions quad;
  cd log_h_p;  // arg in (0, 2 pi)

  int genus() const { return curve.genus(); }
};

RegulatorSetup make_setup(const HyperellipticCurve& curve, const QuadOptions& quad = {});

/// sigma(m) and c(m) for 0-based m: m < g pairs with g + m (c = +1), m >= g
/// with m - g (c = -1).
int sigma_index(int m, int g);
int c_sign(int m, int g);

/// Values on dx_m ^ dz_i, m in [0, 2g), i in [0, g).
struct RegFunctional {
  Eigen::MatrixXcd values;
  std::string provenance;
  cd log_h_p;
  double error = 0;
};

RegFunctional reg_paths(const RegulatorSetup& setup);
RegFunctional reg_surface(const RegulatorSetup& setup, const SurfaceResult& surface);

/// sum_m P(m, j) F(m, i) + P(m, i) F(m, j) = 0 for all i, j; returns the largest violation.
double linear_consistency(const Eigen::MatrixXcd& F, const NormalizedBasis& basis);

struct PeriodLattice {
  std::vector<std::pair<int, int>> pairs;        // (k, l), k < l
  std::vector<Eigen::MatrixXcd> generators;      // 2 pi i (A_k ^ A_l)^dual on dx_m ^ dz_i
  Eigen::MatrixXd stacked;                       // real/imag parts as columns
};

PeriodLattice lattice_basis(const NormalizedBasis& basis);
Eigen::MatrixXcd lattice_element(const NormalizedBasis& basis, int k, int l);

struct Reduction {
  Eigen::VectorXd real_coefficients;
  Eigen::VectorXi coefficients;
  double residual = 0;
  Eigen::MatrixXcd remainder;
};

Reduction reduce_mod(const Eigen::MatrixXcd& f, const PeriodLattice& lattice);

struct KraResult {
  int l = 0, i = 0;
  cd lhs, rhs;
  double residual = 0;
  int crossings = 0;
  /// The contribution of the cut: 2 pi i sum_c eps_c (int_{gamma[c, q2]} dz_i - int_{alpha[c, end]} dz_i).
  cd cut_term;
  double corrected_residual = 0;  // |rhs - lhs - c(l) cut_term|
};

KraResult verify_kra(const RegulatorSetup& setup, const SurfaceResult& surface, int l, int i);

struct Monreg2Result {
  Eigen::MatrixXcd lhs, rhs;
  double residual = 0;
  double null_homology = 0;  // max over forms of |int_d w|
};

Monreg2Result verify_monreg2(const RegulatorSetup& setup, const LiftedPath& d);

struct TwoTorsionResult {
  Eigen::VectorXcd sigma;            // int over gamma+ of dz
  Eigen::VectorXi doubled_coefficients;
  double doubled_residual = 0;
  Eigen::VectorXd single_coefficients;  // real solve of sigma against [I | Z]
  double single_residual = 0;
};

TwoTorsionResult two_torsion_check(const RegulatorSetup& setup);

/// Agreement in the primitive quotient: both functionals are shifted by a
/// multiple of the integral over C so that they vanish on the polarization.
struct PrimitiveReport {
  Eigen::MatrixXcd integral_over_C;  // int_C dx_m ^ dz_i
  cd paths_on_polarization, surface_on_polarization;
  Eigen::MatrixXcd difference;       // projected reg_surface - reg_paths
  Reduction reduction;               // against the projected lattice
};

PrimitiveReport primitive_projection(const RegulatorSetup& setup, const RegFunctional& paths,
                                     const RegFunctional& surface);

}  // namespace hyperreg
