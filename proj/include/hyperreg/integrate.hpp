#pragma once

#include <hyperreg/forms.hpp>
#include <hyperreg/paths.hpp>

#include <vector>

namespace hyperreg {

struct QuadOptions {
  int order = 20;         // Gauss points per panel
  int check_order = 30;   // second rule for the error estimate
  double rho = 0.5;       // panel length <= rho * distance to nearest singularity
  double max_panel = 0.5; // absolute cap on panel length in the x-plane
  double tolerance = 1e-7;  // NoConvergence when the estimate exceeds tolerance * (1 + |value|)
};

struct QuadResult {
  cd value = 0;
  double error = 0;
  int nodes = 0;
};

struct QuadNode {
  double t;   // segment parameter
  int seg;
  cd x, y;
  cd dx;      // dx / dxi including the panel map
  double w;   // Gauss weight on [-1, 1]
};

/// Panel-wise Gauss nodes along a lifted path. Panels shrink towards
/// singular points; panels ending at a branch point use t = t0 + L s^2.
struct Discretization {
  int order = 0;
  std::vector<QuadNode> nodes;  // panel after panel, each `order` long
  int panels() const { return order ? static_cast<int>(nodes.size()) / order : 0; }
};

Discretization discretize(const LiftedPath& path, int order, const std::vector<cd>& singular,
                          const QuadOptions& opts);

/// Line and iterated integrals along one lifted path, reusing its panels.
class PathQuadrature {
 public:
  explicit PathQuadrature(const LiftedPath& path, QuadOptions opts = {}, std::vector<cd> extra_singular = {});

  const LiftedPath& path() const { return path_; }
  QuadResult integrate(const Form& w) const;
  /// Chen iterated integral of w1 ... wl (w1 innermost / earliest).
  QuadResult iterated(const std::vector<Form>& forms) const;

 private:
  cd run(const Discretization& d, const std::vector<Form>& forms) const;

  LiftedPath path_;
  QuadOptions opts_;
  std::vector<cd> singular_;
  Discretization lo_, hi_;
};

QuadResult line_integral(const Form& w, const LiftedPath& path, const QuadOptions& opts = {});
QuadResult iterated_integral(const std::vector<Form>& forms, const LiftedPath& path, const QuadOptions& opts = {});

struct DiskOptions {
  int order = 12;
  int check_order = 18;
  int levels = 12;       // geometric grading levels towards each end
  double ratio = 0.15;
};

/// Integral of phi ^ psi over the disk F(t, s) = AJ(gamma(u)) - AJ(gamma(1 - t)),
/// u = 1 - t(1 - s) / (1 - s(1 - t)), gamma one of the halves. Returns a
/// 2g x g matrix indexed (m, i) for phi = dx_m, psi = dz_i.
struct DiskResult {
  Eigen::MatrixXcd value;
  double error = 0;
  int nodes = 0;
};
DiskResult disk_integral(const LiftedPath& gamma_half, const NormalizedBasis& basis,
                         const std::vector<HarmonicForm>& phis, const DiskOptions& opts = {});

struct SurfaceOptions {
  int order = 16;
  int check_order = 24;
  double s_extent = 38;     // |log |h|| cut-off beyond the outermost branch image
  double s_panel = 1.0;
  double theta_panel = 0.39269908169872414;  // pi / 8
};

/// T(j, i) = integral over C - gamma of log(h) conj(dz_j) ^ dz_i, with the
/// branch arg h in (0, 2 pi). Computed in w = h(x) = exp(s + i theta).
struct SurfaceResult {
  Eigen::MatrixXcd value;        // both sheets
  Eigen::MatrixXcd sheet_plus;   // y = +sqrt(f)
  Eigen::MatrixXcd sheet_minus;
  Eigen::MatrixXcd area;         // same without log(h): integral over C of conj(dz_j) ^ dz_i
  double error = 0;
  double tail_bound = 0;
  int nodes = 0;
};
SurfaceResult surface_integral_log(const HyperellipticCurve& curve, const NormalizedBasis& basis,
                                   const SurfaceOptions& opts = {});
/// Contraction with phi (antiholomorphic part) and psi (holomorphic part).
cd surface_pairing(const SurfaceResult& r, const HarmonicForm& phi, const HarmonicForm& psi);

}  // namespace hyperreg
