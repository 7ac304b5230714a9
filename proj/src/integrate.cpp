#include <hyperreg/integrate.hpp>
#include <hyperreg/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperreg {

namespace {

constexpr double kPi = std::numbers::pi;

bool near(cd a, cd b) { return std::abs(a - b) <= 1e-12 * (1 + std::abs(a)); }

bool is_branch(const HyperellipticCurve& curve, cd z) {
  for (cd r : curve.roots())
    if (near(r, z)) return true;
  return false;
}

struct Panel {
  double t0, t1;
  bool left_sub, right_sub;
};

}  // namespace

Discretization discretize(const LiftedPath& path, int order, const std::vector<cd>& singular,
                          const QuadOptions& opts) {
  const HyperellipticCurve& curve = path.curve();
  const GaussLegendre<double>& gl = gauss_legendre(order);
  const double clearance = curve.tolerances().clearance;
  Discretization d;
  d.order = order;

  for (int k = 0; k < path.segment_count(); ++k) {
    cd xs = path.x(k, 0.0), xe = path.x(k, 1.0);
    if (std::abs(xe - xs) == 0.0 && std::abs(path.dx(k, 0.5)) == 0.0) continue;  // constant segment
    bool left_sing = false, right_sing = false;
    for (cd s : singular) {
      bool branch = is_branch(curve, s);
      if (near(s, xs)) {
        if (!branch) throw Error(ErrorCode::PoleOnPath, "path starts at a pole of the form");
        left_sing = true;
      }
      if (near(s, xe)) {
        if (!branch) throw Error(ErrorCode::PoleOnPath, "path ends at a pole of the form");
        right_sing = true;
      }
    }

    std::vector<Panel> panels;
    std::vector<std::pair<double, double>> stack{{0.0, 1.0}};
    std::vector<int> depth{0};
    while (!stack.empty()) {
      auto [t0, t1] = stack.back();
      int dep = depth.back();
      stack.pop_back();
      depth.pop_back();
      cd pts[5];
      for (int i = 0; i < 5; ++i) pts[i] = path.x(k, t0 + (t1 - t0) * i / 4.0);
      double len = 0;
      for (int i = 0; i < 4; ++i) len += std::abs(pts[i + 1] - pts[i]);
      bool at_left = t0 == 0.0 && left_sing, at_right = t1 == 1.0 && right_sing;
      double dist = INFINITY;
      for (cd s : singular) {
        if ((at_left && near(s, xs)) || (at_right && near(s, xe))) continue;
        double ds = INFINITY;
        for (cd p : pts) ds = std::min(ds, std::abs(p - s));
        if (ds <= clearance) {
          if (is_branch(curve, s)) throw Error(ErrorCode::PathTooCloseToBranchPoint, "path passes through a branch point");
          throw Error(ErrorCode::PoleOnPath, "form has a pole on the path");
        }
        dist = std::min(dist, ds);
      }
      bool split = (at_left && at_right) || len > opts.rho * dist || len > opts.max_panel;
      if (split) {
        if (dep > 60) throw Error(ErrorCode::NoConvergence, "panel refinement did not terminate");
        double tm = 0.5 * (t0 + t1);
        // push right first so panels come out in order
        stack.push_back({tm, t1});
        depth.push_back(dep + 1);
        stack.push_back({t0, tm});
        depth.push_back(dep + 1);
      } else {
        panels.push_back({t0, t1, at_left, at_right});
      }
    }

    for (const Panel& p : panels) {
      double L = p.t1 - p.t0;
      for (int j = 0; j < order; ++j) {
        double xi = gl.nodes[j];
        double t, dt;
        if (p.left_sub) {
          double s = 0.5 * (xi + 1);
          t = p.t0 + L * s * s;
          dt = L * s;
        } else if (p.right_sub) {
          double s = 0.5 * (1 - xi);
          t = p.t1 - L * s * s;
          dt = L * s;
        } else {
          t = p.t0 + 0.5 * L * (xi + 1);
          dt = 0.5 * L;
        }
        d.nodes.push_back({t, k, path.x(k, t), path.y(k, t), path.dx(k, t) * dt, gl.weights[j]});
      }
    }
  }
  return d;
}

PathQuadrature::PathQuadrature(const LiftedPath& path, QuadOptions opts, std::vector<cd> extra_singular)
    : path_(path), opts_(opts), singular_(path.curve().roots()) {
  for (cd s : extra_singular) {
    bool known = false;
    for (cd t : singular_) known = known || near(s, t);
    if (!known) singular_.push_back(s);
  }
  lo_ = discretize(path_, opts_.order, singular_, opts_);
  hi_ = discretize(path_, opts_.check_order, singular_, opts_);
}

cd PathQuadrature::run(const Discretization& d, const std::vector<Form>& forms) const {
  const GaussLegendre<double>& gl = gauss_legendre(d.order);
  const int n = d.order;
  const std::size_t N = d.nodes.size();
  std::vector<cd> prev(N, cd(1)), vals(N), next(N);
  cd total = 0;
  for (std::size_t level = 0; level < forms.size(); ++level) {
    const Form& w = forms[level];
    for (std::size_t a = 0; a < N; ++a) {
      const QuadNode& q = d.nodes[a];
      auto [A, B] = w.coeffs(q.x, q.y);
      vals[a] = (A * q.dx + B * std::conj(q.dx)) * prev[a];
    }
    cd carry = 0;
    bool last = level + 1 == forms.size();
    for (std::size_t p = 0; p < N; p += n) {
      if (!last) {
        for (int i = 0; i < n; ++i) {
          cd acc = carry;
          for (int j = 0; j < n; ++j) acc += gl.cumulative(i, j) * vals[p + j];
          next[p + i] = acc;
        }
      }
      for (int j = 0; j < n; ++j) carry += gl.weights[j] * vals[p + j];
    }
    total = carry;
    std::swap(prev, next);
  }
  return total;
}

QuadResult PathQuadrature::iterated(const std::vector<Form>& forms) const {
  if (forms.empty() || forms.size() > 3) throw Error(ErrorCode::InvalidArgument, "iterated integrals have depth 1 to 3");
  std::vector<cd> extra;
  for (const Form& w : forms)
    for (cd s : w.poles) {
      bool known = false;
      for (cd t : singular_) known = known || near(s, t);
      if (!known) extra.push_back(s);
    }
  if (!extra.empty()) {
    std::vector<cd> all(singular_.begin(), singular_.end());
    all.insert(all.end(), extra.begin(), extra.end());
    return PathQuadrature(path_, opts_, all).iterated(forms);
  }
  QuadResult r;
  cd lo = run(lo_, forms);
  r.value = run(hi_, forms);
  r.error = std::abs(r.value - lo);
  r.nodes = static_cast<int>(hi_.nodes.size());
  if (!(r.error <= opts_.tolerance * (1 + std::abs(r.value))))
    throw Error(ErrorCode::NoConvergence, "quadrature error estimate " + std::to_string(r.error));
  return r;
}

QuadResult PathQuadrature::integrate(const Form& w) const { return iterated({w}); }

QuadResult line_integral(const Form& w, const LiftedPath& path, const QuadOptions& opts) {
  return PathQuadrature(path, opts, w.poles).integrate(w);
}

QuadResult iterated_integral(const std::vector<Form>& forms, const LiftedPath& path, const QuadOptions& opts) {
  std::vector<cd> poles;
  for (const Form& w : forms) poles.insert(poles.end(), w.poles.begin(), w.poles.end());
  return PathQuadrature(path, opts, poles).iterated(forms);
}

// ---------------------------------------------------------------------------
// Disk integral

namespace {

std::vector<double> graded_breaks(int levels, double ratio) {
  std::vector<double> b{0.0};
  for (int k = levels; k >= 1; --k) b.push_back(0.5 * std::pow(ratio, k));
  b.push_back(0.5);
  for (int k = 1; k <= levels; ++k) b.push_back(1.0 - 0.5 * std::pow(ratio, k));
  b.push_back(1.0);
  return b;
}

struct Axis {
  std::vector<double> v, w;  // nodes and weights on [0, 1]
};

Axis composite(const std::vector<double>& breaks, int order) {
  const GaussLegendre<double>& gl = gauss_legendre(order);
  Axis a;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double lo = breaks[p], hi = breaks[p + 1];
    for (int j = 0; j < order; ++j) {
      a.v.push_back(lo + 0.5 * (hi - lo) * (gl.nodes[j] + 1));
      a.w.push_back(0.5 * (hi - lo) * gl.weights[j]);
    }
  }
  return a;
}

// dz densities along gamma at tau.
Eigen::VectorXcd dz_density(const LiftedPath& gamma, const NormalizedBasis& basis, double tau) {
  cd x = gamma.x(0, tau), y = gamma.y(0, tau), dx = gamma.dx(0, tau);
  // Rounding can land tau on an endpoint; the weight there is negligible.
  if (y == cd(0)) return Eigen::VectorXcd::Zero(basis.genus);
  return basis.numerators(x) * (dx / y);
}

Eigen::MatrixXcd disk_once(const LiftedPath& gamma, const NormalizedBasis& basis,
                           const std::vector<HarmonicForm>& phis, const Axis& ax) {
  const int g = basis.genus;
  const int M = static_cast<int>(phis.size());
  Eigen::MatrixXcd hol(M, g), anti(M, g);
  for (int m = 0; m < M; ++m) {
    hol.row(m) = phis[m].hol.transpose();
    anti.row(m) = phis[m].antihol.transpose();
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(M, g);
  const std::size_t n = ax.v.size();
  for (std::size_t a = 0; a < n; ++a) {
    double hv = 0.5 * kPi * ax.v[a];
    double t = std::sin(hv) * std::sin(hv), omt = std::cos(hv) * std::cos(hv);
    double jt = 0.5 * kPi * std::sin(kPi * ax.v[a]) * ax.w[a];
    Eigen::VectorXcd Dt = dz_density(gamma, basis, omt);  // at 1 - t
    Eigen::VectorXcd Phi_t = hol * Dt + anti * Dt.conjugate();
    for (std::size_t b = 0; b < n; ++b) {
      double hw = 0.5 * kPi * ax.v[b];
      double s = std::sin(hw) * std::sin(hw), oms = std::cos(hw) * std::cos(hw);
      double js = 0.5 * kPi * std::sin(kPi * ax.v[b]) * ax.w[b];
      double den = oms + s * t;
      double u = (oms * omt + s * t) / den;
      double us = t * t / (den * den);
      Eigen::VectorXcd Du = dz_density(gamma, basis, u);
      Eigen::VectorXcd Phi_u = hol * Du + anti * Du.conjugate();
      double wgt = us * jt * js;
      acc += wgt * (Phi_t * Du.transpose() - Phi_u * Dt.transpose());
    }
  }
  return acc;
}

}  // namespace

DiskResult disk_integral(const LiftedPath& gamma_half, const NormalizedBasis& basis,
                         const std::vector<HarmonicForm>& phis, const DiskOptions& opts) {
  std::vector<double> breaks = graded_breaks(opts.levels, opts.ratio);
  Axis lo = composite(breaks, opts.order), hi = composite(breaks, opts.check_order);
  DiskResult r;
  Eigen::MatrixXcd vlo = disk_once(gamma_half, basis, phis, lo);
  r.value = disk_once(gamma_half, basis, phis, hi);
  r.error = (r.value - vlo).cwiseAbs().maxCoeff();
  r.nodes = static_cast<int>(hi.v.size() * hi.v.size());
  return r;
}

}  // namespace hyperreg
