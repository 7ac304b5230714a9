#include <hyperreg/integrate.hpp>
#include <hyperreg/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperreg {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
const cd I(0, 1);

struct Singular {
  double s, theta;
};

std::vector<double> refine(std::vector<double> breaks, double width) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               breaks.end());
  std::vector<double> out{breaks.front()};
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    double lo = breaks[k - 1], hi = breaks[k];
    int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / width - 1e-9)));
    for (int p = 1; p <= pieces; ++p) out.push_back(lo + (hi - lo) * p / pieces);
  }
  return out;
}

class SurfaceIntegrand {
 public:
  SurfaceIntegrand(const HyperellipticCurve& c, const NormalizedBasis& b) : curve(c), basis(b) {}

  // Adds weight * integrand at (s, theta) to the accumulators.
  void add(double s, double theta, double weight, Eigen::MatrixXcd& plus, Eigen::MatrixXcd& minus,
           Eigen::MatrixXcd& area) const {
    cd w = std::exp(cd(s, theta));
    cd a = curve.q1(), b = curve.q2(), lam = curve.lambda();
    cd x = (b * w - lam * a) / (w - lam);
    cd dxdw = lam * (a - b) / ((w - lam) * (w - lam));
    // f(x) factor by factor; x - e is formed from w directly so that it stays
    // accurate as x approaches q1 or q2.
    cd fx = curve.coeffs()[curve.coeffs().size() - 1];
    for (cd e : curve.roots()) fx *= ((b - e) * w + lam * (e - a)) / (w - lam);
    cd y = std::sqrt(fx);
    Eigen::VectorXcd G = basis.numerators(x);
    // conj(dz_j) ^ dz_i = conj(G_j / y) (G_i / y) 2i dA_x; dA_x = |dx/dw|^2 e^{2s} ds dtheta
    double jac = std::norm(dxdw) * std::exp(2 * s) * weight;
    cd logw(s, theta);
    Eigen::VectorXcd up = G / y, um = G / (-y);
    Eigen::MatrixXcd kp = up.conjugate() * up.transpose() * (2.0 * I * jac);
    Eigen::MatrixXcd km = um.conjugate() * um.transpose() * (2.0 * I * jac);
    plus += logw * kp;
    minus += logw * km;
    area += kp + km;
  }

  const HyperellipticCurve& curve;
  const NormalizedBasis& basis;
};

struct Accum {
  Eigen::MatrixXcd plus, minus, area;
  int nodes = 0;
};

void integrate_cell(const SurfaceIntegrand& f, double s0, double s1, double t0, double t1,
                    const std::vector<Singular>& sing, const GaussLegendre<double>& gl, Accum& acc, int depth = 0) {
  std::vector<std::pair<int, int>> corners;  // (0|1, 0|1) for s and theta side
  for (const Singular& p : sing) {
    for (int cs = 0; cs < 2; ++cs)
      for (int ct = 0; ct < 2; ++ct)
        if (std::abs(p.s - (cs ? s1 : s0)) < 1e-12 && std::abs(p.theta - (ct ? t1 : t0)) < 1e-12)
          corners.push_back({cs, ct});
  }
  const int n = gl.size();
  if (corners.size() > 1 && depth < 4) {
    double sm = 0.5 * (s0 + s1), tm = 0.5 * (t0 + t1);
    integrate_cell(f, s0, sm, t0, tm, sing, gl, acc, depth + 1);
    integrate_cell(f, sm, s1, t0, tm, sing, gl, acc, depth + 1);
    integrate_cell(f, s0, sm, tm, t1, sing, gl, acc, depth + 1);
    integrate_cell(f, sm, s1, tm, t1, sing, gl, acc, depth + 1);
    return;
  }
  if (corners.empty()) {
    for (int i = 0; i < n; ++i) {
      double s = s0 + 0.5 * (s1 - s0) * (gl.nodes[i] + 1);
      for (int j = 0; j < n; ++j) {
        double th = t0 + 0.5 * (t1 - t0) * (gl.nodes[j] + 1);
        double w = 0.25 * (s1 - s0) * (t1 - t0) * gl.weights[i] * gl.weights[j];
        f.add(s, th, w, acc.plus, acc.minus, acc.area);
      }
    }
    acc.nodes += n * n;
    return;
  }
  // Duffy: corner c at the origin of the unit square, edges along s and theta.
  auto [cs, ct] = corners.front();
  double sc = cs ? s1 : s0, tc = ct ? t1 : t0;
  double ds = cs ? s0 - s1 : s1 - s0, dt = ct ? t0 - t1 : t1 - t0;
  double area = std::abs(ds * dt);
  for (int tri = 0; tri < 2; ++tri) {
    for (int i = 0; i < n; ++i) {
      double a = 0.5 * (gl.nodes[i] + 1);
      for (int j = 0; j < n; ++j) {
        double b = 0.5 * (gl.nodes[j] + 1);
        double xi = tri == 0 ? a : a * b;
        double eta = tri == 0 ? a * b : a;
        double w = 0.25 * gl.weights[i] * gl.weights[j] * a * area;
        f.add(sc + xi * ds, tc + eta * dt, w, acc.plus, acc.minus, acc.area);
      }
    }
  }
  acc.nodes += 2 * n * n;
}

Accum integrate_all(const SurfaceIntegrand& f, const std::vector<double>& sb, const std::vector<double>& tb,
                    const std::vector<Singular>& sing, int order, int g) {
  const GaussLegendre<double>& gl = gauss_legendre(order);
  Accum acc{Eigen::MatrixXcd::Zero(g, g), Eigen::MatrixXcd::Zero(g, g), Eigen::MatrixXcd::Zero(g, g)};
  for (std::size_t i = 0; i + 1 < sb.size(); ++i)
    for (std::size_t j = 0; j + 1 < tb.size(); ++j)
      integrate_cell(f, sb[i], sb[i + 1], tb[j], tb[j + 1], sing, gl, acc);
  return acc;
}

}  // namespace

SurfaceResult surface_integral_log(const HyperellipticCurve& curve, const NormalizedBasis& basis,
                                   const SurfaceOptions& opts) {
  const int g = basis.genus;
  std::vector<Singular> sing;
  auto push = [&](cd w) {
    double th = std::arg(w);
    if (th < 0) th += kTwoPi;
    sing.push_back({std::log(std::abs(w)), th});
  };
  for (int r = 0; r < static_cast<int>(curve.roots().size()); ++r) {
    if (r == curve.q1_index() || r == curve.q2_index()) continue;
    push(*h_of_x(curve, curve.roots()[r]));
  }
  if (curve.infinity_is_branch()) push(curve.lambda());

  double smin = 0, smax = 0;
  for (const Singular& p : sing) {
    smin = std::min(smin, p.s);
    smax = std::max(smax, p.s);
  }
  std::vector<double> sb{smin - opts.s_extent, smax + opts.s_extent}, tb{0.0, kTwoPi};
  for (const Singular& p : sing) {
    sb.push_back(p.s);
    tb.push_back(p.theta);
  }
  sb = refine(sb, opts.s_panel);
  tb = refine(tb, opts.theta_panel);

  SurfaceIntegrand f(curve, basis);
  Accum lo = integrate_all(f, sb, tb, sing, opts.order, g);
  Accum hi = integrate_all(f, sb, tb, sing, opts.check_order, g);

  SurfaceResult r;
  r.sheet_plus = hi.plus;
  r.sheet_minus = hi.minus;
  r.value = hi.plus + hi.minus;
  r.area = hi.area;
  r.error = (r.value - (lo.plus + lo.minus)).cwiseAbs().maxCoeff();
  r.nodes = hi.nodes;

  // The integrand decays like exp(-|s|) past the outermost cells; bound the
  // tails by the boundary magnitude integrated over theta.
  double edge = 0;
  for (double s : {sb.front(), sb.back()}) {
    for (int k = 0; k < 64; ++k) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(g, g), m = p, a = p;
      f.add(s, kTwoPi * (k + 0.5) / 64, 1.0, p, m, a);
      edge = std::max(edge, (p + m).cwiseAbs().maxCoeff());
    }
  }
  r.tail_bound = 2 * kTwoPi * edge;
  return r;
}

cd surface_pairing(const SurfaceResult& r, const HarmonicForm& phi, const HarmonicForm& psi) {
  // phi ^ psi = sum_{j,i} antihol_j(phi) hol_i(psi) conj(dz_j) ^ dz_i (+ hol ^ hol terms, which vanish)
  return (phi.antihol.transpose() * r.value * psi.hol)(0);
}

}  // namespace hyperreg
