#include <hyperreg/curve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyperreg {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::IndicesCollide: return "IndicesCollide";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::ArcHitsBranchPoint: return "ArcHitsBranchPoint";
    case ErrorCode::PathTooCloseToBranchPoint: return "PathTooCloseToBranchPoint";
    case ErrorCode::SeedMismatch: return "SeedMismatch";
    case ErrorCode::CannotAvoidMarkedPoints: return "CannotAvoidMarkedPoints";
    case ErrorCode::SubsetNotSeparable: return "SubsetNotSeparable";
    case ErrorCode::EvenSubset: return "EvenSubset";
    case ErrorCode::DegenerateLoop: return "DegenerateLoop";
    case ErrorCode::NonTransverse: return "NonTransverse";
    case ErrorCode::SingularPeriodMatrix: return "SingularPeriodMatrix";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DNotNullHomologous: return "DNotNullHomologous";
    case ErrorCode::BadSplit: return "BadSplit";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

cd horner(const Eigen::VectorXcd& c, cd x) {
  cd acc = 0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * x + c[k];
  return acc;
}

cd horner_derivative(const Eigen::VectorXcd& c, cd x) {
  cd acc = 0;
  for (Eigen::Index k = c.size() - 1; k >= 1; --k) acc = acc * x + double(k) * c[k];
  return acc;
}

}  // namespace

std::vector<cd> polynomial_roots(const Eigen::VectorXcd& coeffs) {
  Eigen::Index n = coeffs.size() - 1;
  while (n > 0 && coeffs[n] == cd(0)) --n;
  if (n <= 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i] / coeffs[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  Eigen::VectorXcd c = coeffs.head(n + 1);
  std::vector<cd> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (cd& r : roots) {
    for (int it = 0; it < 8; ++it) {
      cd d = horner_derivative(c, r);
      if (d == cd(0)) break;
      cd step = horner(c, r) / d;
      r -= step;
      if (std::abs(step) <= 1e-17 * (1 + std::abs(r))) break;
    }
  }
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

bool HyperellipticCurve::is_infinite_index(int index) const {
  return infinity_is_branch() && index == weierstrass_count() - 1;
}

cd HyperellipticCurve::branch_x(int index) const {
  if (index < 0 || index >= static_cast<int>(roots_.size()))
    throw Error(ErrorCode::BadIndex, "no finite Weierstrass point with index " + std::to_string(index));
  return roots_[index];
}

cd HyperellipticCurve::f(cd x) const {
  cd acc = leading_;
  for (cd r : roots_) acc *= (x - r);
  return acc;
}

cd HyperellipticCurve::f_prime(cd x) const { return horner_derivative(coeffs_, x); }

double HyperellipticCurve::distance_to_branch(cd x) const {
  double d = INFINITY;
  for (cd r : roots_) d = std::min(d, std::abs(x - r));
  return d;
}

cd HyperellipticCurve::arc_x(double tau) const {
  // h(x) = tau / (1 - tau) solved for x.
  cd a = q1(), b = q2();
  return ((b + lambda_ * a) * tau - lambda_ * a) / ((1.0 + lambda_) * tau - lambda_);
}

HyperellipticCurve make_curve(const std::vector<cd>& f_coeffs, int q1_index, int q2_index,
                              int p_index, cd lambda, Tolerances tol) {
  if (!(tol.clearance > 0) || !(tol.residual > 0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  std::size_t deg = f_coeffs.size();
  while (deg > 0 && f_coeffs[deg - 1] == cd(0)) --deg;
  if (deg < 4) throw Error(ErrorCode::InvalidArgument, "f must have degree at least 3");
  HyperellipticCurve c;
  c.coeffs_ = Eigen::Map<const Eigen::VectorXcd>(f_coeffs.data(), static_cast<Eigen::Index>(deg));
  c.leading_ = c.coeffs_[c.coeffs_.size() - 1];
  c.roots_ = polynomial_roots(c.coeffs_);
  c.genus_ = (c.degree() - 1) / 2;
  c.tol_ = tol;

  for (std::size_t i = 0; i < c.roots_.size(); ++i)
    for (std::size_t j = i + 1; j < c.roots_.size(); ++j)
      if (std::abs(c.roots_[i] - c.roots_[j]) <= tol.clearance)
        throw Error(ErrorCode::NotSquarefree, "roots closer than the clearance tolerance");

  int count = c.weierstrass_count();
  for (int idx : {q1_index, q2_index, p_index}) {
    if (idx < 0 || idx >= count) throw Error(ErrorCode::BadIndex, "Weierstrass index out of range");
    if (c.is_infinite_index(idx))
      throw Error(ErrorCode::BadIndex, "q1, q2 and p must be finite Weierstrass points");
  }
  if (q1_index == q2_index || q1_index == p_index || q2_index == p_index)
    throw Error(ErrorCode::IndicesCollide, "q1, q2, p must be distinct");
  if (lambda == cd(0)) throw Error(ErrorCode::InvalidArgument, "lambda must be non-zero");
  c.q1_ = q1_index;
  c.q2_ = q2_index;
  c.p_ = p_index;
  c.lambda_ = lambda;

  // When lambda is real positive the arc runs through x = infinity.
  if (std::abs(lambda.imag()) <= 1e-14 * std::abs(lambda) && lambda.real() > 0)
    throw Error(ErrorCode::ArcHitsBranchPoint, "gamma arc passes through infinity; change lambda");

  double clearance = INFINITY;
  const int samples = 1000;
  for (int k = 0; k <= samples; ++k) {
    cd x = c.arc_x(double(k) / samples);
    for (int r = 0; r < static_cast<int>(c.roots_.size()); ++r) {
      if (r == q1_index || r == q2_index) continue;
      clearance = std::min(clearance, std::abs(x - c.roots_[r]));
    }
  }
  c.arc_clearance_ = clearance;
  if (clearance <= tol.clearance) {
    std::ostringstream os;
    os << "gamma arc comes within " << clearance << " of a branch point; change lambda";
    throw Error(ErrorCode::ArcHitsBranchPoint, os.str());
  }
  return c;
}

std::optional<cd> h_of_x(const HyperellipticCurve& curve, cd x) {
  cd den = x - curve.q2();
  // a point given as the rounded root value still counts as q2
  if (std::abs(den) <= 64 * std::numeric_limits<double>::epsilon() * (1 + std::abs(curve.q2())))
    return std::nullopt;
  return curve.lambda() * (x - curve.q1()) / den;
}

std::optional<cd> h_eval(const HyperellipticCurve& curve, const CurvePoint& point) {
  if (point.at_infinity) return curve.lambda();
  return h_of_x(curve, point.x);
}

CurvePoint involution(const CurvePoint& point) { return {point.x, -point.y, point.at_infinity}; }

cd nearest_root(const HyperellipticCurve& curve, cd x, cd reference) {
  cd r = std::sqrt(curve.f(x));
  return (r * std::conj(reference)).real() >= 0 ? r : -r;
}

std::vector<YSample> continue_y(const HyperellipticCurve& curve,
                                const std::function<cd(double)>& x_of_t, cd y_start,
                                cd sheet_hint) {
  const Tolerances& tol = curve.tolerances();
  const auto& roots = curve.roots();
  cd x0 = x_of_t(0.0), x1 = x_of_t(1.0);
  const double scale = 1.0 + std::abs(x0);

  int start_branch = -1, end_branch = -1;
  for (int r = 0; r < static_cast<int>(roots.size()); ++r) {
    if (std::abs(x0 - roots[r]) <= 1e-12 * (1 + std::abs(roots[r]))) start_branch = r;
    if (std::abs(x1 - roots[r]) <= 1e-12 * (1 + std::abs(roots[r]))) end_branch = r;
  }

  cd f0 = curve.f(x0);
  if (std::abs(y_start * y_start - f0) > tol.residual * std::max(1.0, std::abs(f0)))
    throw Error(ErrorCode::SeedMismatch, "y_start does not lie over the path start");

  auto interior_distance = [&](cd x) {
    double d = INFINITY;
    for (int r = 0; r < static_cast<int>(roots.size()); ++r) {
      if (r == start_branch || r == end_branch) continue;
      d = std::min(d, std::abs(x - roots[r]));
    }
    return d;
  };
  auto step_limit = [&](cd x) {
    double d = interior_distance(x);
    if (start_branch >= 0) d = std::min(d, std::abs(x - roots[start_branch]));
    if (end_branch >= 0) d = std::min(d, std::abs(x - roots[end_branch]));
    return 0.5 * d;
  };

  std::vector<YSample> out;
  out.push_back({0.0, x0, start_branch >= 0 ? cd(0) : y_start});

  // Probe a constant path.
  bool constant = true;
  for (double t : {0.25, 0.5, 0.75, 1.0})
    if (std::abs(x_of_t(t) - x0) > 1e-15 * scale) constant = false;
  if (constant) {
    out.push_back({1.0, x0, out.front().y});
    return out;
  }

  double t = 0.0;
  cd x = x0, y = out.front().y;
  if (start_branch >= 0) {
    // Leave the branch point by a tiny step so that y becomes well defined.
    double t1 = 1e-6;
    for (int it = 0; it < 200; ++it) {
      double d = std::abs(x_of_t(t1) - x0);
      double target = 1e-9 * scale;
      if (d > 10 * target) t1 *= 0.5;
      else if (d < 0.1 * target && t1 < 0.5) t1 *= 2;
      else break;
    }
    t = t1;
    x = x_of_t(t);
    y = nearest_root(curve, x, sheet_hint == cd(0) ? cd(1) : sheet_hint);
    out.push_back({t, x, y});
  }

  double dt = std::min(0.01, std::max(t, 1e-6));
  const double end_snap = 1e-10 * (1 + (end_branch >= 0 ? std::abs(roots[end_branch]) : 0.0));
  while (t < 1.0) {
    if (end_branch >= 0 && std::abs(x - roots[end_branch]) <= end_snap) {
      out.push_back({1.0, x1, cd(0)});
      return out;
    }
    double limit = step_limit(x);
    dt = std::min(dt * 2, 0.05);
    for (int halvings = 0;; ++halvings) {
      if (halvings > 200)
        throw Error(ErrorCode::NoConvergence, "continue_y step control failed");
      double tn = std::min(1.0, t + dt);
      cd xn = x_of_t(tn);
      if (std::abs(xn - x) > limit) {
        dt *= 0.5;
        continue;
      }
      if (interior_distance(xn) <= tol.clearance)
        throw Error(ErrorCode::PathTooCloseToBranchPoint, "path approaches a branch point");
      if (tn == 1.0 && end_branch >= 0) {
        out.push_back({1.0, x1, cd(0)});
        return out;
      }
      cd r = std::sqrt(curve.f(xn));
      double dm = std::abs(r - y), dp = std::abs(r + y);
      cd yn = r;
      if (dp < dm) {
        std::swap(dm, dp);
        yn = -r;
      }
      if (!(dm < 0.5 * dp)) {
        dt *= 0.5;
        continue;
      }
      t = tn;
      x = xn;
      y = yn;
      out.push_back({t, x, y});
      break;
    }
  }
  return out;
}

}  // namespace hyperreg
