#pragma once

#include <hyperreg/error.hpp>

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace hyperreg {

using cd = std::complex<double>;

struct Tolerances {
  double clearance = 1e-6;   // geometric distance to branch points
  double residual = 1e-10;   // |y^2 - f(x)|, relative to max(1, |f(x)|)
};

struct CurvePoint {
  cd x;
  cd y;
  bool at_infinity = false;
};

/// y^2 = f(x) with f squarefree of degree 2g+1 or 2g+2, three marked
/// Weierstrass points q1, q2, p and h = lambda (x - e_q1) / (x - e_q2).
///
/// Weierstrass points are indexed 0..2g+1: the finite roots of f sorted by
/// (real, imag), followed by the point at infinity when deg f is odd.
class HyperellipticCurve {
 public:
  int genus() const { return genus_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// Ascending coefficients c0 + c1 x + ... .
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  const std::vector<cd>& roots() const { return roots_; }
  bool infinity_is_branch() const { return degree() % 2 == 1; }
  int weierstrass_count() const { return 2 * genus_ + 2; }
  bool is_infinite_index(int index) const;
  /// x-coordinate of a finite Weierstrass point.
  cd branch_x(int index) const;

  int q1_index() const { return q1_; }
  int q2_index() const { return q2_; }
  int p_index() const { return p_; }
  cd q1() const { return roots_[q1_]; }
  cd q2() const { return roots_[q2_]; }
  cd p() const { return roots_[p_]; }
  cd lambda() const { return lambda_; }
  const Tolerances& tolerances() const { return tol_; }

  /// f via the product over roots; accurate near the branch points.
  cd f(cd x) const;
  cd f_prime(cd x) const;
  double distance_to_branch(cd x) const;
  /// Minimum distance from the gamma arc to the branch points other than q1, q2.
  double arc_clearance() const { return arc_clearance_; }

  /// Position on h^{-1}([0, inf]) with h(x) = tau / (1 - tau).
  cd arc_x(double tau) const;

 private:
  friend HyperellipticCurve make_curve(const std::vector<cd>&, int, int, int, cd, Tolerances);

  Eigen::VectorXcd coeffs_;
  std::vector<cd> roots_;
  cd leading_;
  int genus_ = 0;
  int q1_ = 0, q2_ = 0, p_ = 0;
  cd lambda_;
  Tolerances tol_;
  double arc_clearance_ = 0;
};

/// Validating constructor. Throws NotSquarefree, BadIndex, IndicesCollide,
/// ArcHitsBranchPoint.
HyperellipticCurve make_curve(const std::vector<cd>& f_coeffs, int q1_index, int q2_index,
                              int p_index, cd lambda, Tolerances tol = {});

/// Roots of an ascending-coefficient polynomial, Newton-polished.
std::vector<cd> polynomial_roots(const Eigen::VectorXcd& coeffs);

/// h at a point of the curve; nullopt stands for infinity.
std::optional<cd> h_eval(const HyperellipticCurve& curve, const CurvePoint& point);
/// h as a function of x alone (h factors through the quotient).
std::optional<cd> h_of_x(const HyperellipticCurve& curve, cd x);

CurvePoint involution(const CurvePoint& point);

struct YSample {
  double t;
  cd x;
  cd y;
};

/// Analytic continuation of y = sqrt(f) along x(t), t in [0, 1].
///
/// The path may start or end exactly at a finite branch point. When it starts
/// at one, y_start must be 0 and the first non-zero sample is the square root
/// with positive projection on sheet_hint.
std::vector<YSample> continue_y(const HyperellipticCurve& curve,
                                const std::function<cd(double)>& x_of_t, cd y_start,
                                cd sheet_hint = 1.0);

/// The sqrt(f(x)) candidate with positive projection on reference.
cd nearest_root(const HyperellipticCurve& curve, cd x, cd reference);

}  // namespace hyperreg
