#pragma once

#include <hyperreg/curve.hpp>

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace hyperreg {

struct LoopSystem;
struct QuadOptions;

/// Ascending coefficients.
using Poly = Eigen::VectorXcd;

cd poly_eval(const Poly& p, cd x);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& p);
Poly poly_constant(cd c);
Poly poly_from_roots(const std::vector<cd>& roots, cd leading = 1.0);

struct Rational {
  Poly num = poly_constant(0);
  Poly den = poly_constant(1);

  cd operator()(cd x) const { return poly_eval(num, x) / poly_eval(den, x); }
  Rational derivative() const;
  std::vector<cd> poles() const;
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);

/// a(x) dx + b(x) dx / y.
struct RationalForm {
  Rational a;
  Rational b;

  std::vector<cd> poles() const;
};

/// A 1-form on the curve given pointwise: the pullback along x(t) is
/// A(x, y) x'(t) + B(x, y) conj(x'(t)).
struct Form {
  std::function<std::pair<cd, cd>(cd x, cd y)> coeffs;
  std::vector<cd> poles;
};

Form as_form(const RationalForm& w);
/// fn(x, y) * w for a function fn on the curve.
Form times(std::function<cd(cd, cd)> fn, const Form& w, std::vector<cd> extra_poles = {});
Form operator+(const Form& a, const Form& b);
Form scale(cd c, const Form& w);

/// x^k dx / y, k = 0..g-1.
std::vector<RationalForm> holomorphic_basis(const HyperellipticCurve& curve);

struct NormalizedBasis {
  int genus = 0;
  Eigen::MatrixXcd N;          // dz_i = sum_k N(i, k) x^k dx / y
  Eigen::MatrixXcd Z;          // Z(i, j) = int over alpha_{g+i} of dz_j
  Eigen::MatrixXcd P;          // P(l, i) = int over alpha_l of dz_i, 2g x g
  Eigen::MatrixXcd raw_periods;  // int over alpha_l of x^k dx / y
  Eigen::MatrixXd period_error;  // quadrature error estimate of raw_periods
  double condition = 0;

  /// sum_k N(i, k) x^k, so dz_i = G_i(x) dx / y.
  Eigen::VectorXcd numerators(cd x) const;
};

NormalizedBasis normalize(const HyperellipticCurve& curve, const LoopSystem& loops, const QuadOptions& opts);

/// hol . dz + antihol . conj(dz)
struct HarmonicForm {
  Eigen::VectorXcd hol;
  Eigen::VectorXcd antihol;
};

std::vector<HarmonicForm> harmonic_duals(const NormalizedBasis& basis);
HarmonicForm holomorphic(const NormalizedBasis& basis, int i);
Form as_form(const HarmonicForm& w, const NormalizedBasis& basis);
/// Integral of a harmonic form over a loop from its periods.
cd period_of(const HarmonicForm& w, const NormalizedBasis& basis, int loop);

/// d log h = (1/(x - e_q1) - 1/(x - e_q2)) dx.
RationalForm dh_over_h(const HyperellipticCurve& curve);

}  // namespace hyperreg
