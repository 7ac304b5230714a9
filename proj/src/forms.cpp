#include <hyperreg/forms.hpp>
#include <hyperreg/integrate.hpp>

#include <cmath>

namespace hyperreg {

cd poly_eval(const Poly& p, cd x) {
  cd acc = 0;
  for (Eigen::Index k = p.size() - 1; k >= 0; --k) acc = acc * x + p[k];
  return acc;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r = Poly::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = Poly::Zero(std::max(a.size(), b.size()));
  r.head(a.size()) += a;
  r.head(b.size()) += b;
  return r;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return poly_constant(0);
  Poly r(p.size() - 1);
  for (Eigen::Index k = 1; k < p.size(); ++k) r[k - 1] = double(k) * p[k];
  return r;
}

Poly poly_constant(cd c) {
  Poly r(1);
  r[0] = c;
  return r;
}

Poly poly_from_roots(const std::vector<cd>& roots, cd leading) {
  Poly r = poly_constant(leading);
  for (cd z : roots) {
    Poly lin(2);
    lin << -z, 1.0;
    r = poly_mul(r, lin);
  }
  return r;
}

Rational Rational::derivative() const {
  Poly n = poly_add(poly_mul(poly_derivative(num), den), -poly_mul(num, poly_derivative(den)));
  return {n, poly_mul(den, den)};
}

std::vector<cd> Rational::poles() const {
  std::vector<cd> out;
  for (cd r : polynomial_roots(den))
    if (std::abs(poly_eval(num, r)) > 1e-12 * (1 + std::abs(r))) out.push_back(r);
  return out;
}

Rational operator+(const Rational& a, const Rational& b) {
  return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)), poly_mul(a.den, b.den)};
}

Rational operator*(const Rational& a, const Rational& b) {
  return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}

std::vector<cd> RationalForm::poles() const {
  std::vector<cd> p = a.poles();
  for (cd z : b.poles()) p.push_back(z);
  return p;
}

Form as_form(const RationalForm& w) {
  return {[w](cd x, cd y) -> std::pair<cd, cd> {
            cd v = w.a(x);
            cd bn = poly_eval(w.b.num, x);
            if (bn != cd(0)) v += bn / (poly_eval(w.b.den, x) * y);
            return {v, 0.0};
          },
          w.poles()};
}

Form times(std::function<cd(cd, cd)> fn, const Form& w, std::vector<cd> extra_poles) {
  std::vector<cd> poles = w.poles;
  poles.insert(poles.end(), extra_poles.begin(), extra_poles.end());
  return {[fn, c = w.coeffs](cd x, cd y) -> std::pair<cd, cd> {
            auto [a, b] = c(x, y);
            cd f = fn(x, y);
            return {f * a, f * b};
          },
          poles};
}

Form operator+(const Form& u, const Form& v) {
  std::vector<cd> poles = u.poles;
  poles.insert(poles.end(), v.poles.begin(), v.poles.end());
  return {[a = u.coeffs, b = v.coeffs](cd x, cd y) -> std::pair<cd, cd> {
            auto [a1, b1] = a(x, y);
            auto [a2, b2] = b(x, y);
            return {a1 + a2, b1 + b2};
          },
          poles};
}

Form scale(cd c, const Form& w) {
  return times([c](cd, cd) { return c; }, w);
}

std::vector<RationalForm> holomorphic_basis(const HyperellipticCurve& curve) {
  std::vector<RationalForm> out;
  for (int k = 0; k < curve.genus(); ++k) {
    Poly mono = Poly::Zero(k + 1);
    mono[k] = 1;
    out.push_back(RationalForm{Rational{}, Rational{mono, poly_constant(1)}});
  }
  return out;
}

Eigen::VectorXcd NormalizedBasis::numerators(cd x) const {
  Eigen::VectorXcd mono(genus);
  cd p = 1;
  for (int k = 0; k < genus; ++k) {
    mono[k] = p;
    p *= x;
  }
  return N * mono;
}

NormalizedBasis normalize(const HyperellipticCurve& curve, const LoopSystem& loops, const QuadOptions& opts) {
  const int g = curve.genus();
  std::vector<RationalForm> basis = holomorphic_basis(curve);
  std::vector<Form> forms;
  for (const auto& w : basis) forms.push_back(as_form(w));

  NormalizedBasis nb;
  nb.genus = g;
  nb.raw_periods.resize(2 * g, g);
  nb.period_error.resize(2 * g, g);
  for (int l = 0; l < 2 * g; ++l) {
    PathQuadrature q(loops.loops[l], opts);
    for (int k = 0; k < g; ++k) {
      QuadResult r = q.integrate(forms[k]);
      nb.raw_periods(l, k) = r.value;
      nb.period_error(l, k) = r.error;
    }
  }
  Eigen::MatrixXcd A = nb.raw_periods.topRows(g);  // A(l, k) = int_{alpha_l} omega_k
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  nb.condition = sv[g - 1] > 0 ? sv[0] / sv[g - 1] : INFINITY;
  if (!(nb.condition < 1e10)) throw Error(ErrorCode::SingularPeriodMatrix, "A-period matrix is ill-conditioned");
  // dz_i = sum_k N(i, k) omega_k with sum_k A(l, k) N(i, k) = delta_li.
  nb.N = A.transpose().inverse();
  nb.P = nb.raw_periods * nb.N.transpose();
  nb.Z = nb.P.bottomRows(g);
  return nb;
}

std::vector<HarmonicForm> harmonic_duals(const NormalizedBasis& basis) {
  const int g = basis.genus;
  Eigen::MatrixXcd M(2 * g, 2 * g);
  M << basis.P, basis.P.conjugate();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
  if (!lu.isInvertible() || lu.rcond() < 1e-12) throw Error(ErrorCode::SingularSystem, "period system is singular");
  Eigen::MatrixXcd C = lu.inverse();  // column l gives dx_l
  std::vector<HarmonicForm> out;
  for (int l = 0; l < 2 * g; ++l) out.push_back({C.col(l).head(g), C.col(l).tail(g)});
  return out;
}

HarmonicForm holomorphic(const NormalizedBasis& basis, int i) {
  HarmonicForm w{Eigen::VectorXcd::Zero(basis.genus), Eigen::VectorXcd::Zero(basis.genus)};
  w.hol[i] = 1;
  return w;
}

Form as_form(const HarmonicForm& w, const NormalizedBasis& basis) {
  return {[w, basis](cd x, cd y) -> std::pair<cd, cd> {
            Eigen::VectorXcd G = basis.numerators(x) / y;
            return {(w.hol.transpose() * G)(0), (w.antihol.transpose() * G.conjugate())(0)};
          },
          {}};
}

cd period_of(const HarmonicForm& w, const NormalizedBasis& basis, int loop) {
  Eigen::VectorXcd row = basis.P.row(loop).transpose();
  return (w.hol.transpose() * row)(0) + (w.antihol.transpose() * row.conjugate())(0);
}

RationalForm dh_over_h(const HyperellipticCurve& curve) {
  cd a = curve.q1(), b = curve.q2();
  return RationalForm{Rational{poly_constant(a - b), poly_from_roots({a, b})}, Rational{}};
}

}  // namespace hyperreg
