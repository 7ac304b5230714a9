#include <doctest.h>

#include <hyperreg/integrate.hpp>

#include <random>

using namespace hyperreg;

namespace {

struct Fixture {
  HyperellipticCurve C = make_curve({0.0, 24.0, -50.0, 35.0, -10.0, 1.0}, 0, 4, 2, cd(0, -1));
  LoopSystem L = symplectic_basis(C);
  NormalizedBasis B = normalize(C, L, QuadOptions{});
  std::vector<HarmonicForm> dx = harmonic_duals(B);
  GammaHalves G = gamma_halves(C);
};

Form dz(const Fixture& F, int i) { return as_form(holomorphic(F.B, i), F.B); }

// y(end) along an open path, by continuing y ourselves.
cd end_y(const LiftedPath& p) { return p.end_y(); }

}  // namespace

TEST_CASE("degenerate path integrates to zero") {
  Fixture F;
  const cd x0(2.5, 1.0);
  const LiftedPath p(F.C, XPath{{LineSeg{x0, x0}}}, nearest_root(F.C, x0, 1.0));
  CHECK(std::abs(line_integral(dz(F, 0), p).value) == 0.0);
}

TEST_CASE("fundamental theorem for exact forms") {
  Fixture F;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const LiftedPath path = F.L.loops[2].prefix(2, 0.6);  // an open path from p
  for (int k = 0; k < 3; ++k) {
    // rational R = (a + b x) / (x - c)
    const cd a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), 4 + u(rng));
    Rational dR;
    dR.num = Poly(1);
    dR.num << -b * c - a;
    dR.den = poly_from_roots({c, c});
    const cd v = line_integral(as_form(RationalForm{dR, Rational{}}), path).value;
    auto R = [&](cd x) { return (a + b * x) / (x - c); };
    CHECK(std::abs(v - (R(path.end_x()) - R(path.start_x()))) < 1e-8);
  }
  // R = y S with S polynomial: dR = (S' f + S f' / 2) dx / y
  const Poly S = (Poly(3) << cd(0.5, 0.1), cd(-1, 0.2), cd(0.3, 0)).finished();
  const Poly f = F.C.coeffs();
  const Poly num = poly_add(poly_mul(poly_derivative(S), f), poly_mul(S, 0.5 * poly_derivative(f)));
  const Form w = as_form(RationalForm{Rational{}, Rational{num, poly_constant(1)}});
  const LiftedPath open = F.L.loops[1].prefix(1, 0.4);
  const cd v = line_integral(w, open).value;
  const cd expect = end_y(open) * poly_eval(S, open.end_x()) - open.y_seed() * poly_eval(S, open.start_x());
  CHECK(std::abs(v - expect) < 1e-8);
}

TEST_CASE("iterated integrals: depth one, shuffle, composition, depth three") {
  Fixture F;
  const LiftedPath& loop = F.L.loops[3];
  const LiftedPath a = loop.prefix(1, 0.35), b = loop.suffix(1, 0.35);
  const Form w1 = dz(F, 0), w2 = as_form(F.dx[1], F.B);
  PathQuadrature qa(a), qb(b), qab(a.then(b));
  CHECK(std::abs(qa.iterated({w1}).value - line_integral(w1, a).value) < 1e-10);
  const cd a1 = qa.integrate(w1).value, a2 = qa.integrate(w2).value, b2 = qb.integrate(w2).value;
  CHECK(std::abs(qa.iterated({w1, w2}).value + qa.iterated({w2, w1}).value - a1 * a2) < 1e-8);
  CHECK(std::abs(qab.iterated({w1, w2}).value - qa.iterated({w1, w2}).value - qb.iterated({w1, w2}).value - a1 * b2) <
        1e-8);
  CHECK(std::abs(qa.iterated({w1, w1, w1}).value - a1 * a1 * a1 / 6.0) < 1e-8);
  // three-letter shuffle: w1 w1 w2 + w1 w2 w1 + w2 w1 w1 = int w1 w1 * int w2
  const cd s = qa.iterated({w1, w1, w2}).value + qa.iterated({w1, w2, w1}).value + qa.iterated({w2, w1, w1}).value;
  CHECK(std::abs(s - qa.iterated({w1, w1}).value * a2) < 1e-8);
  CHECK(std::abs(PathQuadrature(a.then(a.reversed())).iterated({w1, w2}).value) < 1e-8);
}

TEST_CASE("lemma identities with d of a rational function") {
  Fixture F;
  const LiftedPath a = F.L.loops[0].prefix(1, 0.5);
  const Form w = dz(F, 1);
  const Rational R{(Poly(2) << 1.0, cd(0, 1)).finished(), poly_from_roots({cd(1, 5)})};
  const Form dR = as_form(RationalForm{R.derivative(), Rational{}});
  const Form Rw = times([R](cd x, cd) { return R(x); }, w, R.poles());
  PathQuadrature q(a, QuadOptions{}, R.poles());
  const cd iw = q.integrate(w).value, iRw = q.integrate(Rw).value;
  CHECK(std::abs(q.iterated({dR, w}).value - (iRw - R(a.start_x()) * iw)) < 1e-8);
  CHECK(std::abs(q.iterated({w, dR}).value - (R(a.end_x()) * iw - iRw)) < 1e-8);
}

TEST_CASE("error estimate bounds the change under a finer rule") {
  Fixture F;
  const Form w = as_form(F.dx[2], F.B);
  QuadOptions o;
  const QuadResult r = line_integral(w, F.G.plus, o);
  o.order = 40;
  o.check_order = 60;
  const QuadResult r2 = line_integral(w, F.G.plus, o);
  CHECK(std::abs(r.value - r2.value) <= std::max(r.error, 1e-13));
}

TEST_CASE("pole on path") {
  Fixture F;
  const LiftedPath a = F.L.loops[0];
  const cd x = a.x(0, 0.5);
  const Form w = as_form(RationalForm{Rational{poly_constant(1.0), poly_from_roots({x})}, Rational{}});
  CHECK_THROWS_WITH_AS(line_integral(w, a), doctest::Contains("PoleOnPath"), Error);
}

TEST_CASE("disk integral") {
  Fixture F;
  // phi = psi holomorphic: phi ^ psi vanishes pointwise
  std::vector<HarmonicForm> hol = {holomorphic(F.B, 0), holomorphic(F.B, 1)};
  const DiskResult z = disk_integral(F.G.plus, F.B, hol);
  CHECK(std::abs(z.value(0, 0)) < 1e-8);
  CHECK(std::abs(z.value(1, 1)) < 1e-8);
  CHECK(std::abs(z.value(0, 1) + z.value(1, 0)) < 1e-8);
  // the lemma, on one pair per sign
  for (int sign = 0; sign < 2; ++sign) {
    const LiftedPath& a = sign ? F.G.minus : F.G.plus;
    const LiftedPath& b = sign ? F.G.plus : F.G.minus;
    const DiskResult d = disk_integral(a, F.B, F.dx);
    const Form x0 = as_form(F.dx[0], F.B), z1 = dz(F, 1);
    const cd rhs = PathQuadrature(a).iterated({x0, z1}).value - PathQuadrature(b).iterated({z1, x0}).value;
    CHECK(std::abs(d.value(0, 1) - rhs) < 1e-5);
  }
}

TEST_CASE("surface integral") {
  Fixture F;
  const SurfaceResult s = surface_integral_log(F.C, F.B);
  // no conj(dz) ^ dz part, no contribution
  CHECK(surface_pairing(s, holomorphic(F.B, 0), holomorphic(F.B, 1)) == cd(0));
  CHECK((s.sheet_plus - s.sheet_minus).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((s.value - s.sheet_plus - s.sheet_minus).cwiseAbs().maxCoeff() < 1e-12);
  // area: int_C conj(dz_j) ^ dz_i from the bilinear relations
  const Eigen::MatrixXcd expect = F.B.Z.transpose() - F.B.Z.conjugate();
  CHECK((s.area - expect).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(s.error < 1e-4);
  CHECK(s.tail_bound < 1e-6);
}
