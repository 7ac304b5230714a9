#include <doctest.h>

#include <hyperreg/regulator.hpp>

#include <numbers>

using namespace hyperreg;

namespace {

struct Fixture {
  HyperellipticCurve C = make_curve({0.0, 24.0, -50.0, 35.0, -10.0, 1.0}, 0, 4, 2, cd(0, -1));
  RegulatorSetup S = make_setup(C);
  SurfaceResult T = surface_integral_log(C, S.basis);
};

Fixture& fixture() {
  static Fixture F;
  return F;
}

}  // namespace

TEST_CASE("sigma and c") {
  CHECK(sigma_index(0, 2) == 2);
  CHECK(sigma_index(1, 2) == 3);
  CHECK(sigma_index(2, 2) == 0);
  CHECK(sigma_index(3, 2) == 1);
  CHECK(c_sign(0, 2) == 1);
  CHECK(c_sign(3, 2) == -1);
}

TEST_CASE("log h(p) uses arg in (0, 2 pi)") {
  auto& F = fixture();
  CHECK(std::abs(F.S.log_h_p - cd(0, std::numbers::pi / 2)) < 1e-14);
}

TEST_CASE("period lattice") {
  auto& F = fixture();
  const PeriodLattice L = lattice_basis(F.S.basis);
  CHECK(L.generators.size() == 6);
  // every lattice functional is linearly consistent
  for (const auto& G : L.generators) CHECK(linear_consistency(G, F.S.basis) < 1e-12);
  // round trip through reduce_mod
  const Eigen::MatrixXcd v = 2.0 * L.generators[0] - 3.0 * L.generators[4] + L.generators[5];
  const Reduction r = reduce_mod(v, L);
  CHECK(r.residual < 1e-10);
  CHECK(r.coefficients[0] == 2);
  CHECK(r.coefficients[4] == -3);
  CHECK(r.coefficients[5] == 1);
  CHECK(r.coefficients[1] == 0);
  const Reduction half = reduce_mod(0.5 * L.generators[1], L);
  CHECK(half.residual > 1);
}

TEST_CASE("surface formula is a functional on F1H2") {
  auto& F = fixture();
  const RegFunctional rs = reg_surface(F.S, F.T);
  CHECK(rs.provenance == "surface-formula");
  CHECK(linear_consistency(rs.values, F.S.basis) < 1e-8);
}

TEST_CASE("kra on a loop that stays off the cut") {
  auto& F = fixture();
  // l = 4 pairs with A_2, which does not meet gamma
  for (int i = 0; i < 2; ++i) {
    const KraResult k = verify_kra(F.S, F.T, 3, i);
    CHECK(k.crossings == 0);
    CHECK(k.residual < 1e-4);
  }
}

TEST_CASE("kra: the mismatch on crossing loops is the cut term") {
  auto& F = fixture();
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 2; ++i) {
      const KraResult k = verify_kra(F.S, F.T, l, i);
      CHECK(k.corrected_residual < 1e-8);
      if (k.crossings) CHECK(k.residual > 1e-2);
    }
}

TEST_CASE("monreg2 and the null-homology check") {
  auto& F = fixture();
  const LiftedPath d = separating_loop(F.C, {0, 1, 2});
  const Monreg2Result m = verify_monreg2(F.S, d);
  CHECK(m.null_homology < 1e-8);
  CHECK(m.residual < 1e-5);
  CHECK_THROWS_WITH_AS(verify_monreg2(F.S, F.S.loops.loops[0]), doctest::Contains("DNotNullHomologous"), Error);
}

TEST_CASE("sigma is two-torsion") {
  auto& F = fixture();
  const TwoTorsionResult t = two_torsion_check(F.S);
  CHECK(t.doubled_residual < 1e-6);
  CHECK(t.single_residual >= 1e-2);
  // independent: 2 sigma = n + Z m with integers, from a direct real solve
  const Eigen::VectorXcd v = 2.0 * t.sigma;
  Eigen::MatrixXd R(4, 4);
  R << Eigen::MatrixXd::Identity(2, 2), F.S.basis.Z.real(), Eigen::MatrixXd::Zero(2, 2), F.S.basis.Z.imag();
  Eigen::VectorXd b(4);
  b << v.real(), v.imag();
  const Eigen::VectorXd n = R.partialPivLu().solve(b);
  CHECK((n.array() - n.array().round()).abs().maxCoeff() < 1e-6);
}
