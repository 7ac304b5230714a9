#include <doctest.h>

#include <hyperreg/curve.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace hyperreg;

namespace {

const std::vector<cd> kRef = {0.0, 24.0, -50.0, 35.0, -10.0, 1.0};
const cd kLambda(0, -1);

HyperellipticCurve reference() { return make_curve(kRef, 0, 4, 2, kLambda); }

std::function<cd(double)> circle(cd c, double r, double turns = 1) {
  return [=](double t) { return c + r * std::exp(cd(0, 2 * std::numbers::pi * turns * t)); };
}

cd y_at(const HyperellipticCurve& C, cd x) { return nearest_root(C, x, 1.0); }

}  // namespace

TEST_CASE("reference curve: genus, roots, marked points") {
  const auto C = reference();
  CHECK(C.genus() == 2);
  CHECK(C.weierstrass_count() == 6);
  CHECK(C.infinity_is_branch());
  REQUIRE(C.roots().size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(C.roots()[k] - double(k)) < 1e-12);
  CHECK(C.q1() == C.roots()[0]);
  CHECK(C.q2() == C.roots()[4]);
}

TEST_CASE("gamma arc clears the unmarked branch points") {
  const auto C = reference();
  // Independent sampling of h^{-1}((0, inf)): x = (4 w) / (w + i) for w = s >= 0... written via
  // h(x) = -i x / (x - 4) = w  =>  x = 4 w / (w + i).
  double best = 1e300;
  for (int k = 1; k < 1000; ++k) {
    const double tau = k / 1000.0;
    const double w = tau / (1 - tau);
    const cd x = 4.0 * w / (w + cd(0, 1));
    CHECK(std::abs(std::abs(x - 2.0) - 2.0) < 1e-12);
    for (int e : {1, 2, 3}) best = std::min(best, std::abs(x - double(e)));
  }
  CHECK(best > 0.5);
  CHECK(std::abs(C.arc_clearance() - best) < 1e-2);
}

TEST_CASE("make_curve validation") {
  CHECK_THROWS_WITH_AS(make_curve({0.0, 0.0, 1.0, 1.0}, 0, 1, 2, kLambda), doctest::Contains("NotSquarefree"),
                       Error);
  CHECK_THROWS_WITH_AS(make_curve(kRef, 0, 0, 2, kLambda), doctest::Contains("IndicesCollide"), Error);
  CHECK_THROWS_WITH_AS(make_curve(kRef, 0, 9, 2, kLambda), doctest::Contains("BadIndex"), Error);
  // lambda real positive: h^{-1}([0, inf]) is the real segment through 1, 2, 3.
  CHECK_THROWS_WITH_AS(make_curve(kRef, 0, 4, 2, cd(-1, 0)), doctest::Contains("ArcHitsBranchPoint"), Error);
  try {
    make_curve(kRef, 0, 0, 2, kLambda);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndicesCollide);
  }
}

TEST_CASE("h at marked points") {
  const auto C = reference();
  const auto h0 = h_eval(C, {0.0, 0.0});
  REQUIRE(h0);
  CHECK(std::abs(*h0) < 1e-15);
  const auto hp = h_eval(C, {2.0, 0.0});
  REQUIRE(hp);
  CHECK(std::abs(*hp - cd(0, 1)) < 1e-14);
  CHECK_FALSE(h_eval(C, {4.0, 0.0}).has_value());
}

TEST_CASE("involution") {
  const auto C = reference();
  const CurvePoint w{2.0, 0.0};
  CHECK(involution(w).x == w.x);
  CHECK(involution(w).y == cd(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 100; ++k) {
    const cd x(u(rng), u(rng));
    const CurvePoint P{x, y_at(C, x)};
    const CurvePoint Q = involution(P);
    CHECK(Q.y == -P.y);
    CHECK(involution(Q).y == P.y);
    CHECK(*h_eval(C, Q) == *h_eval(C, P));
  }
}

TEST_CASE("continue_y: constant path at a branch point stays at zero") {
  const auto C = reference();
  const auto s = continue_y(C, [](double) { return cd(2.0); }, 0.0);
  for (const auto& v : s) CHECK(std::abs(v.y) == 0.0);
}

TEST_CASE("continue_y: monodromy around one and two branch points") {
  const auto C = reference();
  {
    const auto path = circle(1.0, 0.3);
    const cd y0 = y_at(C, path(0));
    const auto s = continue_y(C, path, y0);
    CHECK(std::abs(s.back().y + y0) < 1e-9 * std::abs(y0));
  }
  {
    const auto path = circle(1.5, 0.8);
    const cd y0 = y_at(C, path(0));
    const auto s = continue_y(C, path, y0);
    CHECK(std::abs(s.back().y - y0) < 1e-9 * std::abs(y0));
  }
}

TEST_CASE("continue_y: sheet sign matches winding-number oracle") {
  const auto C = reference();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cx(-1.5, 5.5), cy(-2, 2), rr(0.2, 3.0);
  int tried = 0;
  while (tried < 40) {
    const cd c(cx(rng), cy(rng));
    const double r = rr(rng);
    int inside = 0;
    bool close = false;
    for (cd e : C.roots()) {
      const double d = std::abs(e - c);
      if (std::abs(d - r) < 0.1) close = true;
      if (d < r) ++inside;
    }
    if (close) continue;
    ++tried;
    const auto path = circle(c, r);
    const cd y0 = y_at(C, path(0));
    const auto s = continue_y(C, path, y0);
    const double sign = inside % 2 ? -1.0 : 1.0;
    CHECK(std::abs(s.back().y - sign * y0) < 1e-8 * std::abs(y0));
    for (const auto& v : s) CHECK(std::abs(v.y * v.y - C.f(v.x)) < 1e-10 * std::max(1.0, std::abs(C.f(v.x))));
  }
}

TEST_CASE("continue_y: errors") {
  const auto C = reference();
  CHECK_THROWS_WITH_AS(continue_y(C, circle(1.0, 0.3), 5.0), doctest::Contains("SeedMismatch"), Error);
  // straight through the branch point at 1
  CHECK_THROWS_WITH_AS(continue_y(C, [](double t) { return cd(0.5 + t, 0.0); }, y_at(C, 0.5)),
                       doctest::Contains("PathTooCloseToBranchPoint"), Error);
}

TEST_CASE("continue_y: path ending at a branch point") {
  const auto C = reference();
  const auto s = continue_y(C, [](double t) { return cd(1.5 - 0.5 * t, 0.5 - 0.5 * t); }, y_at(C, cd(1.5, 0.5)));
  CHECK(std::abs(s.back().x - 1.0) < 1e-14);
  CHECK(std::abs(s.back().y) < 1e-6);
}

TEST_CASE("polynomial_roots") {
  Eigen::VectorXcd c(4);
  c << -6.0, 11.0, -6.0, 1.0;  // (x-1)(x-2)(x-3)
  const auto r = polynomial_roots(c);
  REQUIRE(r.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r[k] - double(k + 1)) < 1e-13);
}
