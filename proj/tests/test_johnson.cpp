#include <doctest.h>

#include <hyperreg/johnson.hpp>

#include <map>
#include <random>

using namespace hyperreg;

namespace {

// Naive Magnus expansion as a sparse map word -> coefficient, used as an oracle.
using Sparse = std::map<std::vector<int>, long long>;

Sparse sparse_mul(const Sparse& a, const Sparse& b, int D) {
  Sparse r;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      if (static_cast<int>(u.size() + v.size()) > D) continue;
      std::vector<int> w = u;
      w.insert(w.end(), v.begin(), v.end());
      r[w] += x * y;
    }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

Sparse naive_magnus(const Word& w, int D) {
  Sparse r{{{}, 1}};
  for (int l : w) {
    const int x = std::abs(l) - 1;
    Sparse s{{{}, 1}};
    if (l > 0) {
      s[{x}] = 1;
    } else {
      std::vector<int> p;
      for (int d = 1; d <= D; ++d) {
        p.push_back(x);
        s[p] = d % 2 ? -1 : 1;
      }
    }
    r = sparse_mul(r, s, D);
  }
  return r;
}

bool agrees(const IntSeries& m, const Sparse& s) {
  for (int d = 0; d <= m.max_degree(); ++d) {
    const IntTensor& t = m.part(d);
    for (Eigen::Index i = 0; i < t.c.size(); ++i) {
      const auto it = s.find(t.letters(i));
      const long long want = it == s.end() ? 0 : it->second;
      if (t.c[i] != want) return false;
    }
  }
  return true;
}

IntTensor X(int n, std::vector<int> letters) {
  IntTensor t(n, static_cast<int>(letters.size()));
  t.at(letters) = 1;
  return t;
}

// omega X_l - X_l omega written out letter by letter (0-based).
IntTensor bracket_by_hand(int g, int l) {
  IntTensor t(2 * g, 3);
  for (int k = 0; k < g; ++k) {
    t.at({k, g + k, l}) += 1;
    t.at({g + k, k, l}) -= 1;
    t.at({l, k, g + k}) -= 1;
    t.at({l, g + k, k}) += 1;
  }
  return t;
}

}  // namespace

TEST_CASE("words") {
  CHECK(reduce({1, 2, -2, -1, 3}) == Word{3});
  CHECK(inverse(Word{1, -2}) == Word{2, -1});
  CHECK(commutator(generator(1), generator(2)) == Word{1, 2, -1, -2});
  CHECK(delta(2) == Word{1, 3, -1, -3, 2, 4, -2, -4});
  CHECK(to_string(Word{1, -2}) == "a1 a2^-1");
}

TEST_CASE("magnus examples") {
  const IntSeries e = magnus({}, 4, 3);
  CHECK(e == IntSeries::one(4, 3));
  const IntSeries c = magnus(commutator(generator(1), generator(2)), 4, 2);
  CHECK(c.part(1).is_zero());
  CHECK(c.part(2) == X(4, {0, 1}) - X(4, {1, 0}));
  for (int l = 0; l < 4; ++l) {
    const IntSeries m = magnus(commutator(delta(2), generator(l + 1)), 4, 3);
    CHECK(m.part(1).is_zero());
    CHECK(m.part(2).is_zero());
    CHECK(m.part(3) == bracket_by_hand(2, l));
  }
  CHECK_THROWS_WITH_AS(magnus({1}, 4, 5), doctest::Contains("InvalidArgument"), Error);
}

TEST_CASE("magnus agrees with a naive expansion and is a homomorphism") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> letter(1, 4), len(0, 9), sgn(0, 1);
  auto random_word = [&] {
    Word w;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) w.push_back(sgn(rng) ? letter(rng) : -letter(rng));
    return reduce(w);
  };
  for (int k = 0; k < 40; ++k) {
    const Word u = random_word(), v = random_word();
    CHECK(agrees(magnus(u, 4, 4), naive_magnus(u, 4)));
    CHECK(magnus(u * v, 4, 4) == magnus(u, 4, 4) * magnus(v, 4, 4));
    CHECK(magnus(u, 4, 4).part(0).c[0] == 1);
  }
}

TEST_CASE("apply and automorphisms") {
  const Automorphism id = identity_automorphism(2);
  const Word w{1, -3, 2, 4};
  CHECK(hyperreg::apply(id, w) == w);
  const Automorphism f = bounding_pair(2, 1);
  CHECK(hyperreg::apply(f, generator(1)) == generator(1));
  CHECK(hyperreg::apply(f, generator(3)) == generator(3));
  CHECK(hyperreg::apply(f, generator(2)) == delta(2) * generator(2) * inverse(delta(2)));
  CHECK(hyperreg::apply(f, generator(4)) == delta(2) * generator(4) * inverse(delta(2)));
  CHECK(inverse_is_valid(f));
  CHECK(hyperreg::apply(f, hyperreg::apply(inverse(f), w)) == w);
  const Automorphism ff = compose(f, inverse(f));
  for (int l = 1; l <= 4; ++l) CHECK(hyperreg::apply(ff, generator(l)) == generator(l));
  CHECK(inverse_is_valid(global_conjugation(3)));
  CHECK_THROWS_WITH_AS(bounding_pair(2, 2), doctest::Contains("BadSplit"), Error);
  CHECK_THROWS_WITH_AS(bounding_pair(3, 0), doctest::Contains("BadSplit"), Error);
}

TEST_CASE("bounding pair is trivial on degrees one and two") {
  for (auto [g, g1] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 3}}) {
    const Automorphism f = bounding_pair(g, g1);
    for (int l = 1; l <= 2 * g; ++l) {
      const IntSeries d = magnus(hyperreg::apply(f, generator(l)), 2 * g, 3) - magnus(generator(l), 2 * g, 3);
      CHECK(d.part(1).is_zero());
      CHECK(d.part(2).is_zero());
    }
  }
}

TEST_CASE("tau_3J of the bounding pair") {
  for (auto [g, g1] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const TensorMap t = tau_kJ(bounding_pair(g, g1), 3);
    for (int l = 0; l < 2 * g; ++l) {
      const bool fixed = l < g1 || (l >= g && l < g + g1);
      if (fixed) CHECK(t[l].is_zero());
      else CHECK(t[l] == bracket_by_hand(g, l));
    }
  }
  const TensorMap z = tau_kJ(identity_automorphism(2), 3);
  for (const auto& t : z) CHECK(t.is_zero());
  CHECK_THROWS_WITH_AS(tau_kJ(bounding_pair(2, 1), 4), doctest::Contains("NotInKernel"), Error);
}

TEST_CASE("tau_k via f(a) a^-1 agrees and is Lie") {
  for (auto [g, g1] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const Automorphism f = bounding_pair(g, g1);
    const TensorMap a = tau_kJ(f, 3), b = tau_k_lie(f, 3);
    for (int l = 0; l < 2 * g; ++l) {
      CHECK(a[l] == b[l]);
      CHECK(is_lie_element(b[l]));
    }
  }
  for (const auto& t : tau_k_lie(identity_automorphism(2), 3)) CHECK(t.is_zero());
  CHECK_FALSE(is_lie_element(X(4, {0, 1})));
  CHECK(is_lie_element(X(4, {0, 1}) - X(4, {1, 0})));
}

TEST_CASE("global conjugation and additivity") {
  const TensorMap t = tau_kJ(global_conjugation(2), 3);
  for (int l = 0; l < 4; ++l) CHECK(t[l] == bracket_by_hand(2, l));
  const Automorphism f = bounding_pair(2, 1), h = global_conjugation(2);
  const TensorMap tf = tau_kJ(f, 3), th = tau_kJ(h, 3), tfh = tau_kJ(compose(f, h), 3);
  for (int l = 0; l < 4; ++l) CHECK(tfh[l] == tf[l] + th[l]);
  const TensorMap tff = tau_kJ(compose(f, f), 3);
  for (int l = 0; l < 4; ++l) CHECK(tff[l] == 2 * tf[l]);
}

TEST_CASE("J^t_Omega") {
  H1 e2 = H1::Zero(4);
  e2[1] = 1;
  CHECK(j_omega_transpose(X(4, {0, 2, 1}), 2) == e2);
  CHECK(j_omega_transpose(X(4, {2, 0, 1}), 2) == -e2);
  CHECK(j_omega_transpose(X(4, {0, 1, 2}), 2) == H1::Zero(4));
}

TEST_CASE("phi_star") {
  const int g = 2;
  const TensorMap zero(4, IntTensor(4, 3));
  CHECK(phi_star(zero, g).isZero());
  const TensorMap t = tau_kJ(bounding_pair(2, 1), 3);
  const Wedge2 w = phi_star(t, g);
  // proportional to A2 ^ A4 mod omega, i.e. to -A1 ^ A3 in canonical form
  const Wedge2 target = mod_omega(moved_symplectic_sum(2, 1), 2);
  CHECK(target(0, 2) == -1);
  CHECK(w(0, 2) % target(0, 2) == 0);
  CHECK(w == (w(0, 2) / target(0, 2)) * target);
  TensorMap sum = t;
  const TensorMap other = tau_kJ(global_conjugation(2), 3);
  for (int l = 0; l < 4; ++l) sum[l] = t[l] + other[l];
  CHECK(phi_star(sum, g) == phi_star(t, g) + phi_star(other, g));
}

TEST_CASE("mod omega canonical form") {
  Wedge2 om = moved_symplectic_sum(3, 0);  // omega itself
  CHECK(mod_omega(om, 3).isZero());
}

TEST_CASE("monodromy report") {
  const MonodromyReport r = monodromy_report(2, 1);
  CHECK(r.scaled_moved_sum == 4 * wedge(H1::Unit(4, 1), H1::Unit(4, 3)));
  CHECK(r.reference_constant == 10);
  CHECK(r.proportional);
  CHECK(r.tau3_matches_bracket);
  CHECK(r.lie_matches_tau);
  CHECK(r.ratio_two == doctest::Approx(static_cast<double>(r.kappa) / 10));
  CHECK(r.ratio_four == doctest::Approx(static_cast<double>(r.kappa) / 20));
  const auto j = to_json(r);
  CHECK(j.contains("kappa"));
  CHECK(j["scaled_moved_sum"]["A2^A4"] == 4);
  CHECK(j["tau3J"]["A1"].empty());
  CHECK_THROWS_WITH_AS(monodromy_report(2, 0), doctest::Contains("BadSplit"), Error);
}
