#pragma once

#include <hyperreg/error.hpp>

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperreg {

/// Freely reduced word in alpha_1..alpha_n; letter l > 0 is alpha_l, -l its inverse.
/// Call apply() qualified: ADL on std::vector also finds std::apply.
using Word = std::vector<int>;

Word reduce(Word w);
Word inverse(const Word& w);
Word operator*(const Word& a, const Word& b);
Word commutator(const Word& a, const Word& b);  // a b a^-1 b^-1
Word generator(int l);
/// prod_k [alpha_k, alpha_{g+k}] over k in [first, last] (1-based).
Word delta(int g, int first = 1, int last = -1);
std::string to_string(const Word& w);

struct Automorphism {
  int rank = 0;  // number of generators, 2g
  std::vector<Word> images;
  std::vector<Word> inverse_images;
  std::string label;
};

Word apply(const std::vector<Word>& images, const Word& w);
Word apply(const Automorphism& f, const Word& w);
Automorphism inverse(const Automorphism& f);
/// (f * h)(w) = f(h(w)).
Automorphism compose(const Automorphism& f, const Automorphism& h);
Automorphism identity_automorphism(int g);
/// alpha_l fixed for l in 1..g1 and g+1..g+g1, the rest conjugated by delta.
Automorphism bounding_pair(int g, int g1);
/// Every generator conjugated by delta.
Automorphism global_conjugation(int g);
bool inverse_is_valid(const Automorphism& f);

/// Homogeneous degree-k tensor over X_1..X_n, dense, index = base-n digits
/// (first letter most significant).
template <typename Scalar>
struct Tensor {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  int n = 0;
  int degree = 0;
  Vector c;

  Tensor() = default;
  Tensor(int n_, int k) : n(n_), degree(k), c(Vector::Zero(size(n_, k))) {}

  static Eigen::Index size(int n, int k) {
    Eigen::Index s = 1;
    for (int i = 0; i < k; ++i) s *= n;
    return s;
  }
  /// letters are 0-based
  Scalar& at(const std::vector<int>& letters) { return c[index(letters)]; }
  Scalar at(const std::vector<int>& letters) const { return c[index(letters)]; }
  Eigen::Index index(const std::vector<int>& letters) const {
    Eigen::Index idx = 0;
    for (int l : letters) idx = idx * n + l;
    return idx;
  }
  std::vector<int> letters(Eigen::Index idx) const {
    std::vector<int> out(degree);
    for (int i = degree - 1; i >= 0; --i) {
      out[i] = static_cast<int>(idx % n);
      idx /= n;
    }
    return out;
  }
  bool is_zero() const { return c.isZero(); }
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.n == b.n && a.degree == b.degree && a.c == b.c;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) {
    a.c += b.c;
    return a;
  }
  friend Tensor operator-(Tensor a, const Tensor& b) {
    a.c -= b.c;
    return a;
  }
  friend Tensor operator*(Scalar s, Tensor a) {
    a.c *= s;
    return a;
  }
};

/// Concatenation product.
template <typename Scalar>
Tensor<Scalar> tensor_product(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  Tensor<Scalar> r(a.n, a.degree + b.degree);
  const Eigen::Index nb = b.c.size();
  for (Eigen::Index i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == Scalar(0)) continue;
    r.c.segment(i * nb, nb) += a.c[i] * b.c;
  }
  return r;
}

template <typename Scalar>
Tensor<Scalar> basis_vector(int n, int l) {
  Tensor<Scalar> t(n, 1);
  t.c[l] = 1;
  return t;
}

/// Truncated series sum_{d <= D} T_d in the tensor algebra.
template <typename Scalar>
class TensorSeries {
 public:
  TensorSeries(int n, int max_degree) : n_(n), D_(max_degree) {
    for (int d = 0; d <= D_; ++d) parts_.emplace_back(n_, d);
  }
  static TensorSeries one(int n, int D) {
    TensorSeries s(n, D);
    s.parts_[0].c[0] = 1;
    return s;
  }
  int alphabet() const { return n_; }
  int max_degree() const { return D_; }
  const Tensor<Scalar>& part(int d) const { return parts_[d]; }
  Tensor<Scalar>& part(int d) { return parts_[d]; }

  friend TensorSeries operator*(const TensorSeries& a, const TensorSeries& b) {
    TensorSeries r(a.n_, a.D_);
    for (int i = 0; i <= a.D_; ++i) {
      if (a.parts_[i].is_zero()) continue;
      for (int j = 0; i + j <= a.D_; ++j) {
        if (b.parts_[j].is_zero()) continue;
        r.parts_[i + j].c += tensor_product(a.parts_[i], b.parts_[j]).c;
      }
    }
    return r;
  }
  friend TensorSeries operator-(TensorSeries a, const TensorSeries& b) {
    for (int d = 0; d <= a.D_; ++d) a.parts_[d].c -= b.parts_[d].c;
    return a;
  }
  friend bool operator==(const TensorSeries& a, const TensorSeries& b) {
    if (a.n_ != b.n_ || a.D_ != b.D_) return false;
    for (int d = 0; d <= a.D_; ++d)
      if (!(a.parts_[d] == b.parts_[d])) return false;
    return true;
  }

 private:
  int n_;
  int D_;
  std::vector<Tensor<Scalar>> parts_;
};

using IntTensor = Tensor<std::int64_t>;
using IntSeries = TensorSeries<std::int64_t>;

/// Magnus expansion alpha_l -> 1 + X_l over n letters, truncated at degree D <= 4.
IntSeries magnus(const Word& w, int n, int D);

/// omega = sum_k X_k X_{g+k} - X_{g+k} X_k.
IntTensor omega(int g);
/// omega X_l - X_l omega (l 0-based).
IntTensor omega_bracket(int g, int l);

/// Images of the 2g generators in the degree-k tensors.
using TensorMap = std::vector<IntTensor>;

TensorMap tau_kJ(const Automorphism& f, int k);
TensorMap tau_k_lie(const Automorphism& f, int k);
/// Dynkin-Specht-Wever test: P is a Lie element iff the left-normed bracketing map sends it to k P.
bool is_lie_element(const IntTensor& t);

/// Element of H_1 (length 2g).
using H1 = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
/// Antisymmetric 2g x 2g matrix W; W(a, b) is the coefficient of A_a ^ A_b for a < b.
using Wedge2 = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

H1 j_omega_transpose(const IntTensor& t, int g);
Wedge2 wedge(const H1& a, const H1& b);
/// Canonical representative mod omega: the A_g ^ A_2g coordinate is eliminated.
Wedge2 mod_omega(const Wedge2& w, int g);
Wedge2 phi_star(const TensorMap& F, int g);
/// sum over k in (g1, g] of A_k ^ A_{g+k}.
Wedge2 moved_symplectic_sum(int g, int g1);

struct MonodromyReport {
  int g = 0, g1 = 0;
  TensorMap tau3;
  bool tau3_matches_bracket = false;  // fixed block 0, moved block omega-bracket
  bool lie_matches_tau = false;
  Wedge2 phi;  // Phi* of tau3, mod omega
  bool proportional = false;
  std::int64_t kappa = 0;
  Wedge2 scaled_moved_sum;  // 4 sum_{k > g1} A_k ^ A_{g+k}
  Wedge2 scaled_moved_sum_mod_omega;
  std::int64_t reference_constant = 0;  // 2(2g + 1)
  double ratio_two = 0;   // kappa / (2(2g + 1))
  double ratio_four = 0;  // kappa / (4(2g + 1))
  std::string matches;
};

MonodromyReport monodromy_report(int g, int g1);

nlohmann::json to_json(const IntTensor& t);
nlohmann::json to_json(const Wedge2& w);
nlohmann::json to_json(const MonodromyReport& r);

}  // namespace hyperreg
