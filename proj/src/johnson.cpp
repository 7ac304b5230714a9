#include <hyperreg/johnson.hpp>

#include <cmath>
#include <cstdlib>

namespace hyperreg {

Word reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

Word operator*(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return reduce(std::move(w));
}

Word commutator(const Word& a, const Word& b) { return a * b * inverse(a) * inverse(b); }

Word generator(int l) { return Word{l}; }

Word delta(int g, int first, int last) {
  if (last < 0) last = g;
  Word d;
  for (int k = first; k <= last; ++k) d = d * commutator(generator(k), generator(g + k));
  return d;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += "a" + std::to_string(std::abs(w[i]));
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

Word apply(const std::vector<Word>& images, const Word& w) {
  Word out;
  for (int l : w) {
    const Word& img = images.at(std::abs(l) - 1);
    out = out * (l > 0 ? img : inverse(img));
  }
  return out;
}

Word apply(const Automorphism& f, const Word& w) { return hyperreg::apply(f.images, w); }

Automorphism inverse(const Automorphism& f) {
  return Automorphism{f.rank, f.inverse_images, f.images, f.label + "^-1"};
}

Automorphism compose(const Automorphism& f, const Automorphism& h) {
  Automorphism r;
  r.rank = f.rank;
  r.label = f.label + " o " + h.label;
  for (int l = 1; l <= f.rank; ++l) {
    r.images.push_back(hyperreg::apply(f, h.images[l - 1]));
    r.inverse_images.push_back(hyperreg::apply(h.inverse_images, f.inverse_images[l - 1]));
  }
  return r;
}

Automorphism identity_automorphism(int g) {
  Automorphism r;
  r.rank = 2 * g;
  r.label = "id";
  for (int l = 1; l <= 2 * g; ++l) {
    r.images.push_back(generator(l));
    r.inverse_images.push_back(generator(l));
  }
  return r;
}

namespace {

bool in_fixed_block(int l, int g, int g1) { return l <= g1 || (l > g && l <= g + g1); }

void check_inverse(const Automorphism& f) {
  if (!inverse_is_valid(f))
    throw Error(ErrorCode::InvalidArgument, "stored inverse does not invert " + f.label);
}

}  // namespace

Automorphism bounding_pair(int g, int g1) {
  if (g < 2 || g1 <= 0 || g1 >= g || g > 4)
    throw Error(ErrorCode::BadSplit, "need 0 < g1 < g <= 4, got g=" + std::to_string(g) +
                                         " g1=" + std::to_string(g1));
  const Word d = delta(g);
  // Inverse conjugates the moved block by delta_fixed^-1 delta_moved^-1.
  const Word e = inverse(delta(g, 1, g1)) * inverse(delta(g, g1 + 1, g));
  Automorphism r;
  r.rank = 2 * g;
  r.label = "bounding_pair(" + std::to_string(g) + "," + std::to_string(g1) + ")";
  for (int l = 1; l <= 2 * g; ++l) {
    if (in_fixed_block(l, g, g1)) {
      r.images.push_back(generator(l));
      r.inverse_images.push_back(generator(l));
    } else {
      r.images.push_back(d * generator(l) * inverse(d));
      r.inverse_images.push_back(e * generator(l) * inverse(e));
    }
  }
  check_inverse(r);
  return r;
}

Automorphism global_conjugation(int g) {
  if (g < 1 || g > 4) throw Error(ErrorCode::InvalidArgument, "genus out of range");
  const Word d = delta(g);
  Automorphism r;
  r.rank = 2 * g;
  r.label = "conj_delta(" + std::to_string(g) + ")";
  for (int l = 1; l <= 2 * g; ++l) {
    r.images.push_back(d * generator(l) * inverse(d));
    r.inverse_images.push_back(inverse(d) * generator(l) * d);
  }
  check_inverse(r);
  return r;
}

bool inverse_is_valid(const Automorphism& f) {
  if (f.images.size() != static_cast<std::size_t>(f.rank) ||
      f.inverse_images.size() != static_cast<std::size_t>(f.rank))
    return false;
  for (int l = 1; l <= f.rank; ++l) {
    if (hyperreg::apply(f.images, f.inverse_images[l - 1]) != generator(l)) return false;
    if (hyperreg::apply(f.inverse_images, f.images[l - 1]) != generator(l)) return false;
  }
  return true;
}

IntSeries magnus(const Word& w, int n, int D) {
  if (D < 0 || D > 4) throw Error(ErrorCode::InvalidArgument, "Magnus truncation must be <= 4");
  IntSeries r = IntSeries::one(n, D);
  for (int l : w) {
    const int x = std::abs(l) - 1;
    if (x >= n) throw Error(ErrorCode::InvalidArgument, "letter outside alphabet");
    IntSeries s = IntSeries::one(n, D);
    // 1 + X, or 1 - X + X^2 - ... for the inverse
    for (int d = 1; d <= D; ++d) {
      if (l > 0 && d > 1) break;
      std::vector<int> letters(d, x);
      s.part(d).at(letters) = (l > 0 || d % 2 == 0) ? 1 : -1;
    }
    r = r * s;
  }
  return r;
}

IntTensor omega(int g) {
  IntTensor t(2 * g, 2);
  for (int k = 0; k < g; ++k) {
    t.at({k, g + k}) += 1;
    t.at({g + k, k}) -= 1;
  }
  return t;
}

IntTensor omega_bracket(int g, int l) {
  const IntTensor w = omega(g);
  const IntTensor x = basis_vector<std::int64_t>(2 * g, l);
  return tensor_product(w, x) - tensor_product(x, w);
}

namespace {

void require_kernel(const IntSeries& diff, int k, int l) {
  for (int d = 1; d < k; ++d)
    if (!diff.part(d).is_zero())
      throw Error(ErrorCode::NotInKernel, "degree " + std::to_string(d) +
                                              " Magnus part moves generator " +
                                              std::to_string(l + 1));
}

void check_k(int k) {
  if (k < 1 || k > 4) throw Error(ErrorCode::InvalidArgument, "k must lie in 1..4");
}

}  // namespace

TensorMap tau_kJ(const Automorphism& f, int k) {
  check_k(k);
  TensorMap out;
  for (int l = 0; l < f.rank; ++l) {
    const IntSeries diff = magnus(hyperreg::apply(f, generator(l + 1)), f.rank, k) -
                           magnus(generator(l + 1), f.rank, k);
    require_kernel(diff, k, l);
    out.push_back(diff.part(k));
  }
  return out;
}

TensorMap tau_k_lie(const Automorphism& f, int k) {
  check_k(k);
  TensorMap out;
  for (int l = 0; l < f.rank; ++l) {
    const Word w = hyperreg::apply(f, generator(l + 1)) * inverse(generator(l + 1));
    const IntSeries diff = magnus(w, f.rank, k) - IntSeries::one(f.rank, k);
    require_kernel(diff, k, l);
    out.push_back(diff.part(k));
  }
  return out;
}

bool is_lie_element(const IntTensor& t) {
  if (t.degree == 0) return t.is_zero();
  // left-normed bracket [..[X_i1, X_i2], .., X_ik] applied letterwise
  IntTensor acc(t.n, t.degree);
  for (Eigen::Index idx = 0; idx < t.c.size(); ++idx) {
    if (t.c[idx] == 0) continue;
    const std::vector<int> ls = t.letters(idx);
    IntTensor b = basis_vector<std::int64_t>(t.n, ls[0]);
    for (int i = 1; i < t.degree; ++i) {
      const IntTensor x = basis_vector<std::int64_t>(t.n, ls[i]);
      b = tensor_product(b, x) - tensor_product(x, b);
    }
    acc.c += t.c[idx] * b.c;
  }
  return acc.c == t.degree * t.c;
}

H1 j_omega_transpose(const IntTensor& t, int g) {
  if (t.degree != 3 || t.n != 2 * g)
    throw Error(ErrorCode::InvalidArgument, "expected a degree-3 tensor over 2g letters");
  H1 out = H1::Zero(2 * g);
  for (Eigen::Index idx = 0; idx < t.c.size(); ++idx) {
    if (t.c[idx] == 0) continue;
    const std::vector<int> ls = t.letters(idx);
    if (ls[0] < g && ls[1] == ls[0] + g) out[ls[2]] += t.c[idx];
    if (ls[0] >= g && ls[1] == ls[0] - g) out[ls[2]] -= t.c[idx];
  }
  return out;
}

Wedge2 wedge(const H1& a, const H1& b) { return a * b.transpose() - b * a.transpose(); }

Wedge2 mod_omega(const Wedge2& w, int g) {
  Wedge2 r = w;
  const std::int64_t c = r(g - 1, 2 * g - 1);
  for (int k = 0; k < g - 1; ++k) {
    r(k, g + k) -= c;
    r(g + k, k) += c;
  }
  r(g - 1, 2 * g - 1) = 0;
  r(2 * g - 1, g - 1) = 0;
  return r;
}

Wedge2 phi_star(const TensorMap& F, int g) {
  if (F.size() != static_cast<std::size_t>(2 * g))
    throw Error(ErrorCode::InvalidArgument, "map must have 2g images");
  Wedge2 r = Wedge2::Zero(2 * g, 2 * g);
  for (int k = 0; k < g; ++k) {
    r += wedge(H1::Unit(2 * g, k), j_omega_transpose(F[g + k], g));
    r -= wedge(H1::Unit(2 * g, g + k), j_omega_transpose(F[k], g));
  }
  return mod_omega(r, g);
}

Wedge2 moved_symplectic_sum(int g, int g1) {
  Wedge2 r = Wedge2::Zero(2 * g, 2 * g);
  for (int k = g1; k < g; ++k) r += wedge(H1::Unit(2 * g, k), H1::Unit(2 * g, g + k));
  return r;
}

namespace {

// Exact integer kappa with a == kappa * b, if any.
std::optional<std::int64_t> exact_ratio(const Wedge2& a, const Wedge2& b) {
  std::optional<std::int64_t> kappa;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const std::int64_t x = a.data()[i], y = b.data()[i];
    if (y == 0) {
      if (x != 0) return std::nullopt;
      continue;
    }
    if (x % y != 0) return std::nullopt;
    if (kappa && *kappa != x / y) return std::nullopt;
    kappa = x / y;
  }
  return kappa.value_or(0);
}

}  // namespace

MonodromyReport monodromy_report(int g, int g1) {
  const Automorphism f = bounding_pair(g, g1);
  MonodromyReport r;
  r.g = g;
  r.g1 = g1;
  r.tau3 = tau_kJ(f, 3);

  r.tau3_matches_bracket = true;
  for (int l = 0; l < 2 * g; ++l) {
    const bool fixed = in_fixed_block(l + 1, g, g1);
    const IntTensor expect = fixed ? IntTensor(2 * g, 3) : omega_bracket(g, l);
    if (!(r.tau3[l] == expect)) r.tau3_matches_bracket = false;
  }
  const TensorMap lie = tau_k_lie(f, 3);
  r.lie_matches_tau = true;
  for (int l = 0; l < 2 * g; ++l)
    if (!(lie[l] == r.tau3[l]) || !is_lie_element(lie[l])) r.lie_matches_tau = false;

  r.phi = phi_star(r.tau3, g);
  const Wedge2 target = mod_omega(moved_symplectic_sum(g, g1), g);
  const auto kappa = exact_ratio(r.phi, target);
  r.proportional = kappa.has_value() && *kappa != 0;
  r.kappa = kappa.value_or(0);

  r.scaled_moved_sum = 4 * moved_symplectic_sum(g, g1);
  r.scaled_moved_sum_mod_omega = mod_omega(r.scaled_moved_sum, g);
  r.reference_constant = 2 * (2 * g + 1);
  r.ratio_two = static_cast<double>(r.kappa) / static_cast<double>(2 * (2 * g + 1));
  r.ratio_four = static_cast<double>(r.kappa) / static_cast<double>(4 * (2 * g + 1));
  if (r.ratio_two == 1.0)
    r.matches = "2(2g+1)";
  else if (r.ratio_four == 1.0)
    r.matches = "4(2g+1)";
  else
    r.matches = "neither";
  return r;
}

nlohmann::json to_json(const IntTensor& t) {
  nlohmann::json j = nlohmann::json::object();
  for (Eigen::Index idx = 0; idx < t.c.size(); ++idx) {
    if (t.c[idx] == 0) continue;
    std::string key;
    for (int l : t.letters(idx)) key += (key.empty() ? "A" : ".A") + std::to_string(l + 1);
    j[key] = t.c[idx];
  }
  return j;
}

nlohmann::json to_json(const Wedge2& w) {
  nlohmann::json j = nlohmann::json::object();
  for (Eigen::Index a = 0; a < w.rows(); ++a)
    for (Eigen::Index b = a + 1; b < w.cols(); ++b)
      if (w(a, b) != 0) j["A" + std::to_string(a + 1) + "^A" + std::to_string(b + 1)] = w(a, b);
  return j;
}

nlohmann::json to_json(const MonodromyReport& r) {
  nlohmann::json tau = nlohmann::json::object();
  for (std::size_t l = 0; l < r.tau3.size(); ++l) tau["A" + std::to_string(l + 1)] = to_json(r.tau3[l]);
  return {
      {"g", r.g},
      {"g1", r.g1},
      {"tau3J", tau},
      {"tau3J_matches_omega_bracket", r.tau3_matches_bracket},
      {"lie_form_matches", r.lie_matches_tau},
      {"phi_star_mod_omega", to_json(r.phi)},
      {"proportional", r.proportional},
      {"kappa", r.kappa},
      {"scaled_moved_sum", to_json(r.scaled_moved_sum)},
      {"scaled_moved_sum_mod_omega", to_json(r.scaled_moved_sum_mod_omega)},
      {"constant_2_2g_plus_1", r.reference_constant},
      {"ratio_kappa_over_2_2g_plus_1", r.ratio_two},
      {"ratio_kappa_over_4_2g_plus_1", r.ratio_four},
      {"matches", r.matches},
  };
}

}  // namespace hyperreg
