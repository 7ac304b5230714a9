#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <complex>
#include <cstdio>
#include <cstdlib>

namespace hyperreg {

/// Round to 15 significant digits so reports are stable across platforms.
inline double round15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

inline nlohmann::json to_json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round15(v);
}

inline nlohmann::json to_json_complex(std::complex<double> z) {
  return nlohmann::json::array({to_json_number(z.real()), to_json_number(z.imag())});
}

template <typename Derived>
nlohmann::json to_json_matrix(const Eigen::MatrixBase<Derived>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      using Scalar = typename Derived::Scalar;
      if constexpr (std::is_same_v<Scalar, std::complex<double>>)
        row.push_back(to_json_complex(m(i, j)));
      else if constexpr (std::is_floating_point_v<Scalar>)
        row.push_back(to_json_number(m(i, j)));
      else
        row.push_back(m(i, j));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hyperreg
