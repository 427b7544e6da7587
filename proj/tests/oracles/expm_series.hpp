#pragma once

#include <Eigen/Dense>
#include <cmath>

// Scaling and squaring with a plain Taylor series.
namespace oracle {

inline Eigen::Matrix2cd expm_series(const Eigen::Matrix2cd& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.125) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.125)));
  const Eigen::Matrix2cd x = m / std::ldexp(1.0, squarings);
  Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sum = term;
  for (int n = 1; n < 30; ++n) {
    term = term * x / static_cast<double>(n);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace oracle
