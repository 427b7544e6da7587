#include "vapor/doppler.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace vapor::doppler {

namespace {

// Weideman's rational expansion, N = 40 terms. Coefficients are the Fourier
// coefficients of exp(-t^2)(L^2+t^2) under the map t = L tan(theta/2).
constexpr int kWeidemanTerms = 40;

struct WeidemanTable {
  double scale = 0.0;
  std::array<double, kWeidemanTerms> coeff{};  // coefficient of Z^n

  WeidemanTable() {
    constexpr int n = kWeidemanTerms;
    constexpr int m = 2 * n;
    constexpr int len = 2 * m;
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double l = std::sqrt(n / std::sqrt(2.0L));
    scale = static_cast<double>(l);

    // Samples for k = -M+1 .. M-1 with a zero prepended, then fftshift-ed.
    std::array<long double, len> f{};
    for (int k = -m + 1; k < m; ++k) {
      const long double theta = k * pi / m;
      const long double t = l * std::tan(theta / 2);
      f[k + m] = std::exp(-t * t) * (l * l + t * t);
    }
    std::array<long double, len> shifted{};
    for (int i = 0; i < len; ++i) shifted[i] = f[(i + m) % len];

    for (int j = 1; j <= n; ++j) {
      long double re = 0.0L;
      for (int i = 0; i < len; ++i) re += shifted[i] * std::cos(2 * pi * j * i / len);
      coeff[j - 1] = static_cast<double>(re / len);
    }
  }
};

const WeidemanTable& weideman() {
  static const WeidemanTable table;
  return table;
}

cdouble faddeeva_weideman(cdouble z) {
  const auto& t = weideman();
  const cdouble denom = t.scale - kI * z;
  const cdouble zz = (t.scale + kI * z) / denom;
  cdouble poly = 0.0;
  for (int n = kWeidemanTerms - 1; n >= 0; --n) poly = poly * zz + t.coeff[n];
  return 2.0 * poly / (denom * denom) + 1.0 / (std::sqrt(kPi) * denom);
}

// Laplace continued fraction, accurate for large |z| in the upper half plane.
cdouble faddeeva_continued_fraction(cdouble z) {
  constexpr int kDepth = 40;
  cdouble tail = z;
  for (int n = kDepth; n >= 1; --n) tail = z - (0.5 * n) / tail;
  return kI / (std::sqrt(kPi) * tail);
}

}  // namespace

cdouble faddeeva(cdouble z) {
  if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva(-z);
  if (std::abs(z) > 30.0) return faddeeva_continued_fraction(z);
  return faddeeva_weideman(z);
}

GaussHermiteRule gauss_hermite_rule(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Hermite order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(i / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = std::sqrt(kPi) * v0 * v0;
  }
  return rule;
}

cdouble doppler_kernel(double detuning, double k, double total_width, double v_th,
                       KernelMethod method) {
  if (!(total_width > 0.0)) throw std::invalid_argument("total_width must be > 0");
  const double doppler = k * v_th;
  switch (method) {
    case KernelMethod::Faddeeva: {
      if (doppler == 0.0) return 1.0 / cdouble(detuning, total_width);
      const cdouble z = cdouble(detuning, total_width) / doppler;
      return -kI * std::sqrt(kPi) * faddeeva(z) / doppler;
    }
    case KernelMethod::GaussHermite: {
      static const GaussHermiteRule rule = gauss_hermite_rule(64);
      cdouble sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] / cdouble(detuning - doppler * rule.nodes[i], total_width);
      }
      return sum / std::sqrt(kPi);
    }
  }
  throw std::invalid_argument("unknown kernel method");
}

}  // namespace vapor::doppler
