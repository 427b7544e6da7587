#include "vapor/coupled_modes.hpp"

#include <cmath>

namespace vapor::beamprop {

Matrix2cd propagation_matrix(double k_perp, const susceptibility::SusceptibilitySet& chi,
                             const susceptibility::OpticalTransitions& optics) {
  const double kp = optics.k_p();
  const double ks = optics.k_s();
  const double k2 = k_perp * k_perp;
  Matrix2cd a;
  a(0, 0) = -k2 / (2.0 * kp) + 0.5 * kp * chi.chi_p;
  a(0, 1) = 0.5 * kp * chi.chi_sp;
  a(1, 0) = 0.5 * ks * chi.chi_ps;
  a(1, 1) = -k2 / (2.0 * ks) + 0.5 * ks * chi.chi_s;
  return a;
}

Eigenpair dominant_mode(const Matrix2cd& a) {
  const cdouble mean = 0.5 * (a(0, 0) + a(1, 1));
  const cdouble half_diff = 0.5 * (a(0, 0) - a(1, 1));
  const cdouble root = std::sqrt(half_diff * half_diff + a(0, 1) * a(1, 0));
  const cdouble l1 = mean + root;
  const cdouble l2 = mean - root;
  const cdouble lambda = l1.imag() <= l2.imag() ? l1 : l2;

  // (A - lambda) v = 0: pick the better conditioned of the two row-derived candidates.
  Vector2cd v1(a(0, 1), lambda - a(0, 0));
  Vector2cd v2(lambda - a(1, 1), a(1, 0));
  Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
  if (v.norm() == 0.0) {
    // A is a multiple of the identity; any vector is an eigenvector.
    v = Vector2cd(1.0, 0.0);
  }
  return {lambda, v / v.norm()};
}

Matrix2cd transfer_matrix(const Matrix2cd& a, double dz) {
  const Matrix2cd m = kI * dz * a;
  const cdouble mu = 0.5 * m.trace();
  const Matrix2cd n = m - mu * Matrix2cd::Identity();
  // n^2 = delta^2 I for a traceless 2x2 matrix.
  const cdouble delta2 = -n.determinant();
  const cdouble delta = std::sqrt(delta2);

  cdouble c, s;  // cosh(delta), sinh(delta)/delta
  if (std::abs(delta) < 1e-3) {
    c = 1.0 + delta2 / 2.0 * (1.0 + delta2 / 12.0 * (1.0 + delta2 / 30.0));
    s = 1.0 + delta2 / 6.0 * (1.0 + delta2 / 20.0 * (1.0 + delta2 / 42.0));
    const cdouble e = std::exp(mu);
    return e * (c * Matrix2cd::Identity() + s * n);
  }
  // e^mu cosh = (e^(mu+d) + e^(mu-d))/2 keeps large growth and decay finite.
  const cdouble ep = std::exp(mu + delta);
  const cdouble em = std::exp(mu - delta);
  return 0.5 * (ep + em) * Matrix2cd::Identity() + (0.5 * (ep - em) / delta) * n;
}

}  // namespace vapor::beamprop
