#include "vapor/susceptibility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vapor::susceptibility {

double ThermalParameters::thermal_velocity(double temperature, double mass_kg) {
  if (!(temperature > 0.0) || !(mass_kg > 0.0)) {
    throw std::invalid_argument("temperature and mass must be positive");
  }
  return std::sqrt(2.0 * kBoltzmann * temperature / mass_kg);
}

double ThermalParameters::dicke_ratio(double pump_p) const {
  return delta_k * v_th / (gamma_c + 0.5 * pump_p);
}

double OpticalTransitions::k_mean() const { return std::sqrt(k_p() * k_s()); }

void MediumParameters::validate() const {
  scheme.validate();
  drive.validate();
  if (!(thermal.v_th > 0.0)) throw std::invalid_argument("v_th must be > 0");
  if (!(thermal.gamma_c >= 0.0)) throw std::invalid_argument("gamma_c must be >= 0");
  if (!(thermal.n0 > 0.0)) throw std::invalid_argument("n0 must be > 0");
  if (!(optics.lambda_p > 0.0) || !(optics.lambda_s > 0.0)) {
    throw std::invalid_argument("wavelengths must be > 0");
  }
}

cdouble SusceptibilitySet::operator[](Channel c) const {
  switch (c) {
    case Channel::P: return chi_p;
    case Channel::S: return chi_s;
    case Channel::SP: return chi_sp;
    case Channel::PS: return chi_ps;
  }
  throw std::invalid_argument("bad channel");
}

cdouble& SusceptibilitySet::operator[](Channel c) {
  switch (c) {
    case Channel::P: return chi_p;
    case Channel::S: return chi_s;
    case Channel::SP: return chi_sp;
    case Channel::PS: return chi_ps;
  }
  throw std::invalid_argument("bad channel");
}

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::P: return "p";
    case Channel::S: return "s";
    case Channel::SP: return "sp";
    case Channel::PS: return "ps";
  }
  return "?";
}

KFactors k_factors(const MediumParameters& medium, double delta, KMode mode,
                   doppler::KernelMethod method) {
  const auto& th = medium.thermal;
  const auto& sc = medium.scheme;
  const auto& dr = medium.drive;
  const double detuning_p = delta + dr.delta_c1;
  const double detuning_s = delta + dr.delta_c2;
  const double width3 = 0.5 * dr.pump_p + 0.5 * sc.total3() + th.gamma_c;
  const double width4 = 0.5 * dr.pump_p + 0.5 * sc.total4() + th.gamma_c;

  KFactors k;
  k.g31 = doppler::doppler_kernel(detuning_p, medium.optics.k_p(), width3, th.v_th, method);
  k.g41 = doppler::doppler_kernel(detuning_s, medium.optics.k_s(), width4, th.v_th, method);
  k.k31 = kI * k.g31 / (1.0 - kI * th.gamma_c * k.g31);
  k.k41 = kI * k.g41 / (1.0 - kI * th.gamma_c * k.g41);
  k.dropped31 = std::abs(k.k31.imag()) / std::abs(k.k31);
  k.dropped41 = std::abs(k.k41.imag()) / std::abs(k.k41);
  if (mode == KMode::RealPart) {
    k.k31 = k.k31.real();
    k.k41 = k.k41.real();
    k.real_part_only = true;
  }
  return k;
}

ResponseRates response_rates(const MediumParameters& medium, const KFactors& k) {
  const auto& dr = medium.drive;
  ResponseRates r;
  r.gamma_c1_power = k.k31 * std::norm(dr.omega_c1);
  r.gamma_c2_power = k.k41 * std::norm(dr.omega_c2);
  r.gamma_a = k.k31 * std::conj(dr.omega_c1) * dr.omega_c2;
  r.gamma_b = k.k41 * dr.omega_c1 * std::conj(dr.omega_c2);
  r.gamma1 = 0.5 * dr.pump_p + medium.scheme.gamma21 + r.gamma_c1_power + r.gamma_c2_power;
  r.gamma_c1 = medium.thermal.gamma_c + 0.5 * dr.pump_p + medium.scheme.gamma21;
  return r;
}

SusceptibilityModel::SusceptibilityModel(const atom::DensityMatrix& rho,
                                         const MediumParameters& medium, double delta,
                                         const KFactors& k)
    : rates_(response_rates(medium, k)), k_(k), delta_(delta) {
  const auto& dr = medium.drive;
  const auto& op = medium.optics;
  const double n0 = medium.thermal.n0;
  const double v2 = medium.thermal.v_th * medium.thermal.v_th;

  diffusion_ = v2 / cdouble(rates_.gamma_c1, -delta);
  pole_ = kI * delta - rates_.gamma1;

  const double lp3 = op.lambda_p * op.lambda_p * op.lambda_p;
  const double ls3 = op.lambda_s * op.lambda_s * op.lambda_s;
  const double norm = 3.0 / (8.0 * kPi * kPi);
  const cdouble pre_p = kI * norm * lp3 * k.k31 * n0 * medium.scheme.gamma31;
  const cdouble pre_s = kI * norm * ls3 * k.k41 * n0 * medium.scheme.gamma41;

  const cdouble d13 = rho(1, 1) - rho(3, 3);
  const cdouble d14 = rho(1, 1) - rho(4, 4);
  const auto& r = rates_;

  terms_[static_cast<int>(Channel::P)] = {
      pre_p, d13, r.gamma_c1_power * d13 + kI * dr.omega_c1 * rho(2, 3) - r.gamma_b * rho(4, 3)};
  terms_[static_cast<int>(Channel::S)] = {
      pre_s, d14, r.gamma_c2_power * d14 + kI * dr.omega_c2 * rho(2, 4) - r.gamma_a * rho(3, 4)};
  terms_[static_cast<int>(Channel::SP)] = {
      pre_p, -rho(3, 4),
      r.gamma_b * d14 + kI * dr.omega_c1 * rho(2, 4) - r.gamma_c1_power * rho(3, 4)};
  terms_[static_cast<int>(Channel::PS)] = {
      pre_s, -rho(4, 3),
      r.gamma_a * d13 + kI * dr.omega_c2 * rho(2, 3) - r.gamma_c2_power * rho(4, 3)};
}

SusceptibilitySet SusceptibilityModel::at(double k_perp) const {
  const cdouble denom = pole_ - diffusion_ * (k_perp * k_perp);
  SusceptibilitySet out;
  for (Channel c : kAllChannels) {
    const auto& t = terms(c);
    out[c] = t.prefactor * (t.background + t.numerator / denom);
  }
  return out;
}

SusceptibilitySet SusceptibilityModel::slope() const {
  SusceptibilitySet out;
  for (Channel c : kAllChannels) {
    const auto& t = terms(c);
    out[c] = t.prefactor * t.numerator * diffusion_ / (pole_ * pole_);
  }
  return out;
}

SusceptibilityModel SusceptibilityModel::scaled(double factor) const {
  SusceptibilityModel copy = *this;
  // Prefactors are the only density-dependent quantities.
  for (auto& t : copy.terms_) t.prefactor *= factor;
  return copy;
}

SusceptibilitySet chi_full(double k_perp, const atom::DensityMatrix& state,
                           const MediumParameters& medium, double delta, KMode mode) {
  return SusceptibilityModel(state, medium, delta, k_factors(medium, delta, mode)).at(k_perp);
}

SusceptibilitySet chi_no_pump(double k_perp, const MediumParameters& medium, double delta,
                              const KFactors& k) {
  const auto& dr = medium.drive;
  const auto& op = medium.optics;
  const auto& th = medium.thermal;
  const double gamma21 = medium.scheme.gamma21;

  const cdouble gc1 = k.k31 * std::norm(dr.omega_c1);
  const cdouble gc2 = k.k41 * std::norm(dr.omega_c2);
  const cdouble ga = k.k31 * std::conj(dr.omega_c1) * dr.omega_c2;
  const cdouble gb = k.k41 * dr.omega_c1 * std::conj(dr.omega_c2);
  const cdouble gamma0 = gamma21 + gc1 + gc2;
  const cdouble d0 = th.v_th * th.v_th / cdouble(th.gamma_c + gamma21, -delta);
  const cdouble denom = kI * delta - gamma0 - d0 * (k_perp * k_perp);

  const double norm = 3.0 / (8.0 * kPi * kPi);
  const cdouble pre_p =
      kI * norm * std::pow(op.lambda_p, 3) * k.k31 * th.n0 * medium.scheme.gamma31;
  const cdouble pre_s =
      kI * norm * std::pow(op.lambda_s, 3) * k.k41 * th.n0 * medium.scheme.gamma41;

  SusceptibilitySet out;
  out.chi_p = pre_p * (1.0 + gc1 / denom);
  out.chi_s = pre_s * (1.0 + gc2 / denom);
  out.chi_sp = pre_p * gb / denom;
  out.chi_ps = pre_s * ga / denom;
  return out;
}

double optimal_detuning(const MediumParameters& medium, KMode mode, DetuningRule rule) {
  const bool legacy = rule == DetuningRule::LegacyNoPump && medium.drive.pump_p == 0.0;
  double delta = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const ResponseRates r = response_rates(medium, k_factors(medium, delta, mode));
    const double g1 = r.gamma1.real();
    double next;
    if (legacy) {
      next = -g1;  // with p = 0, Gamma1 reduces to Gamma0
    } else {
      const double alpha = std::sqrt(r.gamma_c1 / (2.0 * g1 + r.gamma_c1));
      next = -alpha * g1;
    }
    if (std::abs(next - delta) <= 1e-14 * std::abs(next)) return next;
    delta = next;
  }
  return delta;
}

DickeCoefficients chi_dicke(const atom::DensityMatrix& state, const MediumParameters& medium,
                            double delta, KMode mode) {
  const KFactors k = k_factors(medium, delta, mode);
  const SusceptibilityModel model(state, medium, delta, k);
  const auto& r = model.rates();
  const double g1 = r.gamma1.real();

  DickeCoefficients out;
  out.alpha = std::sqrt(r.gamma_c1 / (2.0 * g1 + r.gamma_c1));
  out.k1 = std::sqrt(g1 * r.gamma_c1) / medium.thermal.v_th;
  out.delta_opt = optimal_detuning(medium, mode);
  out.chi0 = model.at(0.0);
  const SusceptibilitySet s = model.slope();
  for (Channel c : kAllChannels) out.chi1[c] = s[c] * (out.k1 * out.k1);
  return out;
}

BandwidthScales bandwidth_scales(const MediumParameters& medium, const KFactors& k) {
  const ResponseRates r = response_rates(medium, k);
  const double v = medium.thermal.v_th;
  const double gamma0 = (medium.scheme.gamma21 + r.gamma_c1_power + r.gamma_c2_power).real();
  BandwidthScales out;
  out.k0 = std::sqrt(gamma0 * medium.thermal.gamma_c) / v;
  out.k1 = std::sqrt(r.gamma1.real() * r.gamma_c1) / v;
  return out;
}

}  // namespace vapor::susceptibility
