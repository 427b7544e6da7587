#pragma once

#include <array>
#include <functional>
#include <optional>

#include "vapor/atom.hpp"
#include "vapor/constants.hpp"
#include "vapor/doppler.hpp"

// Momentum-space linear (chi_p, chi_s) and four-wave-mixing (chi_sp, chi_ps)
// susceptibilities of a thermal vapor in the Dicke-narrowed regime.
namespace vapor::susceptibility {

struct ThermalParameters {
  double v_th = 0.0;     ///< m/s, sqrt(2 kB T / m)
  double gamma_c = 0.0;  ///< velocity-changing collision rate, rad/s
  double delta_k = 0.0;  ///< |k_p - k_c1|, 1/m
  double n0 = 0.0;       ///< atoms / m^3
  std::optional<double> temperature;  ///< K, informational when v_th is supplied

  static double thermal_velocity(double temperature, double mass_kg);

  /// delta_k v_th / (gamma_c + p/2); the Dicke regime requires this << 1.
  double dicke_ratio(double pump_p) const;
  bool dicke_warning(double pump_p) const { return dicke_ratio(pump_p) >= 0.1; }
};

struct OpticalTransitions {
  double lambda_p = 0.0;  ///< m
  double lambda_s = 0.0;  ///< m

  double k_p() const { return kTwoPi / lambda_p; }
  double k_s() const { return kTwoPi / lambda_s; }
  /// Geometric mean of k_p and k_s.
  double k_mean() const;
};

/// Everything about the medium apart from the atom's internal state.
struct MediumParameters {
  atom::LevelScheme scheme;
  atom::DriveConfig drive;
  ThermalParameters thermal;
  OpticalTransitions optics;

  void validate() const;
};

enum class KMode {
  Complex,   ///< keep K31, K41 complex
  RealPart,  ///< near one-photon resonance: drop Im K
};

struct KFactors {
  cdouble g31, g41;  ///< Doppler kernels, s
  cdouble k31, k41;  ///< coupling factors iG/(1 - i gamma_c G), s
  bool real_part_only = false;
  double dropped31 = 0.0;  ///< |Im K31|/|K31| before any truncation
  double dropped41 = 0.0;
};

/// Doppler kernels and coupling factors at two-photon detuning `delta`. The
/// one-photon detunings follow from phase matching: Delta_p = delta + Delta_c1,
/// Delta_s = delta + Delta_c2.
KFactors k_factors(const MediumParameters& medium, double delta, KMode mode = KMode::Complex,
                   doppler::KernelMethod method = doppler::KernelMethod::Faddeeva);

enum class Channel { P = 0, S = 1, SP = 2, PS = 3 };

struct SusceptibilitySet {
  cdouble chi_p, chi_s, chi_sp, chi_ps;

  cdouble operator[](Channel c) const;
  cdouble& operator[](Channel c);
};

inline constexpr std::array<Channel, 4> kAllChannels = {Channel::P, Channel::S, Channel::SP,
                                                        Channel::PS};
const char* channel_name(Channel c);

/// Rates derived from the K factors and the drive.
struct ResponseRates {
  cdouble gamma_c1_power;  ///< K31 |Omega_c1|^2
  cdouble gamma_c2_power;  ///< K41 |Omega_c2|^2
  cdouble gamma_a;         ///< K31 Omega_c1^* Omega_c2
  cdouble gamma_b;         ///< K41 Omega_c1 Omega_c2^*
  cdouble gamma1;          ///< p/2 + gamma21 + Gamma_c1 + Gamma_c2
  double gamma_c1 = 0.0;   ///< ground coherence decay incl. collisions: gamma_c + p/2 + gamma21
};

ResponseRates response_rates(const MediumParameters& medium, const KFactors& k);

/// Per-channel structure chi(k) = pre (background + numerator/(i delta - Gamma1 - D k^2)).
struct ChannelTerms {
  cdouble prefactor;
  cdouble background;
  cdouble numerator;
};

/// Susceptibilities at fixed state, medium, detuning and K factors.
class SusceptibilityModel {
 public:
  SusceptibilityModel(const atom::DensityMatrix& state, const MediumParameters& medium,
                      double delta, const KFactors& k);

  SusceptibilitySet at(double k_perp) const;
  /// d chi / d(k_perp^2) at k_perp = 0, in m^2.
  SusceptibilitySet slope() const;

  const ChannelTerms& terms(Channel c) const { return terms_[static_cast<int>(c)]; }
  const ResponseRates& rates() const { return rates_; }
  const KFactors& k_factors() const { return k_; }
  cdouble diffusion() const { return diffusion_; }
  double delta() const { return delta_; }

  /// Same model with the atomic density multiplied by `factor`.
  SusceptibilityModel scaled(double factor) const;

 private:
  ChannelTerms terms_[4];
  ResponseRates rates_;
  KFactors k_;
  cdouble diffusion_;
  cdouble pole_;  // i delta - Gamma1
  double delta_;
};

/// chi_full: evaluate all four susceptibilities at one transverse wavenumber.
SusceptibilitySet chi_full(double k_perp, const atom::DensityMatrix& state,
                           const MediumParameters& medium, double delta,
                           KMode mode = KMode::Complex);

/// The unpumped closed form in which rho_11 = 1 is the only non-zero element.
SusceptibilitySet chi_no_pump(double k_perp, const MediumParameters& medium, double delta,
                              const KFactors& k);

enum class DetuningRule {
  Alpha,         ///< -alpha Gamma1 for every pump rate
  LegacyNoPump,  ///< -Gamma0 when p = 0, otherwise -alpha Gamma1
};

/// Two-photon detuning that removes the k_perp^2 dependence of Im chi. K
/// depends weakly on the detuning, so the rule is iterated to self-consistency.
double optimal_detuning(const MediumParameters& medium, KMode mode = KMode::Complex,
                        DetuningRule rule = DetuningRule::Alpha);

struct DickeCoefficients {
  SusceptibilitySet chi0;  ///< chi at k_perp = 0
  SusceptibilitySet chi1;  ///< chi ~ chi0 + chi1 (k_perp/k1)^2
  double alpha = 0.0;
  double k1 = 0.0;
  double delta_opt = 0.0;
};

DickeCoefficients chi_dicke(const atom::DensityMatrix& state, const MediumParameters& medium,
                            double delta, KMode mode = KMode::Complex);

struct BandwidthScales {
  double k0 = 0.0;  ///< sqrt(Gamma0 gamma_c) / v_th, unpumped scale
  double k1 = 0.0;  ///< sqrt(Gamma1 gamma_c1) / v_th
};

BandwidthScales bandwidth_scales(const MediumParameters& medium, const KFactors& k);

}  // namespace vapor::susceptibility
