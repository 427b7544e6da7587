#pragma once

#include <complex>
#include <numbers>

namespace vapor {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cdouble kI{0.0, 1.0};

inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

}  // namespace vapor
