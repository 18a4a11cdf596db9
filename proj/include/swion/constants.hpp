#pragma once

#include <numbers>

namespace swion::constants {

// CODATA 2018 exact/recommended values, SI.
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
inline constexpr double kHbar = 1.054571817e-34;                // J s
inline constexpr double kBoltzmann = 1.380649e-23;              // J/K
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;    // kg

inline constexpr double kCa40MassAmu = 39.9625909;

// e^2 / (4 pi eps0), J m
inline constexpr double kCoulombConstantE2 =
    kElementaryCharge * kElementaryCharge / (4.0 * std::numbers::pi * kVacuumPermittivity);

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace swion::constants
