#pragma once

#include <numbers>

namespace vibropol::units {

// SI constants (CODATA 2018 exact or recommended values).
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
inline constexpr double kAvogadro = 6.02214076e23;            // 1/mol
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kDebye = 3.33564e-30;                 // C m

// Spectroscopic conversions. 1 eV = 8065.54 cm^-1 is used everywhere a
// photon energy is turned into a wavenumber.
inline constexpr double kCm1PerEv = 8065.54;
inline constexpr double kCm1PerMev = kCm1PerEv / 1000.0;
// hbar in meV ps, for linewidth <-> lifetime.
inline constexpr double kHbarMevPs = 0.65821;

constexpr double ev_to_cm1(double ev) { return ev * kCm1PerEv; }
constexpr double cm1_to_ev(double cm1) { return cm1 / kCm1PerEv; }
constexpr double mev_to_cm1(double mev) { return mev * kCm1PerMev; }
constexpr double cm1_to_mev(double cm1) { return cm1 / kCm1PerMev; }

/// Angular frequency (rad/s) of light with the given wavenumber (cm^-1).
constexpr double cm1_to_rad_per_s(double cm1) {
  return 2.0 * kPi * kSpeedOfLight * cm1 * 100.0;
}

/// Vacuum wavelength in metres.
constexpr double cm1_to_wavelength_m(double cm1) { return 0.01 / cm1; }

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace vibropol::units
