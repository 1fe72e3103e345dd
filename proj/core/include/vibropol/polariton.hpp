#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vibropol/errors.hpp"

namespace vibropol {

/// A molecular vibration coupled through its effective transition dipole.
/// The dipole stands for the orientation factor, the dipole derivative and
/// the zero-point amplitude collapsed into one magnitude.
struct VibrationalMode {
  double omega_cm1 = 0.0;
  double dipole_debye = 0.0;
  std::optional<double> reduced_mass_amu;
  double damping_fwhm_mev = 0.0;

  double omega_mev() const;
  bool operator==(const VibrationalMode&) const = default;
};

struct CavityMode {
  double omega_cm1 = 0.0;
  double mode_volume_m3 = 0.0;
  double kappa_fwhm_mev = 0.0;

  double omega_mev() const;
};

/// Diffraction-limited mode volume (lambda/n)^3 in m^3.
double diffraction_limited_volume(double omega_cm1, double refractive_index);

/// sqrt(hbar omega / (2 eps0 V)) in V/m.
double vacuum_field(double omega_c_cm1, double mode_volume_m3);

/// sqrt(hbar / (2 mu omega)) in metres.
double zero_point_amplitude(double reduced_mass_amu, double omega_v_cm1);

/// Single-oscillator coupling energy d * E_vac, in eV.
double single_coupling_ev(const VibrationalMode& mode, const CavityMode& cavity);

/// Collective enhancement hbar*Omega*sqrt(N); units follow `single`.
double collective_splitting(double single, double count);

/// Effective number density of coupled oscillators (cm^-3) that would turn
/// `single` into `splitting` inside `mode_volume_m3`. Both energies must use
/// the same unit.
double effective_concentration(double splitting, double single, double mode_volume_m3);

enum class CouplingModel { rwa, full };

struct BranchWeights {
  double photon = 0.0;
  double vibration = 0.0;
};

struct CoupledModeResult {
  double omega_upper = 0.0;  // cm^-1
  double omega_lower = 0.0;
  double splitting_cm1 = 0.0;
  double splitting_mev = 0.0;
  BranchWeights upper;
  BranchWeights lower;
};

/// Raised when the lower normal mode of the full two-oscillator model goes
/// soft (splitting^2 >= omega_c * omega_v).
class UltraStrongCouplingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Two-mode polariton frequencies. `splitting` is the resonant branch
/// separation in cm^-1. rwa diagonalises [[wc, S/2], [S/2, wv]]; full solves
/// (w^2 - wc^2)(w^2 - wv^2) = S^2 wc wv, the normal-mode equation of the
/// quadrature Hamiltonian with S = 2 Omega sqrt(N). Mixing weights always
/// come from the rwa eigenvectors.
CoupledModeResult coupled_frequencies(double omega_c, double omega_v, double splitting,
                                      CouplingModel model = CouplingModel::rwa);

/// Planar cavity mode estimate order * 1e7 / (2 n d cos(theta_int)) cm^-1,
/// d in nm. The internal angle follows from Snell's law out of the ambient.
struct CavityDispersion {
  double n_eff = 1.0;
  double thickness_nm = 0.0;
  int order = 1;
  double ambient_index = 1.0;

  double internal_angle_rad(double angle_deg) const;
  double omega_at(double angle_deg) const;
};

struct DispersionPoint {
  double angle_deg = 0.0;
  double omega_cavity = 0.0;
  double omega_upper = 0.0;
  double omega_lower = 0.0;
};

std::vector<DispersionPoint> anticrossing_dispersion(const CavityDispersion& cavity,
                                                     double omega_v, double splitting,
                                                     std::span<const double> angles_deg,
                                                     CouplingModel model = CouplingModel::rwa);

/// Boltzmann factor exp(-E / kT); 0 at T = 0.
double thermal_occupation(double energy_mev, double temperature_k);

/// Number density (cm^-3) of bonds in a homopolymer.
double bond_density(double mass_density_g_cm3, double monomer_mass_g_mol,
                    double bonds_per_monomer);

double quality_factor(double omega, double fwhm);

/// hbar / FWHM in ps.
double dephasing_time_ps(double fwhm_mev);

/// Splitting exceeds the mean of the two loss rates.
bool is_strong_coupling(double splitting_mev, double vibration_fwhm_mev,
                        double cavity_fwhm_mev);

}  // namespace vibropol
