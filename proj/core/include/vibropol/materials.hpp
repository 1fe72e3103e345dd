#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace vibropol {

using Complex = std::complex<double>;

// All permittivities use the e^{-i omega t} convention: a passive medium has
// Im eps >= 0 and its refractive index has Im n >= 0.

/// One damped harmonic band, parameters in wavenumber units.
struct LorentzOscillator {
  double strength = 0.0;   // f_j, cm^-2
  double center = 0.0;     // k0_j, cm^-1
  double damping = 0.0;    // Gamma_j, cm^-1 (FWHM of Im eps)
  std::string label;

  bool operator==(const LorentzOscillator&) const = default;
};

/// eps(k) = eps_B - sum_j f_j / (k^2 - k0_j^2 + i k Gamma_j)
struct LorentzMedium {
  double eps_background = 1.0;
  std::vector<LorentzOscillator> oscillators;

  bool operator==(const LorentzMedium&) const = default;
};

struct BoundElectronTerm {
  double strength = 0.0;  // f_j
  double damping = 0.0;   // Gamma_j, eV
  double center = 0.0;    // omega_j, eV

  bool operator==(const BoundElectronTerm&) const = default;
};

/// Lorentz-Drude metal; all energies in eV. The free-electron damping used
/// in evaluation is damping_multiplier * gamma0, which is how size-dependent
/// surface scattering in thin films is represented.
struct DrudeLorentzMetal {
  double plasma_frequency = 0.0;  // omega_p, eV
  double free_strength = 0.0;     // f0
  double gamma0 = 0.0;            // eV
  std::vector<BoundElectronTerm> bound_terms;
  double damping_multiplier = 1.0;

  double effective_damping() const { return damping_multiplier * gamma0; }
  bool operator==(const DrudeLorentzMetal&) const = default;
};

/// Dispersionless, lossless medium.
struct ConstantMedium {
  double eps = 1.0;

  bool operator==(const ConstantMedium&) const = default;
};

using DielectricModel = std::variant<ConstantMedium, LorentzMedium, DrudeLorentzMetal>;

/// Throws ConfigError if any documented parameter invariant is violated.
void validate(const LorentzOscillator& osc);
void validate(const LorentzMedium& medium);
void validate(const DrudeLorentzMetal& metal);
void validate(const DielectricModel& model);

Complex epsilon_lorentz(const LorentzMedium& medium, double k);
Complex epsilon_drude_lorentz(const DrudeLorentzMetal& metal, double k);
Complex epsilon(const DielectricModel& model, double k);

/// Principal square root folded onto the passive branch (Im n >= 0, Re n >= 0).
Complex passive_sqrt(Complex z);

Complex refractive_index(const DielectricModel& model, double k);

/// True when the model can never absorb (a constant medium, or a Lorentz
/// medium whose oscillators all have zero strength).
bool is_lossless(const DielectricModel& model);

/// Copy with every Lorentz oscillator strength set to zero; the background
/// response is kept. Other models are returned unchanged.
DielectricModel without_vibrations(const DielectricModel& model);

/// Gold parameters from Rakic et al. (Appl. Opt. 37, 5271, 1998), eV units.
DrudeLorentzMetal rakic_gold(double damping_multiplier = 1.0);

/// PVAc carbonyl stretch band: f = 5e4 cm^-2, k0 = 1739 cm^-1, Gamma = 13
/// cm^-1 on a background index of 1.41.
LorentzMedium pvac_carbonyl();

}  // namespace vibropol
