#include "vibropol/polariton.hpp"

#include <cmath>
#include <string>

#include "vibropol/units.hpp"

namespace vibropol {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive, got " + std::to_string(v));
  }
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be non-negative, got " + std::to_string(v));
  }
}

constexpr double kBoltzmannMevPerK = units::kBoltzmann / units::kElementaryCharge * 1e3;

}  // namespace

double VibrationalMode::omega_mev() const { return units::cm1_to_mev(omega_cm1); }
double CavityMode::omega_mev() const { return units::cm1_to_mev(omega_cm1); }

double diffraction_limited_volume(double omega_cm1, double refractive_index) {
  require_positive(omega_cm1, "cavity frequency");
  require_positive(refractive_index, "refractive index");
  const double l = units::cm1_to_wavelength_m(omega_cm1) / refractive_index;
  return l * l * l;
}

double vacuum_field(double omega_c_cm1, double mode_volume_m3) {
  require_positive(omega_c_cm1, "cavity frequency");
  require_positive(mode_volume_m3, "mode volume");
  const double energy = units::kHbar * units::cm1_to_rad_per_s(omega_c_cm1);
  return std::sqrt(energy / (2.0 * units::kVacuumPermittivity * mode_volume_m3));
}

double zero_point_amplitude(double reduced_mass_amu, double omega_v_cm1) {
  require_positive(reduced_mass_amu, "reduced mass");
  require_positive(omega_v_cm1, "vibrational frequency");
  const double mu = reduced_mass_amu * units::kAtomicMassUnit;
  return std::sqrt(units::kHbar / (2.0 * mu * units::cm1_to_rad_per_s(omega_v_cm1)));
}

double single_coupling_ev(const VibrationalMode& mode, const CavityMode& cavity) {
  require_non_negative(mode.dipole_debye, "transition dipole");
  const double field = vacuum_field(cavity.omega_cm1, cavity.mode_volume_m3);
  return mode.dipole_debye * units::kDebye * field / units::kElementaryCharge;
}

double collective_splitting(double single, double count) {
  require_non_negative(count, "oscillator count");
  return single * std::sqrt(count);
}

double effective_concentration(double splitting, double single, double mode_volume_m3) {
  require_positive(single, "single-oscillator coupling");
  require_positive(mode_volume_m3, "mode volume");
  const double ratio = splitting / single;
  return ratio * ratio / (mode_volume_m3 * 1e6);
}

CoupledModeResult coupled_frequencies(double omega_c, double omega_v, double splitting,
                                      CouplingModel model) {
  require_positive(omega_c, "cavity frequency");
  require_positive(omega_v, "vibrational frequency");
  require_non_negative(splitting, "splitting");

  CoupledModeResult out;
  const double detuning = omega_c - omega_v;
  const double root = std::hypot(detuning, splitting);

  // Eigenvector of the upper branch is (cos a, sin a) in (photon, vibration).
  if (root == 0.0) {
    out.upper = {0.5, 0.5};
  } else {
    const double photon_upper = 0.5 * (1.0 + detuning / root);
    out.upper = {photon_upper, 1.0 - photon_upper};
  }
  out.lower = {out.upper.vibration, out.upper.photon};

  if (model == CouplingModel::rwa) {
    const double mean = 0.5 * (omega_c + omega_v);
    out.omega_upper = mean + 0.5 * root;
    out.omega_lower = mean - 0.5 * root;
  } else {
    const double wc2 = omega_c * omega_c;
    const double wv2 = omega_v * omega_v;
    const double coupling = splitting * splitting * omega_c * omega_v;
    if (coupling >= wc2 * wv2) {
      throw UltraStrongCouplingError(
          "splitting too large for the two-mode model: lower normal mode is not real");
    }
    // w^4 - (wc2 + wv2) w^2 + wc2 wv2 - coupling = 0
    const double disc = std::sqrt((wc2 - wv2) * (wc2 - wv2) + 4.0 * coupling);
    const double upper2 = 0.5 * (wc2 + wv2 + disc);
    // Stable form of the smaller root.
    const double lower2 = (wc2 * wv2 - coupling) / upper2;
    out.omega_upper = std::sqrt(upper2);
    out.omega_lower = std::sqrt(lower2);
  }
  out.splitting_cm1 = out.omega_upper - out.omega_lower;
  out.splitting_mev = units::cm1_to_mev(out.splitting_cm1);
  return out;
}

double CavityDispersion::internal_angle_rad(double angle_deg) const {
  if (!(std::abs(angle_deg) < 90.0)) {
    throw DomainError("incidence angle must lie in (-90, 90) degrees");
  }
  const double s = ambient_index * std::sin(units::deg_to_rad(angle_deg)) / n_eff;
  if (std::abs(s) >= 1.0) throw DomainError("no propagating internal angle");
  return std::asin(s);
}

double CavityDispersion::omega_at(double angle_deg) const {
  require_positive(n_eff, "effective index");
  require_positive(thickness_nm, "cavity thickness");
  if (order < 1) throw DomainError("cavity mode order must be >= 1");
  return order * 1e7 / (2.0 * n_eff * thickness_nm * std::cos(internal_angle_rad(angle_deg)));
}

std::vector<DispersionPoint> anticrossing_dispersion(const CavityDispersion& cavity,
                                                     double omega_v, double splitting,
                                                     std::span<const double> angles_deg,
                                                     CouplingModel model) {
  std::vector<DispersionPoint> out;
  out.reserve(angles_deg.size());
  for (const double angle : angles_deg) {
    const double wc = cavity.omega_at(angle);
    const auto r = coupled_frequencies(wc, omega_v, splitting, model);
    out.push_back({angle, wc, r.omega_upper, r.omega_lower});
  }
  return out;
}

double thermal_occupation(double energy_mev, double temperature_k) {
  require_positive(energy_mev, "transition energy");
  require_non_negative(temperature_k, "temperature");
  if (temperature_k == 0.0) return 0.0;
  return std::exp(-energy_mev / (kBoltzmannMevPerK * temperature_k));
}

double bond_density(double mass_density_g_cm3, double monomer_mass_g_mol,
                    double bonds_per_monomer) {
  require_positive(mass_density_g_cm3, "mass density");
  require_positive(monomer_mass_g_mol, "monomer mass");
  require_positive(bonds_per_monomer, "bonds per monomer");
  return mass_density_g_cm3 / monomer_mass_g_mol * units::kAvogadro * bonds_per_monomer;
}

double quality_factor(double omega, double fwhm) {
  require_positive(omega, "frequency");
  require_positive(fwhm, "linewidth");
  return omega / fwhm;
}

double dephasing_time_ps(double fwhm_mev) {
  require_positive(fwhm_mev, "linewidth");
  return units::kHbarMevPs / fwhm_mev;
}

bool is_strong_coupling(double splitting_mev, double vibration_fwhm_mev,
                        double cavity_fwhm_mev) {
  return splitting_mev > 0.5 * (vibration_fwhm_mev + cavity_fwhm_mev);
}

}  // namespace vibropol
