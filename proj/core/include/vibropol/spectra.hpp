#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vibropol/errors.hpp"
#include "vibropol/tmm.hpp"

namespace vibropol {

struct Peak {
  double center = 0.0;  // cm^-1
  double height = 0.0;
  double fwhm = 0.0;    // cm^-1, width at half prominence
  double prominence = 0.0;
  std::size_t index = 0;  // grid index of the sampled maximum
};

struct PeakOptions {
  /// Absolute prominence threshold. When unset, `relative_prominence` times
  /// the dynamic range of the analysed values is used.
  std::optional<double> min_prominence;
  double relative_prominence = 0.05;
  /// A maximum must dominate this many neighbours on each side.
  int window = 1;

  bool operator==(const PeakOptions&) const = default;
};

/// Local maxima with their prominence (height above the higher of the two
/// bounding minima) and width at half prominence, found by linear
/// interpolation. Maxima on the first or last grid point are discarded.
/// Centre and height are refined by a parabola through the three samples
/// around the maximum.
std::vector<Peak> find_peaks(std::span<const double> k, std::span<const double> values,
                             const PeakOptions& options = {});

struct SpectralWindow {
  double k_lo = 0.0;
  double k_hi = std::numeric_limits<double>::infinity();

  bool operator==(const SpectralWindow&) const = default;
};

enum class Channel { T, R, A };
char to_char(Channel c);
Channel channel_from_string(const std::string& s);

struct SplittingReport {
  Channel channel = Channel::T;
  double omega_upper = 0.0;
  double omega_lower = 0.0;
  double splitting_cm1 = 0.0;
  double splitting_mev = 0.0;
  Peak upper;
  Peak lower;
};

class PeakCountError : public DomainError {
 public:
  PeakCountError(std::size_t found, const std::string& what)
      : DomainError(what), found_(found) {}
  std::size_t found() const { return found_; }

 private:
  std::size_t found_;
};

/// The values a channel is searched in: T and A as-is, R as 1 - R so that
/// reflection dips become peaks.
std::vector<double> channel_signal(const Spectrum& spectrum, Channel channel);

/// Two-peak splitting inside `window`. Throws PeakCountError unless exactly
/// two peaks are found.
SplittingReport extract_splitting(const Spectrum& spectrum, Channel channel,
                                  const SpectralWindow& window = {},
                                  const PeakOptions& options = {});
SplittingReport extract_splitting(std::span<const double> k, std::span<const double> signal,
                                  Channel channel, const SpectralWindow& window = {},
                                  const PeakOptions& options = {});

// ---------------------------------------------------------------------------
// Single-band Lorentzian absorbance fit.

/// baseline + f k Gamma / ((k^2 - k0^2)^2 + k^2 Gamma^2), which is the
/// imaginary part of a single Lorentz oscillator's permittivity over a
/// constant background.
double lorentz_band_profile(double k, double strength, double center, double damping,
                            double baseline);

struct LorentzBandFit {
  double strength = 0.0;
  double center = 0.0;
  double damping = 0.0;
  double baseline = 0.0;
  double residual_rms = 0.0;
  double peak_height = 0.0;
  bool poor_fit = false;  // residual_rms above the relative threshold
  int iterations = 0;
  bool converged = false;
};

struct BandFitOptions {
  int max_iterations = 2000;
  double relative_tolerance = 1e-12;
  /// poor_fit when residual_rms exceeds this fraction of the fitted height.
  double poor_fit_threshold = 0.02;
};

class BandFitNotConverged : public std::runtime_error {
 public:
  explicit BandFitNotConverged(LorentzBandFit best)
      : std::runtime_error("band fit did not converge"), best_(best) {}
  const LorentzBandFit& best() const { return best_; }

 private:
  LorentzBandFit best_;
};

LorentzBandFit fit_lorentzian_band(std::span<const double> k, std::span<const double> values,
                                   const BandFitOptions& options = {});

// ---------------------------------------------------------------------------
// Angle-resolved dispersion.

struct DispersionRow {
  double angle_deg = 0.0;
  double omega_upper = std::numeric_limits<double>::quiet_NaN();
  double omega_lower = std::numeric_limits<double>::quiet_NaN();
  std::size_t peaks_found = 0;
  bool ok = false;  // false when the peak count was not exactly two
  double omega_cavity = std::numeric_limits<double>::quiet_NaN();
  double omega_vibration = std::numeric_limits<double>::quiet_NaN();

  double splitting() const { return omega_upper - omega_lower; }
};

struct DispersionTable {
  Channel channel = Channel::T;
  std::vector<DispersionRow> rows;

  std::size_t usable_rows() const;
};

DispersionTable build_dispersion(std::span<const Spectrum> spectra, Channel channel,
                                 const SpectralWindow& window = {},
                                 const PeakOptions& options = {});

struct CoupledModelFit {
  double omega_v = 0.0;
  double n_eff = 0.0;
  double thickness_nm = 0.0;
  double splitting = 0.0;
  double loss = 0.0;
  std::vector<double> row_residual_rms;  // one per usable row
  int iterations = 0;
  bool converged = false;
};

/// Fits the two-mode rwa branches, with the cavity following
/// 1e7 / (2 n d cos(theta_int)), to every usable row of the table.
CoupledModelFit fit_coupled_model(const DispersionTable& table, double ambient_index = 1.0);

}  // namespace vibropol
