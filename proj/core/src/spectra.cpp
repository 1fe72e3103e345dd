#include "vibropol/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vibropol/lsq.hpp"
#include "vibropol/polariton.hpp"
#include "vibropol/units.hpp"

namespace vibropol {

namespace {

double interpolate_crossing(double x0, double y0, double x1, double y1, double level) {
  if (y1 == y0) return 0.5 * (x0 + x1);
  return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

std::vector<Peak> find_peaks(std::span<const double> k, std::span<const double> values,
                             const PeakOptions& options) {
  const std::size_t n = values.size();
  if (k.size() != n) throw DomainError("wavenumber and value arrays differ in length");
  if (n < 3) throw DomainError("peak search needs at least 3 points");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double range = *hi_it - *lo_it;
  const double threshold = options.min_prominence.value_or(options.relative_prominence * range);
  if (!(range > 0.0)) return {};

  const std::size_t window = static_cast<std::size_t>(std::max(1, options.window));
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = values[i];
    if (!(y > values[i - 1] && y >= values[i + 1])) continue;
    // Plateau handling: skip to the end of equal values, reject if it falls
    // off the grid or rises again.
    std::size_t plateau_end = i;
    while (plateau_end + 1 < n && values[plateau_end + 1] == y) ++plateau_end;
    if (plateau_end + 1 >= n || values[plateau_end + 1] > y) continue;

    bool dominant = true;
    for (std::size_t d = 1; d <= window && dominant; ++d) {
      if (i >= d && values[i - d] > y) dominant = false;
      if (plateau_end + d < n && values[plateau_end + d] > y) dominant = false;
    }
    if (!dominant) continue;

    // Prominence bases: lowest value before reaching something higher.
    std::size_t left = i;
    double left_min = y;
    for (std::size_t j = i; j-- > 0;) {
      if (values[j] > y) break;
      if (values[j] < left_min) {
        left_min = values[j];
        left = j;
      }
    }
    std::size_t right = plateau_end;
    double right_min = y;
    for (std::size_t j = plateau_end + 1; j < n; ++j) {
      if (values[j] > y) break;
      if (values[j] < right_min) {
        right_min = values[j];
        right = j;
      }
    }
    const double prominence = y - std::max(left_min, right_min);
    if (!(prominence >= threshold) || prominence <= 0.0) continue;

    const double level = y - 0.5 * prominence;
    double x_left = k[left];
    for (std::size_t j = i; j > left; --j) {
      if (values[j - 1] <= level) {
        x_left = interpolate_crossing(k[j - 1], values[j - 1], k[j], values[j], level);
        break;
      }
    }
    double x_right = k[right];
    for (std::size_t j = plateau_end; j < right; ++j) {
      if (values[j + 1] <= level) {
        x_right = interpolate_crossing(k[j], values[j], k[j + 1], values[j + 1], level);
        break;
      }
    }

    Peak p;
    p.index = i;
    p.prominence = prominence;
    p.fwhm = x_right - x_left;
    p.center = k[i];
    p.height = y;
    if (plateau_end == i) {
      // Vertex of the parabola through the three samples.
      const double ym = values[i - 1];
      const double yp = values[i + 1];
      const double curvature = ym - 2.0 * y + yp;
      if (curvature < 0.0) {
        const double offset = 0.5 * (ym - yp) / curvature;
        const double h = k[i + 1] - k[i];
        p.center = k[i] + offset * h;
        p.height = y - 0.25 * (ym - yp) * offset;
      }
    } else {
      p.center = 0.5 * (k[i] + k[plateau_end]);
    }
    peaks.push_back(p);
    i = plateau_end;
  }
  return peaks;
}

char to_char(Channel c) {
  switch (c) {
    case Channel::T: return 'T';
    case Channel::R: return 'R';
    case Channel::A: return 'A';
  }
  return '?';
}

Channel channel_from_string(const std::string& s) {
  if (s == "T" || s == "t") return Channel::T;
  if (s == "R" || s == "r") return Channel::R;
  if (s == "A" || s == "a") return Channel::A;
  throw ConfigError("unknown channel '" + s + "' (expected T, R or A)");
}

std::vector<double> channel_signal(const Spectrum& spectrum, Channel channel) {
  switch (channel) {
    case Channel::T: return spectrum.T;
    case Channel::A: return spectrum.A;
    case Channel::R: {
      std::vector<double> out(spectrum.R.size());
      std::transform(spectrum.R.begin(), spectrum.R.end(), out.begin(),
                     [](double r) { return 1.0 - r; });
      return out;
    }
  }
  return {};
}

SplittingReport extract_splitting(std::span<const double> k, std::span<const double> signal,
                                  Channel channel, const SpectralWindow& window,
                                  const PeakOptions& options) {
  std::vector<double> ks;
  std::vector<double> ys;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] >= window.k_lo && k[i] <= window.k_hi) {
      ks.push_back(k[i]);
      ys.push_back(signal[i]);
    }
  }
  const auto peaks = ks.size() >= 3 ? find_peaks(ks, ys, options) : std::vector<Peak>{};
  if (peaks.size() != 2) {
    throw PeakCountError(peaks.size(), std::string("expected 2 peaks in channel ") +
                                           to_char(channel) + ", found " +
                                           std::to_string(peaks.size()));
  }
  SplittingReport report;
  report.channel = channel;
  report.lower = peaks[0].center < peaks[1].center ? peaks[0] : peaks[1];
  report.upper = peaks[0].center < peaks[1].center ? peaks[1] : peaks[0];
  report.omega_lower = report.lower.center;
  report.omega_upper = report.upper.center;
  report.splitting_cm1 = report.omega_upper - report.omega_lower;
  report.splitting_mev = units::cm1_to_mev(report.splitting_cm1);
  return report;
}

SplittingReport extract_splitting(const Spectrum& spectrum, Channel channel,
                                  const SpectralWindow& window, const PeakOptions& options) {
  const auto k = spectrum.grid.points();
  const auto signal = channel_signal(spectrum, channel);
  return extract_splitting(k, signal, channel, window, options);
}

double lorentz_band_profile(double k, double strength, double center, double damping,
                            double baseline) {
  const double detune = k * k - center * center;
  const double kg = k * damping;
  return baseline + strength * kg / (detune * detune + kg * kg);
}

LorentzBandFit fit_lorentzian_band(std::span<const double> k, std::span<const double> values,
                                   const BandFitOptions& options) {
  const std::size_t n = values.size();
  if (k.size() != n) throw DomainError("wavenumber and value arrays differ in length");
  if (n < 5) throw DomainError("band fit needs at least 5 points");

  const double k_lo = k.front();
  const double k_hi = k.back();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 0.0)) throw DomainError("band fit needs a non-constant segment");

  // Starting point from the sampled maximum and its half-height width.
  const double baseline0 = std::min(values.front(), values.back());
  const std::size_t imax = static_cast<std::size_t>(hi_it - values.begin());
  const double half = baseline0 + 0.5 * (*hi_it - baseline0);
  std::size_t l = imax;
  while (l > 0 && values[l] > half) --l;
  std::size_t r = imax;
  while (r + 1 < n && values[r] > half) ++r;
  const double step = (k_hi - k_lo) / static_cast<double>(n - 1);
  const double width0 = std::max(k[r] - k[l], 2.0 * step);
  const double center0 = k[imax];
  const double strength0 = (*hi_it - baseline0) * center0 * width0;

  const std::vector<double> lower{0.0, k_lo, 0.1 * step, *lo_it - range};
  const std::vector<double> upper{50.0 * std::max(strength0, 1e-300), k_hi, k_hi - k_lo,
                                  *hi_it};
  std::vector<double> x0{strength0, center0, std::clamp(width0, lower[2], upper[2]),
                         std::clamp(baseline0, lower[3], upper[3])};

  const ResidualFunction residual = [&](std::span<const double> p) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = lorentz_band_profile(k[i], p[0], p[1], p[2], p[3]) - values[i];
    }
    return out;
  };
  LsqOptions lsq;
  lsq.max_iterations = options.max_iterations;
  lsq.relative_tolerance = options.relative_tolerance;
  const LsqResult res = bounded_least_squares(residual, x0, lower, upper, lsq);

  LorentzBandFit fit;
  fit.strength = res.x[0];
  fit.center = res.x[1];
  fit.damping = res.x[2];
  fit.baseline = res.x[3];
  fit.residual_rms = std::sqrt(res.loss / static_cast<double>(n));
  fit.peak_height = fit.strength / (fit.center * fit.damping);
  fit.poor_fit = fit.residual_rms > options.poor_fit_threshold * std::abs(fit.peak_height);
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  if (!res.converged) throw BandFitNotConverged(fit);
  return fit;
}

std::size_t DispersionTable::usable_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const DispersionRow& r) { return r.ok; }));
}

DispersionTable build_dispersion(std::span<const Spectrum> spectra, Channel channel,
                                 const SpectralWindow& window, const PeakOptions& options) {
  DispersionTable table;
  table.channel = channel;
  for (const auto& spectrum : spectra) {
    DispersionRow row;
    row.angle_deg = spectrum.angle_deg;
    try {
      const auto report = extract_splitting(spectrum, channel, window, options);
      row.omega_upper = report.omega_upper;
      row.omega_lower = report.omega_lower;
      row.peaks_found = 2;
      row.ok = true;
    } catch (const PeakCountError& e) {
      row.peaks_found = e.found();
    }
    table.rows.push_back(row);
  }
  return table;
}

CoupledModelFit fit_coupled_model(const DispersionTable& table, double ambient_index) {
  std::vector<const DispersionRow*> rows;
  for (const auto& r : table.rows) {
    if (r.ok) rows.push_back(&r);
  }
  if (rows.size() < 4) {
    throw DomainError("coupled-model fit needs at least 4 usable rows, got " +
                      std::to_string(rows.size()));
  }

  const auto closest = *std::min_element(rows.begin(), rows.end(), [](auto* a, auto* b) {
    return a->splitting() < b->splitting();
  });
  const auto normal = *std::min_element(rows.begin(), rows.end(), [](auto* a, auto* b) {
    return std::abs(a->angle_deg) < std::abs(b->angle_deg);
  });
  double lo_freq = rows.front()->omega_lower;
  double hi_freq = rows.front()->omega_upper;
  double max_gap = 0.0;
  for (const auto* r : rows) {
    lo_freq = std::min(lo_freq, r->omega_lower);
    hi_freq = std::max(hi_freq, r->omega_upper);
    max_gap = std::max(max_gap, r->splitting());
  }

  const double omega_v0 = 0.5 * (closest->omega_upper + closest->omega_lower);
  const double n0 = 1.5;
  const CavityDispersion probe{n0, 1.0, 1, ambient_index};
  const double cos_int = std::cos(probe.internal_angle_rad(normal->angle_deg));
  // Trace invariance of the two-mode model gives the bare cavity frequency.
  const double omega_c0 = normal->omega_upper + normal->omega_lower - omega_v0;
  const double d0 = 1e7 / (2.0 * n0 * omega_c0 * cos_int);

  const std::vector<double> lower{lo_freq, 1.0, d0 / 4.0, 0.0};
  const std::vector<double> upper{hi_freq, 4.0, d0 * 4.0, std::max(2.0 * max_gap, 1.0)};
  std::vector<double> x0{std::clamp(omega_v0, lower[0], upper[0]), n0, d0,
                         std::clamp(closest->splitting(), lower[3], upper[3])};

  const ResidualFunction residual = [&](std::span<const double> p) {
    std::vector<double> out;
    out.reserve(2 * rows.size());
    const CavityDispersion cavity{p[1], p[2], 1, ambient_index};
    for (const auto* r : rows) {
      const double wc = cavity.omega_at(r->angle_deg);
      const auto m = coupled_frequencies(wc, p[0], p[3], CouplingModel::rwa);
      out.push_back(m.omega_upper - r->omega_upper);
      out.push_back(m.omega_lower - r->omega_lower);
    }
    return out;
  };
  LsqOptions lsq;
  lsq.relative_tolerance = 1e-12;
  const LsqResult res = bounded_least_squares(residual, x0, lower, upper, lsq);

  CoupledModelFit fit;
  fit.omega_v = res.x[0];
  fit.n_eff = res.x[1];
  fit.thickness_nm = res.x[2];
  fit.splitting = res.x[3];
  fit.loss = res.loss;
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double a = res.residuals[2 * i];
    const double b = res.residuals[2 * i + 1];
    fit.row_residual_rms.push_back(std::sqrt(0.5 * (a * a + b * b)));
  }
  return fit;
}

}  // namespace vibropol
