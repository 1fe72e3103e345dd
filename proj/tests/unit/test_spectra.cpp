#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "paper_stack.hpp"
#include "vibropol/errors.hpp"
#include "vibropol/polariton.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"

using namespace vibropol;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> k;
  for (std::size_t i = 0; lo + i * step <= hi + 1e-9; ++i) k.push_back(lo + i * step);
  return k;
}

std::vector<double> band(const std::vector<double>& k, double f, double k0, double g, double base) {
  std::vector<double> y;
  for (double x : k) y.push_back(lorentz_band_profile(x, f, k0, g, base));
  return y;
}

// Cauchy line with the given FWHM.
std::vector<double> cauchy(const std::vector<double>& k, double c, double fwhm) {
  std::vector<double> y;
  for (double x : k) {
    const double u = 2.0 * (x - c) / fwhm;
    y.push_back(1.0 / (1.0 + u * u));
  }
  return y;
}

DispersionTable synthetic_table(double omega_v, double n, double d, double split, double jitter,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  std::vector<double> angles;
  for (double a = 0.0; a <= 60.0; a += 5.0) angles.push_back(a);
  const auto pts = anticrossing_dispersion({n, d, 1, 1.0}, omega_v, split, angles);
  DispersionTable t;
  for (const auto& p : pts) {
    DispersionRow r;
    r.angle_deg = p.angle_deg;
    r.omega_upper = p.omega_upper + u(rng);
    r.omega_lower = p.omega_lower + u(rng);
    r.peaks_found = 2;
    r.ok = true;
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("single synthetic line") {
  const auto k = grid(1600.0, 1880.0, 0.25);
  const auto peaks = find_peaks(k, cauchy(k, 1739.0, 13.0));
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].center - 1739.0) <= 0.25);
  CHECK(peaks[0].fwhm == doctest::Approx(13.0).epsilon(0.02));
  CHECK(peaks[0].height == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("constant and monotone spectra have no peaks") {
  const auto k = grid(1000.0, 2000.0, 1.0);
  CHECK(find_peaks(k, std::vector<double>(k.size(), 0.3)).empty());
  CHECK(find_peaks(k, k).empty());
  CHECK_THROWS_AS(find_peaks(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 1.0}), DomainError);
}

TEST_CASE("maxima on the grid edge are discarded") {
  const auto k = grid(1739.0, 1900.0, 0.5);
  CHECK(find_peaks(k, cauchy(k, 1739.0, 13.0)).empty());
}

TEST_CASE("peak extraction is scale invariant") {
  const auto k = grid(1500.0, 2000.0, 0.5);
  auto y = cauchy(k, 1650.0, 30.0);
  const auto y2 = cauchy(k, 1820.0, 25.0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.8 * y2[i];
  auto scaled = y;
  for (double& v : scaled) v *= 37.5;
  const auto a = find_peaks(k, y);
  const auto b = find_peaks(k, scaled);
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(a[i].center == doctest::Approx(b[i].center).epsilon(1e-12));
    CHECK(a[i].fwhm == doctest::Approx(b[i].fwhm).epsilon(1e-12));
    CHECK(b[i].height == doctest::Approx(37.5 * a[i].height).epsilon(1e-12));
  }
}

TEST_CASE("prominence threshold drops small ripples") {
  const auto k = grid(1000.0, 2000.0, 1.0);
  auto y = cauchy(k, 1500.0, 40.0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.01 * std::sin(0.5 * k[i]);
  const auto peaks = find_peaks(k, y);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].center - 1500.0) < 1.0);
  PeakOptions loose;
  loose.relative_prominence = 0.0;
  loose.min_prominence = 1e-6;
  CHECK(find_peaks(k, y, loose).size() > 1);
}

TEST_CASE("band fit exact round trip") {
  const auto k = grid(1650.0, 1830.0, 0.5);
  const auto y = band(k, 5e4, 1739.0, 13.0, 0.01);
  const LorentzBandFit fit = fit_lorentzian_band(k, y);
  CHECK(fit.converged);
  CHECK(fit.strength == doctest::Approx(5e4).epsilon(1e-6));
  CHECK(fit.center == doctest::Approx(1739.0).epsilon(1e-9));
  CHECK(fit.damping == doctest::Approx(13.0).epsilon(1e-6));
  CHECK(fit.baseline == doctest::Approx(0.01).epsilon(1e-5));
  CHECK_FALSE(fit.poor_fit);

  // idempotence: refit the fitted model
  const auto again = fit_lorentzian_band(k, band(k, fit.strength, fit.center, fit.damping, fit.baseline));
  CHECK(again.strength == doctest::Approx(fit.strength).epsilon(1e-8));
  CHECK(again.center == doctest::Approx(fit.center).epsilon(1e-10));
  CHECK(again.damping == doctest::Approx(fit.damping).epsilon(1e-8));
}

TEST_CASE("band fit with noise") {
  const auto k = grid(1650.0, 1830.0, 0.5);
  auto y = band(k, 5e4, 1739.0, 13.0, 0.0);
  const double height = *std::max_element(y.begin(), y.end());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.005 * height);
  for (double& v : y) v += noise(rng);
  const LorentzBandFit fit = fit_lorentzian_band(k, y);
  CHECK(fit.strength == doctest::Approx(5e4).epsilon(0.02));
  CHECK(fit.center == doctest::Approx(1739.0).epsilon(0.02));
  CHECK(fit.damping == doctest::Approx(13.0).epsilon(0.02));
  CHECK_FALSE(fit.poor_fit);
}

TEST_CASE("overlapping bands are flagged as a poor fit") {
  const auto k = grid(1650.0, 1830.0, 0.5);
  auto y = band(k, 5e4, 1725.0, 13.0, 0.0);
  const auto y2 = band(k, 4e4, 1752.0, 13.0, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += y2[i];
  LorentzBandFit fit;
  try {
    fit = fit_lorentzian_band(k, y);
  } catch (const BandFitNotConverged& e) {
    fit = e.best();
  }
  CHECK(fit.poor_fit);
}

TEST_CASE("paper cavity splitting in transmission") {
  const Spectrum sp = spectrum_scan(fixture::paper_stack(), {1500.0, 2000.0, 1.0}, 0.0,
                                    Polarization::unpolarized);
  CHECK(find_peaks(sp.grid.points(), sp.T).size() == 2);
  const SplittingReport r = extract_splitting(sp, Channel::T, {1500.0, 2000.0});
  CHECK(r.omega_upper > r.omega_lower);
  CHECK(std::abs(r.splitting_cm1 - 167.0) <= 5.0);
  CHECK(r.splitting_mev == doctest::Approx(r.splitting_cm1 / 8.06554).epsilon(1e-12));
}

TEST_CASE("uncoupled cavity has no splitting") {
  const Spectrum sp = spectrum_scan(fixture::paper_stack(false), {1500.0, 2000.0, 1.0}, 0.0,
                                    Polarization::unpolarized);
  try {
    extract_splitting(sp, Channel::T, {1500.0, 2000.0});
    FAIL("expected a peak-count error");
  } catch (const PeakCountError& e) {
    CHECK(e.found() == 1);
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
}

TEST_CASE("reflection is searched as dips") {
  const auto k = grid(1500.0, 2000.0, 1.0);
  Spectrum sp;
  sp.grid = {1500.0, 2000.0, 1.0};
  const auto a = cauchy(k, 1650.0, 40.0);
  const auto b = cauchy(k, 1820.0, 40.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    sp.R.push_back(0.9 - 0.4 * (a[i] + b[i]));
    sp.T.push_back(0.0);
    sp.A.push_back(1.0 - sp.R.back());
  }
  const auto r = extract_splitting(sp, Channel::R);
  CHECK(r.omega_lower == doctest::Approx(1650.0).epsilon(1e-3));
  CHECK(r.omega_upper == doctest::Approx(1820.0).epsilon(1e-3));
}

TEST_CASE("angle-scan dispersion table") {
  std::vector<double> angles;
  for (double a = -60.0; a <= 60.0; a += 10.0) angles.push_back(a);
  const auto spectra = angle_scan(fixture::paper_stack(), {1500.0, 2000.0, 1.0}, angles,
                                  Polarization::unpolarized);
  const DispersionTable t = build_dispersion(spectra, Channel::T, {1500.0, 2000.0});
  REQUIRE(t.rows.size() == angles.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const auto& m = t.rows[t.rows.size() - 1 - i];
    CHECK(r.ok == m.ok);
    if (r.ok) {
      CHECK(r.omega_upper > r.omega_lower);
      CHECK(r.omega_upper == doctest::Approx(m.omega_upper).epsilon(1e-12));
      CHECK(r.omega_lower == doctest::Approx(m.omega_lower).epsilon(1e-12));
    } else {
      CHECK(r.peaks_found != 2);
      CHECK(std::isnan(r.omega_upper));
    }
  }
  // from 0 deg outward the upper branch rises and the lower branch approaches the band
  const std::size_t zero = 6;
  for (std::size_t i = zero + 1; i < t.rows.size() && t.rows[i].ok; ++i) {
    CHECK(t.rows[i].omega_upper > t.rows[i - 1].omega_upper);
    CHECK(t.rows[i].omega_lower > t.rows[i - 1].omega_lower);
    CHECK(t.rows[i].omega_lower < 1739.0);
  }
  CHECK(t.usable_rows() >= 5);

  // uncoupled cavity: every row flagged
  const auto flat = angle_scan(fixture::paper_stack(false), {1500.0, 2000.0, 1.0}, angles,
                               Polarization::unpolarized);
  const DispersionTable u = build_dispersion(flat, Channel::T, {1500.0, 2000.0});
  CHECK(u.usable_rows() == 0);
  // the bare mode leaves the window beyond ~40 deg
  for (const auto& r : u.rows) CHECK(r.peaks_found <= 1);
  CHECK(u.rows[zero].peaks_found == 1);
}

TEST_CASE("coupled model fit on a synthetic table") {
  const double d = 1e7 / (2.0 * 1.41 * 1740.0);
  const auto t = synthetic_table(1740.0, 1.41, d, 167.0, 1.0, 99);
  const CoupledModelFit fit = fit_coupled_model(t);
  CHECK(fit.converged);
  CHECK(fit.omega_v == doctest::Approx(1740.0).epsilon(0.03));
  CHECK(fit.n_eff == doctest::Approx(1.41).epsilon(0.03));
  CHECK(fit.thickness_nm == doctest::Approx(d).epsilon(0.03));
  CHECK(fit.splitting == doctest::Approx(167.0).epsilon(0.03));
  CHECK(fit.row_residual_rms.size() == t.rows.size());
}

TEST_CASE("coupled model fit with no splitting") {
  const double d = 1e7 / (2.0 * 1.5 * 1700.0);
  const auto t = synthetic_table(1740.0, 1.5, d, 0.0, 0.0, 1);
  const CoupledModelFit fit = fit_coupled_model(t);
  CHECK(fit.splitting < 1.0);
}

TEST_CASE("coupled model fit needs four usable rows") {
  auto t = synthetic_table(1740.0, 1.41, 2000.0, 167.0, 0.0, 1);
  for (std::size_t i = 3; i < t.rows.size(); ++i) t.rows[i].ok = false;
  CHECK_THROWS_AS(fit_coupled_model(t), DomainError);
}

TEST_CASE("channel names") {
  CHECK(channel_from_string("T") == Channel::T);
  CHECK(channel_from_string("R") == Channel::R);
  CHECK(channel_from_string("A") == Channel::A);
  CHECK(to_char(Channel::A) == 'A');
}
