#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "paper_stack.hpp"
#include "vibropol/fields.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"

using namespace vibropol;

namespace {

double flux(const FieldSample& f) { return (f.e_tangential * std::conj(f.h_tangential)).real(); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

// Local maxima of a profile that stand out by more than 1% of its range.
int count_maxima(const std::vector<double>& y) {
  const double range = *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());
  int count = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      const double left = *std::min_element(y.begin(), y.begin() + i);
      const double right = *std::min_element(y.begin() + i, y.end());
      if (y[i] - std::max(left, right) > 0.01 * range) ++count;
    }
  }
  return count;
}

LayerStack quarter_wave_cavity(double k0) {
  const double lam = 1e7 / k0;
  LayerStack s;
  s.ambient = {"Air", ConstantMedium{1.0}};
  s.layers = {{"H", ConstantMedium{9.0}, lam / 12.0},
              {"L", ConstantMedium{2.25}, lam / 3.0},
              {"H", ConstantMedium{9.0}, lam / 12.0}};
  s.substrate = {"Air", ConstantMedium{1.0}};
  s.substrate_mode = SubstrateMode::coherent_semi_infinite;
  return s;
}

double peak_center(const LayerStack& s, double lo, double hi) {
  const Spectrum sp = spectrum_scan(s, {lo, hi, 0.5}, 0.0, Polarization::s);
  const auto peaks = find_peaks(sp.grid.points(), sp.T);
  REQUIRE(peaks.size() == 1);
  return peaks[0].center;
}

}  // namespace

TEST_CASE("free propagation has unit intensity") {
  LayerStack s;
  s.ambient = {"Air", ConstantMedium{1.0}};
  s.substrate = {"Air", ConstantMedium{1.0}};
  s.substrate_mode = SubstrateMode::coherent_semi_infinite;
  const auto z = linspace(-500.0, 500.0, 41);
  for (auto pol : {Polarization::s, Polarization::p, Polarization::unpolarized}) {
    for (double angle : {0.0, 40.0}) {
      for (double v : field_profile(s, 2000.0, angle, pol, z)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  const FieldMap map = field_map(s, {1000.0, 2000.0, 100.0}, 0.0, Polarization::s);
  for (double v : map.intensity) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tangential fields are continuous at interfaces") {
  const LayerStack s = fixture::paper_stack();
  std::vector<double> bounds{0.0};
  for (const auto& l : s.layers) bounds.push_back(bounds.back() + l.thickness_nm);
  for (double k : {1650.0, 1740.0, 3500.0}) {
    for (auto pol : {Polarization::s, Polarization::p}) {
      for (double zb : bounds) {
        const std::vector<double> z{zb - 1e-7, zb + 1e-7};
        const auto f = field_samples(s, k, 30.0, pol, z);
        const double scale = std::max(std::abs(f[0].e_tangential), 1e-3);
        CHECK(std::abs(f[0].e_tangential - f[1].e_tangential) < 1e-7 * scale);
        CHECK(std::abs(f[0].h_tangential - f[1].h_tangential) < 1e-6 * std::max(std::abs(f[0].h_tangential), 1e-3));
      }
    }
  }
}

TEST_CASE("net flux matches the transfer-matrix coefficients") {
  LayerStack s = fixture::paper_stack();
  s.substrate_mode = SubstrateMode::coherent_semi_infinite;
  const double total = s.total_thickness_nm();
  for (auto pol : {Polarization::s, Polarization::p}) {
    for (double angle : {0.0, 25.0}) {
      for (double k : {1600.0, 1740.0, 1820.0, 3000.0}) {
        const CoherentSolution sol = solve_coherent(s, k, angle, pol);
        const std::vector<double> z{-300.0, total + 300.0};
        const auto f = field_samples(s, k, angle, pol, z);
        const double incident = sol.eta_ambient.real();
        CHECK(flux(f[0]) / incident == doctest::Approx(1.0 - sol.R).epsilon(1e-9));
        CHECK(flux(f[1]) / incident == doctest::Approx(sol.T_coherent).epsilon(1e-9));
        if (pol == Polarization::s) {
          // |E|^2 in a lossless substrate is T times n0 cos0 / (ns cos s)
          const double expected = sol.T_coherent * incident / sol.eta_substrate.real();
          CHECK(f[1].intensity == doctest::Approx(expected).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("flux never grows with depth in a passive stack") {
  const LayerStack s = fixture::paper_stack();
  const auto z = linspace(-100.0, s.total_thickness_nm() + 100.0, 800);
  for (auto pol : {Polarization::s, Polarization::p}) {
    for (double k : {1660.0, 1740.0, 1824.0}) {
      const auto f = field_samples(s, k, 20.0, pol, z);
      for (std::size_t i = 1; i < f.size(); ++i) CHECK(flux(f[i]) <= flux(f[i - 1]) + 1e-12);
    }
  }
}

TEST_CASE("symmetric lossless cavity at resonance") {
  const double k0 = 2000.0;
  const LayerStack s = quarter_wave_cavity(k0);
  CHECK(stack_response(s, k0, 0.0, Polarization::s).T == doctest::Approx(1.0).epsilon(1e-12));
  const double total = s.total_thickness_nm();
  const auto z = linspace(0.0, total, 201);
  const auto a = field_profile(s, k0, 0.0, Polarization::s, z);
  std::vector<double> zr(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zr[i] = total - z[i];
  const auto b = field_profile(s, k0, 0.0, Polarization::s, zr);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("cavity mode profiles") {
  const LayerStack s = fixture::paper_stack(false);
  const double lo = s.layers[0].thickness_nm;
  const double hi = lo + s.layers[1].thickness_nm;
  const auto z = linspace(lo + 1.0, hi - 1.0, 1000);

  const double first = peak_center(s, 1500.0, 2000.0);
  const auto p1 = field_profile(s, first, 0.0, Polarization::s, z);
  CHECK(count_maxima(p1) == 1);
  const auto top = std::max_element(p1.begin(), p1.end()) - p1.begin();
  CHECK(std::abs(z[top] - 0.5 * (lo + hi)) < 0.1 * (hi - lo));

  const double second = peak_center(s, 3000.0, 4000.0);
  CHECK(std::abs(second - 3500.0) < 150.0);
  CHECK(count_maxima(field_profile(s, second, 0.0, Polarization::s, z)) == 2);
}

TEST_CASE("coupled cavity splits the ridge at the cavity centre") {
  const LayerStack s = fixture::paper_stack(true);
  const double centre = s.layers[0].thickness_nm + 0.5 * s.layers[1].thickness_nm;
  const FieldMap map = field_map(s, {1500.0, 2000.0, 1.0}, 0.0, Polarization::unpolarized,
                                 {10.0, 200.0});
  const auto zc = std::min_element(map.z_nm.begin(), map.z_nm.end(), [&](double a, double b) {
                    return std::abs(a - centre) < std::abs(b - centre);
                  }) - map.z_nm.begin();
  std::vector<double> k;
  std::vector<double> column;
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    k.push_back(map.grid.at(i));
    column.push_back(map.at(i, zc));
  }
  const auto peaks = find_peaks(k, column);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].center < 1740.0);
  CHECK(peaks[1].center > 1740.0);
  const double at_band = column[240];  // 1740 cm^-1
  CHECK(at_band < peaks[0].height);
  CHECK(at_band < peaks[1].height);
}

TEST_CASE("field map rows match field_profile") {
  const LayerStack s = fixture::paper_stack(true);
  const FieldMapOptions opts{25.0, 100.0};
  const FieldMap map = field_map(s, {1600.0, 1900.0, 50.0}, 10.0, Polarization::p, opts);
  const auto z = make_depth_grid(s, opts);
  CHECK(map.z_nm == z);
  CHECK(z.front() == -100.0);
  CHECK(z.back() == doctest::Approx(s.total_thickness_nm() + 100.0));
  CHECK(std::find(z.begin(), z.end(), 10.0) != z.end());
  CHECK(std::find(z.begin(), z.end(), 1940.0) != z.end());
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    const auto ref = field_profile(s, map.grid.at(i), 10.0, Polarization::p, z);
    for (std::size_t j = 0; j < z.size(); ++j) {
      CHECK(map.at(i, j) == ref[j]);
      CHECK(map.at(i, j) >= 0.0);
    }
  }
}
