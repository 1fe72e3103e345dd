#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vibropol/tmm.hpp"

namespace vibropol {

/// Tangential fields at one depth, normalised to a unit-amplitude incident
/// wave. `region` is -1 in the ambient, the layer index inside the stack and
/// layers.size() in the substrate.
struct FieldSample {
  double z_nm = 0.0;
  int region = -1;
  Complex e_tangential;
  Complex h_tangential;
  double intensity = 0.0;  // |E|^2, for p-polarization |Ex|^2 + |Ez|^2
};

/// Depths are measured from the first interface (z = 0) towards the
/// substrate. Only s or p polarization.
std::vector<FieldSample> field_samples(const LayerStack& stack, double k, double angle_deg,
                                       Polarization pol, std::span<const double> z_nm);

/// |E(z)|^2 at one wavenumber; unpolarized averages the s and p intensities.
std::vector<double> field_profile(const LayerStack& stack, double k, double angle_deg,
                                  Polarization pol, std::span<const double> z_nm);

struct FieldMapOptions {
  double z_step_nm = 10.0;
  double margin_nm = 200.0;

  bool operator==(const FieldMapOptions&) const = default;
};

/// Uniform depth grid from -margin to total thickness + margin. Layer
/// boundaries are included exactly.
std::vector<double> make_depth_grid(const LayerStack& stack, const FieldMapOptions& opts);

struct FieldMap {
  std::vector<double> z_nm;
  SpectralGrid grid;
  double angle_deg = 0.0;
  Polarization polarization = Polarization::unpolarized;
  std::vector<double> intensity;  // row-major: one row of z values per wavenumber

  double at(std::size_t k_index, std::size_t z_index) const {
    return intensity[k_index * z_nm.size() + z_index];
  }
  std::span<const double> row(std::size_t k_index) const {
    return {intensity.data() + k_index * z_nm.size(), z_nm.size()};
  }
};

FieldMap field_map(const LayerStack& stack, const SpectralGrid& grid, double angle_deg,
                   Polarization pol, const FieldMapOptions& opts = {});

}  // namespace vibropol
