#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibropol/fields.hpp"
#include "vibropol/materials.hpp"
#include "vibropol/polariton.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"

namespace vibropol {

using MaterialLibrary = std::map<std::string, DielectricModel>;

struct LayerSpec {
  std::string material;
  double thickness_nm = 0.0;

  bool operator==(const LayerSpec&) const = default;
};

/// Stack described by material names, resolved against a MaterialLibrary.
struct StackSpec {
  std::string ambient = "Air";
  std::vector<LayerSpec> layers;
  std::string substrate;
  SubstrateMode substrate_mode = SubstrateMode::incoherent_to_air;
  double exit_index = 1.0;
  /// Illuminate through the substrate instead of the ambient. Only valid for
  /// coherent substrates.
  bool substrate_side_incidence = false;

  bool operator==(const StackSpec&) const = default;
};

/// Throws ConfigError naming the offending layer when a material is missing.
LayerStack build_stack(const MaterialLibrary& materials, const StackSpec& spec);

struct AnalysisSpec {
  SpectralWindow window;
  PeakOptions peaks;

  bool operator==(const AnalysisSpec&) const = default;
};

struct FieldMapSpec {
  FieldMapOptions options;
  std::optional<SpectralGrid> grid;  // falls back to the main grid

  bool operator==(const FieldMapSpec&) const = default;
};

struct PolymerSpec {
  double mass_density_g_cm3 = 0.0;
  double monomer_mass_g_mol = 0.0;
  double bonds_per_monomer = 1.0;

  bool operator==(const PolymerSpec&) const = default;
};

struct EstimateSpec {
  VibrationalMode vibration;
  double cavity_omega_cm1 = 0.0;
  double cavity_index = 1.0;
  std::optional<double> mode_volume_m3;  // default (lambda/n)^3
  double kappa_fwhm_mev = 0.0;
  double temperature_k = 300.0;
  std::optional<PolymerSpec> polymer;
  std::optional<double> rabi_splitting_mev;
  std::optional<double> upper_fwhm_mev;
  std::optional<double> lower_fwhm_mev;

  bool operator==(const EstimateSpec&) const = default;
};

struct FreeParameter {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const FreeParameter&) const = default;
};

struct FitSpec {
  std::vector<FreeParameter> free;
  Channel channel = Channel::T;
  std::optional<double> angle_deg;  // default: the config angle
  std::string target;               // path, relative to the config file
  int multistart = 0;
  int max_iterations = 2000;
  double relative_tolerance = 1e-8;

  bool operator==(const FitSpec&) const = default;
};

struct Config {
  MaterialLibrary materials;
  StackSpec stack;
  SpectralGrid grid{400.0, 7400.0, 1.0};
  double angle_deg = 0.0;
  std::vector<double> angles;
  Polarization polarization = Polarization::unpolarized;
  DivergenceQuadrature divergence;
  AnalysisSpec analysis;
  FieldMapSpec field_map;
  std::optional<EstimateSpec> estimate;
  std::optional<FitSpec> fit;
  std::uint64_t seed = 0;
  std::filesystem::path base_dir;  // directory of the config file, not serialised
};

/// Parses the JSON config format. Errors are ConfigError with a line:column
/// location for syntax problems and a dotted field path for semantic ones.
Config parse_config(std::string_view text, const std::string& source = "<config>");
Config load_config(const std::filesystem::path& path);

/// Canonical JSON form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const Config& config);

bool operator==(const Config& a, const Config& b);

/// Range helper: min, min + step, ... <= max.
std::vector<double> angle_range(double min_deg, double max_deg, double step_deg);

}  // namespace vibropol
