#include "vibropol/fields.hpp"

#include <algorithm>
#include <cmath>

#include "vibropol/errors.hpp"
#include "vibropol/parallel.hpp"
#include "vibropol/units.hpp"

namespace vibropol {

namespace {

constexpr double kNmToCm = 1e-7;

struct Tangential {
  Complex e;
  Complex h;
};

Tangential apply(const Matrix2& m, const Tangential& f) {
  return {m.m11 * f.e + m.m12 * f.h, m.m21 * f.e + m.m22 * f.h};
}

}  // namespace

std::vector<FieldSample> field_samples(const LayerStack& stack, double k, double angle_deg,
                                       Polarization pol, std::span<const double> z_nm) {
  if (pol == Polarization::unpolarized) {
    throw DomainError("field_samples needs s or p polarization");
  }
  const CoherentSolution sol = solve_coherent(stack, k, angle_deg, pol);
  const double beta = sol.beta;
  const std::size_t n_layers = stack.layers.size();

  // Tangential fields at each layer's lower boundary, filled from the exit.
  std::vector<Tangential> bottom(n_layers);
  std::vector<double> top_z(n_layers + 1, 0.0);
  std::vector<Complex> layer_eps(n_layers);
  for (std::size_t j = 0; j < n_layers; ++j) {
    top_z[j + 1] = top_z[j] + stack.layers[j].thickness_nm;
    layer_eps[j] = epsilon(stack.layers[j].material, k);
  }
  Tangential f{sol.t, sol.t * sol.eta_substrate};
  for (std::size_t j = n_layers; j-- > 0;) {
    bottom[j] = f;
    f = apply(layer_matrix(stack.layers[j], k, beta, pol), f);
  }

  const Complex eps0 = epsilon(stack.ambient.model, k);
  const Complex eps_s = epsilon(stack.substrate.model, k);
  const Complex q0 = normal_index(eps0, beta);
  const Complex q_s = normal_index(eps_s, beta);
  const Complex i{0.0, 1.0};
  const double phase_per_nm = 2.0 * units::kPi * k * kNmToCm;
  // For p-polarization a unit tangential amplitude carries |E|^2 = n0^2/q0^2.
  const double p_scale = std::norm(q0) / eps0.real();

  std::vector<FieldSample> out;
  out.reserve(z_nm.size());
  for (const double z : z_nm) {
    FieldSample s;
    s.z_nm = z;
    Complex eps_here;
    if (z < 0.0) {
      const Complex fwd = std::exp(i * phase_per_nm * q0 * z);
      const Complex bwd = std::exp(-i * phase_per_nm * q0 * z);
      s.region = -1;
      s.e_tangential = fwd + sol.r * bwd;
      s.h_tangential = sol.eta_ambient * (fwd - sol.r * bwd);
      eps_here = eps0;
    } else if (z > top_z[n_layers] || n_layers == 0) {
      const Complex fwd = std::exp(i * phase_per_nm * q_s * (z - top_z[n_layers]));
      s.region = static_cast<int>(n_layers);
      s.e_tangential = sol.t * fwd;
      s.h_tangential = sol.eta_substrate * s.e_tangential;
      eps_here = eps_s;
    } else {
      auto it = std::upper_bound(top_z.begin() + 1, top_z.end(), z);
      std::size_t j = static_cast<std::size_t>(it - top_z.begin()) - 1;
      if (j >= n_layers) j = n_layers - 1;
      Layer remainder = stack.layers[j];
      remainder.thickness_nm = std::max(0.0, top_z[j + 1] - z);
      const Tangential here = apply(layer_matrix(remainder, k, beta, pol), bottom[j]);
      s.region = static_cast<int>(j);
      s.e_tangential = here.e;
      s.h_tangential = here.h;
      eps_here = layer_eps[j];
    }
    if (pol == Polarization::s) {
      s.intensity = std::norm(s.e_tangential);
    } else {
      const Complex e_z = -beta * s.h_tangential / eps_here;
      s.intensity = (std::norm(s.e_tangential) + std::norm(e_z)) * p_scale;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> field_profile(const LayerStack& stack, double k, double angle_deg,
                                  Polarization pol, std::span<const double> z_nm) {
  std::vector<double> out(z_nm.size(), 0.0);
  if (pol != Polarization::unpolarized) {
    const auto samples = field_samples(stack, k, angle_deg, pol, z_nm);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples[i].intensity;
    return out;
  }
  const auto s = field_samples(stack, k, angle_deg, Polarization::s, z_nm);
  const auto p = field_samples(stack, k, angle_deg, Polarization::p, z_nm);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (s[i].intensity + p[i].intensity);
  return out;
}

std::vector<double> make_depth_grid(const LayerStack& stack, const FieldMapOptions& opts) {
  if (!(opts.z_step_nm > 0.0)) throw ConfigError("depth step must be positive");
  if (!(opts.margin_nm >= 0.0)) throw ConfigError("depth margin must be non-negative");
  const double end = stack.total_thickness_nm() + opts.margin_nm;
  std::vector<double> z;
  const auto n = static_cast<std::size_t>(std::floor((end + opts.margin_nm) / opts.z_step_nm + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) z.push_back(-opts.margin_nm + static_cast<double>(i) * opts.z_step_nm);
  double boundary = 0.0;
  z.push_back(boundary);
  for (const auto& layer : stack.layers) {
    boundary += layer.thickness_nm;
    z.push_back(boundary);
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-9; }),
          z.end());
  return z;
}

FieldMap field_map(const LayerStack& stack, const SpectralGrid& grid, double angle_deg,
                   Polarization pol, const FieldMapOptions& opts) {
  validate(grid);
  FieldMap map;
  map.z_nm = make_depth_grid(stack, opts);
  map.grid = grid;
  map.angle_deg = angle_deg;
  map.polarization = pol;
  const std::size_t nz = map.z_nm.size();
  map.intensity.assign(grid.size() * nz, 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const auto profile = field_profile(stack, grid.at(i), angle_deg, pol, map.z_nm);
    std::copy(profile.begin(), profile.end(), map.intensity.begin() + static_cast<std::ptrdiff_t>(i * nz));
  });
  return map;
}

}  // namespace vibropol
