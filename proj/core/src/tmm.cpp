#include "vibropol/tmm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vibropol/errors.hpp"
#include "vibropol/parallel.hpp"
#include "vibropol/units.hpp"

namespace vibropol {

namespace {

constexpr double kNmToCm = 1e-7;

// Relative tolerance under which an ambient permittivity counts as real.
constexpr double kLosslessTol = 1e-12;

double ambient_index(const LayerStack& stack, double k) {
  const Complex eps = epsilon(stack.ambient.model, k);
  if (std::abs(eps.imag()) > kLosslessTol * std::abs(eps)) {
    throw DomainError("ambient medium '" + stack.ambient.name + "' must be lossless");
  }
  return std::sqrt(eps.real());
}

double in_plane_index(const LayerStack& stack, double k, double angle_deg) {
  if (!(std::abs(angle_deg) < 90.0)) {
    throw DomainError("incidence angle must lie in (-90, 90) degrees, got " +
                      std::to_string(angle_deg));
  }
  return ambient_index(stack, k) * std::sin(units::deg_to_rad(angle_deg));
}

void require_pure(Polarization pol) {
  if (pol == Polarization::unpolarized) {
    throw DomainError("a characteristic matrix needs s or p polarization");
  }
}

}  // namespace

std::string to_string(Polarization pol) {
  switch (pol) {
    case Polarization::s: return "s";
    case Polarization::p: return "p";
    case Polarization::unpolarized: return "unpolarized";
  }
  return "?";
}

std::string to_string(SubstrateMode mode) {
  return mode == SubstrateMode::coherent_semi_infinite ? "coherent_semi_infinite"
                                                       : "incoherent_to_air";
}

double LayerStack::total_thickness_nm() const {
  double total = 0.0;
  for (const auto& l : layers) total += l.thickness_nm;
  return total;
}

void validate(const LayerStack& stack) {
  validate(stack.ambient.model);
  validate(stack.substrate.model);
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& layer = stack.layers[i];
    if (!(layer.thickness_nm > 0.0) || !std::isfinite(layer.thickness_nm)) {
      throw ConfigError("layer " + std::to_string(i) + " ('" + layer.name +
                        "') thickness must be finite and positive");
    }
    validate(layer.material);
  }
  if (!(stack.exit_index >= 1.0)) throw ConfigError("exit index must be >= 1");
}

LayerStack reversed(const LayerStack& stack) {
  if (stack.substrate_mode != SubstrateMode::coherent_semi_infinite) {
    throw DomainError("only coherent stacks can be reversed");
  }
  LayerStack out = stack;
  std::swap(out.ambient, out.substrate);
  std::reverse(out.layers.begin(), out.layers.end());
  return out;
}

LayerStack without_vibrations(const LayerStack& stack) {
  LayerStack out = stack;
  out.ambient.model = without_vibrations(out.ambient.model);
  out.substrate.model = without_vibrations(out.substrate.model);
  for (auto& layer : out.layers) layer.material = without_vibrations(layer.material);
  return out;
}

std::size_t SpectralGrid::size() const {
  if (!(step > 0.0) || k_max < k_min) return 0;
  return static_cast<std::size_t>(std::floor((k_max - k_min) / step + 1e-9)) + 1;
}

std::vector<double> SpectralGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
  return out;
}

void validate(const SpectralGrid& grid) {
  if (!(grid.k_min > 0.0) || !std::isfinite(grid.k_max) || grid.k_max < grid.k_min) {
    throw ConfigError("grid needs 0 < min <= max");
  }
  if (!(grid.step > 0.0)) throw ConfigError("grid step must be positive");
}

const std::vector<double>& Spectrum::channel(char which) const {
  switch (which) {
    case 'T': return T;
    case 'R': return R;
    case 'A': return A;
  }
  throw ConfigError(std::string("unknown channel '") + which + "'");
}

Complex normal_index(Complex eps, double beta) { return passive_sqrt(eps - beta * beta); }

Complex tilted_admittance(Complex eps, Complex q, Polarization pol) {
  require_pure(pol);
  return pol == Polarization::s ? q : eps / q;
}

namespace {

Matrix2 characteristic(Complex q, Complex eta, double k, double thickness_nm) {
  const Complex delta = 2.0 * units::kPi * k * thickness_nm * kNmToCm * q;
  const Complex c = std::cos(delta);
  const Complex s = std::sin(delta);
  const Complex i{0.0, 1.0};
  return {c, -i * s / eta, -i * eta * s, c};
}

}  // namespace

Matrix2 layer_matrix(const Layer& layer, double k, double beta, Polarization pol) {
  require_pure(pol);
  const Complex eps = epsilon(layer.material, k);
  const Complex q = normal_index(eps, beta);
  if (layer.thickness_nm == 0.0) return {};
  return characteristic(q, tilted_admittance(eps, q, pol), k, layer.thickness_nm);
}

CoherentSolution solve_coherent(const LayerStack& stack, double k, double angle_deg,
                                Polarization pol) {
  require_pure(pol);
  const double beta = in_plane_index(stack, k, angle_deg);

  const Complex eps0 = epsilon(stack.ambient.model, k);
  const Complex eta0 = tilted_admittance(eps0, normal_index(eps0, beta), pol);
  const Complex eps_s = epsilon(stack.substrate.model, k);
  const Complex eta_s = tilted_admittance(eps_s, normal_index(eps_s, beta), pol);

  Matrix2 total;
  for (const auto& layer : stack.layers) total = total * layer_matrix(layer, k, beta, pol);

  const Complex b = total.m11 + total.m12 * eta_s;
  const Complex c = total.m21 + total.m22 * eta_s;
  const Complex denom = eta0 * b + c;

  CoherentSolution sol;
  sol.beta = beta;
  sol.eta_ambient = eta0;
  sol.eta_substrate = eta_s;
  sol.r = (eta0 * b - c) / denom;
  sol.t = 2.0 * eta0 / denom;
  sol.R = std::norm(sol.r);
  sol.T_coherent = eta_s.real() / eta0.real() * std::norm(sol.t);
  return sol;
}

double rear_interface_transmittance(const LayerStack& stack, double k, double beta,
                                    Polarization pol) {
  require_pure(pol);
  const Complex eps_s = epsilon(stack.substrate.model, k);
  const Complex eps_x{stack.exit_index * stack.exit_index, 0.0};
  const Complex q_x = normal_index(eps_x, beta);
  if (q_x.real() <= 0.0) return 0.0;  // total internal reflection
  const Complex eta_s = tilted_admittance(eps_s, normal_index(eps_s, beta), pol);
  const Complex eta_x = tilted_admittance(eps_x, q_x, pol);
  return 4.0 * eta_s.real() * eta_x.real() / std::norm(eta_s + eta_x);
}

namespace {

Response pure_response(const LayerStack& stack, double k, double angle_deg, Polarization pol) {
  const CoherentSolution sol = solve_coherent(stack, k, angle_deg, pol);
  double T = sol.T_coherent;
  if (stack.substrate_mode == SubstrateMode::incoherent_to_air) {
    const Complex eps_s = epsilon(stack.substrate.model, k);
    if (eps_s.imag() > kLosslessTol * std::abs(eps_s)) {
      throw DomainError("incoherent substrate '" + stack.substrate.name + "' must be lossless");
    }
    T *= rear_interface_transmittance(stack, k, sol.beta, pol);
  }
  return {T, sol.R, 1.0 - T - sol.R};
}

}  // namespace

Response stack_response(const LayerStack& stack, double k, double angle_deg, Polarization pol) {
  if (pol != Polarization::unpolarized) return pure_response(stack, k, angle_deg, pol);
  const Response s = pure_response(stack, k, angle_deg, Polarization::s);
  const Response p = pure_response(stack, k, angle_deg, Polarization::p);
  const double T = 0.5 * (s.T + p.T);
  const double R = 0.5 * (s.R + p.R);
  return {T, R, 1.0 - T - R};
}

Spectrum spectrum_scan(const LayerStack& stack, const SpectralGrid& grid, double angle_deg,
                       Polarization pol) {
  validate(grid);
  Spectrum out;
  out.grid = grid;
  out.angle_deg = angle_deg;
  out.polarization = pol;
  const std::size_t n = grid.size();
  out.T.resize(n);
  out.R.resize(n);
  out.A.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const Response r = stack_response(stack, grid.at(i), angle_deg, pol);
    out.T[i] = r.T;
    out.R[i] = r.R;
    out.A[i] = r.A;
  });
  return out;
}

std::vector<std::pair<double, double>> divergence_nodes(double angle_deg,
                                                        const DivergenceQuadrature& q) {
  if (!(q.sigma_deg > 0.0) || q.points <= 1) return {{angle_deg, 1.0}};
  std::vector<std::pair<double, double>> nodes;
  double total = 0.0;
  for (int i = 0; i < q.points; ++i) {
    const double u = -q.span_sigmas + 2.0 * q.span_sigmas * i / (q.points - 1);
    const double theta = angle_deg + u * q.sigma_deg;
    if (!(std::abs(theta) < 90.0)) continue;
    const double w = std::exp(-0.5 * u * u);
    nodes.emplace_back(theta, w);
    total += w;
  }
  for (auto& [theta, w] : nodes) w /= total;
  return nodes;
}

std::vector<Spectrum> angle_scan(const LayerStack& stack, const SpectralGrid& grid,
                                 std::span<const double> angles_deg, Polarization pol,
                                 const DivergenceQuadrature& divergence) {
  validate(grid);
  std::vector<Spectrum> out;
  out.reserve(angles_deg.size());
  for (const double angle : angles_deg) {
    if (!(std::abs(angle) < 90.0)) {
      throw DomainError("incidence angle must lie in (-90, 90) degrees, got " +
                        std::to_string(angle));
    }
    const auto nodes = divergence_nodes(angle, divergence);
    if (nodes.size() == 1) {
      out.push_back(spectrum_scan(stack, grid, angle, pol));
      continue;
    }
    Spectrum avg;
    avg.grid = grid;
    avg.angle_deg = angle;
    avg.polarization = pol;
    const std::size_t n = grid.size();
    avg.T.resize(n);
    avg.R.resize(n);
    avg.A.resize(n);
    parallel_for(n, [&](std::size_t i) {
      double T = 0.0;
      double R = 0.0;
      for (const auto& [theta, w] : nodes) {
        const Response r = stack_response(stack, grid.at(i), theta, pol);
        T += w * r.T;
        R += w * r.R;
      }
      avg.T[i] = T;
      avg.R[i] = R;
      avg.A[i] = 1.0 - T - R;
    });
    out.push_back(std::move(avg));
  }
  return out;
}

}  // namespace vibropol
