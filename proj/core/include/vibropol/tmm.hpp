#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vibropol/materials.hpp"

namespace vibropol {

enum class Polarization { s, p, unpolarized };
enum class SubstrateMode { coherent_semi_infinite, incoherent_to_air };

std::string to_string(Polarization pol);
std::string to_string(SubstrateMode mode);

struct Medium {
  std::string name;
  DielectricModel model = ConstantMedium{};
};

struct Layer {
  std::string name;  // material name, used for reporting and fitting
  DielectricModel material = ConstantMedium{};
  double thickness_nm = 0.0;
};

/// Light enters from the ambient into layers.front() and leaves through the
/// substrate. In incoherent_to_air mode the substrate is treated as thick:
/// the coherent transmittance into it is multiplied once by the
/// substrate/exit power transmittance, with no multiple reflections.
struct LayerStack {
  Medium ambient;
  std::vector<Layer> layers;
  Medium substrate;
  SubstrateMode substrate_mode = SubstrateMode::coherent_semi_infinite;
  double exit_index = 1.0;  // medium behind an incoherent substrate

  double total_thickness_nm() const;
};

/// Throws ConfigError on negative/non-finite thickness or invalid materials.
void validate(const LayerStack& stack);

/// Same layers seen from the substrate side. Only defined for coherent
/// stacks; the old substrate becomes the ambient.
LayerStack reversed(const LayerStack& stack);

/// Every Lorentz oscillator in every medium switched off.
LayerStack without_vibrations(const LayerStack& stack);

struct SpectralGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  double step = 1.0;

  std::size_t size() const;
  double at(std::size_t i) const { return k_min + static_cast<double>(i) * step; }
  std::vector<double> points() const;
  bool operator==(const SpectralGrid&) const = default;
};

/// Throws ConfigError unless 0 < k_min <= k_max and step > 0.
void validate(const SpectralGrid& grid);

struct Response {
  double T = 0.0;
  double R = 0.0;
  double A = 0.0;
};

struct Spectrum {
  SpectralGrid grid;
  double angle_deg = 0.0;
  Polarization polarization = Polarization::unpolarized;
  std::vector<double> T;
  std::vector<double> R;
  std::vector<double> A;

  std::size_t size() const { return T.size(); }
  const std::vector<double>& channel(char which) const;
};

struct Matrix2 {
  Complex m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  Complex det() const { return m11 * m22 - m12 * m21; }
  Matrix2 operator*(const Matrix2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
};

/// Normalised normal wavevector q = kz/k0 = sqrt(eps - beta^2), passive branch.
Complex normal_index(Complex eps, double beta);

/// Tilted admittance relating tangential H to tangential E for a forward wave.
Complex tilted_admittance(Complex eps, Complex q, Polarization pol);

/// Characteristic matrix mapping tangential (E, H) at the bottom of a layer to
/// the top: [E, H]_top = M [E, H]_bottom. beta = n_ambient sin(theta) is the
/// conserved in-plane index. Only s or p polarization.
Matrix2 layer_matrix(const Layer& layer, double k, double beta, Polarization pol);

/// Coherent amplitudes for one polarization, all fields tangential.
struct CoherentSolution {
  Complex r;
  Complex t;
  Complex eta_ambient;
  Complex eta_substrate;
  double beta = 0.0;
  double T_coherent = 0.0;  // power into the substrate
  double R = 0.0;
};

/// Pure s/p coherent solve; the substrate is semi-infinite regardless of mode.
CoherentSolution solve_coherent(const LayerStack& stack, double k, double angle_deg,
                                Polarization pol);

/// Power transmittance of the substrate/exit interface at the given in-plane
/// index, 0 beyond total internal reflection.
double rear_interface_transmittance(const LayerStack& stack, double k, double beta,
                                    Polarization pol);

Response stack_response(const LayerStack& stack, double k, double angle_deg, Polarization pol);

Spectrum spectrum_scan(const LayerStack& stack, const SpectralGrid& grid, double angle_deg,
                       Polarization pol);

struct DivergenceQuadrature {
  double sigma_deg = 0.0;
  int points = 11;
  double span_sigmas = 3.0;

  bool operator==(const DivergenceQuadrature&) const = default;
};

/// Nodes (degrees) and normalised weights for a Gaussian spread of incidence
/// angles about `angle_deg`. Nodes outside (-90, 90) are dropped.
std::vector<std::pair<double, double>> divergence_nodes(double angle_deg,
                                                        const DivergenceQuadrature& q);

std::vector<Spectrum> angle_scan(const LayerStack& stack, const SpectralGrid& grid,
                                 std::span<const double> angles_deg, Polarization pol,
                                 const DivergenceQuadrature& divergence = {});

}  // namespace vibropol
