#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibropol/config.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"

namespace vibropol {

/// A spectrum to be matched on its own wavenumber points.
struct TargetSpectrum {
  std::vector<double> k;
  std::vector<double> values;
};

/// Full-stack fit: free parameters address the stack template by name.
///
///   layer.<i>.thickness                    nm
///   material.<name>.eps                    constant media
///   material.<name>.eps_b                  Lorentz background
///   material.<name>.osc.<j>.f|k0|gamma     Lorentz oscillator j
///   material.<name>.damping_multiplier     Lorentz-Drude metals
///
/// A material parameter changes every layer made of that material.
struct FitProblem {
  MaterialLibrary materials;
  StackSpec stack;
  std::vector<FreeParameter> free;
  TargetSpectrum target;
  Channel channel = Channel::T;
  double angle_deg = 0.0;
  Polarization polarization = Polarization::unpolarized;
  DivergenceQuadrature divergence;
};

/// Throws ConfigError for unknown parameter names, bad bounds, template
/// values outside the bounds, or an empty/non-positive target grid.
void validate(const FitProblem& problem);

/// Current template value of every free parameter.
std::vector<double> template_values(const FitProblem& problem);

/// Material library and stack spec with `params` applied.
std::pair<MaterialLibrary, StackSpec> apply_parameters(const FitProblem& problem,
                                                       std::span<const double> params);

/// Model channel at the target points for the given parameters.
std::vector<double> model_values(const FitProblem& problem, std::span<const double> params);

/// model - target on the target grid.
std::vector<double> residual_vector(const FitProblem& problem, std::span<const double> params);

double fit_loss(const FitProblem& problem, std::span<const double> params);

/// Gradient of fit_loss as assembled by the solver (2 J^T r).
std::vector<double> fit_loss_gradient(const FitProblem& problem, std::span<const double> params);

struct FitOptions {
  int max_iterations = 2000;
  double relative_tolerance = 1e-8;
  /// Additional starts drawn uniformly inside the bounds; 0 runs only the
  /// template start.
  int multistart = 0;
};

struct StartOutcome {
  std::vector<double> start;
  std::vector<double> params;
  double loss = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> initial_params;
  double loss = 0.0;
  double initial_loss = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;
  std::size_t best_start = 0;
  std::vector<StartOutcome> starts;
};

/// Bounded Levenberg-Marquardt from the template values, plus optional
/// seeded multi-start. The best start wins by loss, ties to the lower index.
/// Deterministic for a given (problem, seed, options).
FitResult solve(const FitProblem& problem, std::optional<std::uint64_t> seed = std::nullopt,
                const FitOptions& options = {});

/// Uniform points in the parameter box from a seeded 64-bit Mersenne
/// Twister; start 0 is the template.
std::vector<std::vector<double>> multistart_points(const FitProblem& problem, std::uint64_t seed,
                                                   int extra_starts);

}  // namespace vibropol
