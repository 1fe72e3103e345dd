#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vibropol {

using ResidualFunction = std::function<std::vector<double>(std::span<const double>)>;

struct LsqOptions {
  int max_iterations = 2000;
  // Stop when an accepted step improves the loss by less than this fraction.
  double relative_tolerance = 1e-8;
  // Finite-difference step in box-normalised coordinates.
  double fd_step = 1e-6;
  double initial_damping = 1e-3;
};

struct LsqResult {
  std::vector<double> x;
  std::vector<double> residuals;
  double loss = 0.0;  // sum of squared residuals
  double initial_loss = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_trace;  // loss after every accepted iterate
};

/// Box-constrained Levenberg-Marquardt. Parameters are rescaled to [0, 1] by
/// their bounds; trial points are projected back onto the box, and the
/// finite-difference Jacobian steps inward at active bounds, so the residual
/// function is never evaluated outside [lower, upper]. Throws ConfigError on
/// bad bounds and DomainError if the starting loss is not finite.
LsqResult bounded_least_squares(const ResidualFunction& residuals, std::vector<double> x0,
                                std::span<const double> lower, std::span<const double> upper,
                                const LsqOptions& options = {});

/// Gradient of the loss sum(r^2), 2 J^T r, from the same finite-difference
/// Jacobian the solver uses (physical units).
std::vector<double> loss_gradient(const ResidualFunction& residuals, std::span<const double> x,
                                  std::span<const double> lower, std::span<const double> upper,
                                  double fd_step = 1e-6);

double sum_of_squares(std::span<const double> v);

}  // namespace vibropol
