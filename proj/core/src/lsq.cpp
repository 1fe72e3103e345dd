#include "vibropol/lsq.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "vibropol/errors.hpp"

namespace vibropol {

namespace {

struct Box {
  std::vector<double> lo;
  std::vector<double> width;

  std::vector<double> to_physical(const Eigen::VectorXd& u) const {
    std::vector<double> x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + width[i] * u[static_cast<Eigen::Index>(i)];
    return x;
  }
};

Box make_box(std::span<const double> lower, std::span<const double> upper, std::size_t n) {
  if (lower.size() != n || upper.size() != n) {
    throw ConfigError("bounds must have one entry per parameter");
  }
  Box box;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      throw ConfigError("parameter " + std::to_string(i) + " needs finite bounds lower < upper");
    }
    box.lo.push_back(lower[i]);
    box.width.push_back(upper[i] - lower[i]);
  }
  return box;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Jacobian of r(u) with central differences, one-sided at the box faces.
Eigen::MatrixXd jacobian(const ResidualFunction& f, const Box& box, const Eigen::VectorXd& u,
                         std::size_t m, double h) {
  const auto n = u.size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd up = u;
    Eigen::VectorXd down = u;
    double span = 2.0 * h;
    if (u[i] + h > 1.0) {
      up[i] = u[i];
      down[i] = u[i] - h;
      span = h;
    } else if (u[i] - h < 0.0) {
      up[i] = u[i] + h;
      down[i] = u[i];
      span = h;
    } else {
      up[i] = u[i] + h;
      down[i] = u[i] - h;
    }
    const auto r_up = f(box.to_physical(up));
    const auto r_down = f(box.to_physical(down));
    if (r_up.size() != m || r_down.size() != m) {
      throw DomainError("residual length changed between evaluations");
    }
    for (std::size_t k = 0; k < m; ++k) {
      jac(static_cast<Eigen::Index>(k), i) = (r_up[k] - r_down[k]) / span;
    }
  }
  return jac;
}

}  // namespace

double sum_of_squares(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return s;
}

LsqResult bounded_least_squares(const ResidualFunction& residuals, std::vector<double> x0,
                                std::span<const double> lower, std::span<const double> upper,
                                const LsqOptions& options) {
  const std::size_t n = x0.size();
  const Box box = make_box(lower, upper, n);

  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (x0[i] < lower[i] || x0[i] > upper[i]) {
      throw ConfigError("starting value of parameter " + std::to_string(i) + " is outside its bounds");
    }
    u[static_cast<Eigen::Index>(i)] = (x0[i] - box.lo[i]) / box.width[i];
  }

  LsqResult result;
  result.x = x0;
  result.residuals = residuals(x0);
  result.loss = sum_of_squares(result.residuals);
  result.initial_loss = result.loss;
  if (!std::isfinite(result.loss)) throw DomainError("loss is not finite at the starting point");
  result.loss_trace.push_back(result.loss);

  if (n == 0 || result.loss == 0.0) {
    result.converged = true;
    return result;
  }

  const std::size_t m = result.residuals.size();
  double damping = options.initial_damping;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const Eigen::MatrixXd jac = jacobian(residuals, box, u, m, options.fd_step);
    const Eigen::VectorXd r = as_vector(result.residuals);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    const double diag_floor = std::max(1e-12 * jtj.diagonal().maxCoeff(), 1e-30);

    bool accepted = false;
    bool stalled = false;
    while (!accepted) {
      Eigen::MatrixXd lhs = jtj;
      for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
        lhs(i, i) += damping * std::max(jtj(i, i), diag_floor);
      }
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      Eigen::VectorXd trial = (u + step).cwiseMax(0.0).cwiseMin(1.0);
      if ((trial - u).norm() == 0.0 || !step.allFinite()) {
        stalled = true;
        break;
      }
      const auto x_trial = box.to_physical(trial);
      auto r_trial = residuals(x_trial);
      const double loss_trial = sum_of_squares(r_trial);
      if (std::isfinite(loss_trial) && loss_trial < result.loss) {
        const double improvement = (result.loss - loss_trial) / result.loss;
        u = trial;
        result.x = x_trial;
        result.residuals = std::move(r_trial);
        result.loss = loss_trial;
        result.loss_trace.push_back(loss_trial);
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        if (loss_trial == 0.0 || improvement < options.relative_tolerance) {
          result.converged = true;
        }
      } else {
        damping *= 4.0;
        if (damping > 1e14) {
          stalled = true;
          break;
        }
      }
    }
    if (stalled) {
      // No descent direction left inside the box: a stationary point.
      result.converged = true;
    }
    if (result.converged) break;
  }
  return result;
}

std::vector<double> loss_gradient(const ResidualFunction& residuals, std::span<const double> x,
                                  std::span<const double> lower, std::span<const double> upper,
                                  double fd_step) {
  const std::size_t n = x.size();
  const Box box = make_box(lower, upper, n);
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = (x[i] - box.lo[i]) / box.width[i];
  const auto r = residuals(std::vector<double>(x.begin(), x.end()));
  const Eigen::MatrixXd jac = jacobian(residuals, box, u, r.size(), fd_step);
  const Eigen::VectorXd g = 2.0 * jac.transpose() * as_vector(r);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = g[static_cast<Eigen::Index>(i)] / box.width[i];
  return out;
}

}  // namespace vibropol
