#include "vibropol/fit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "vibropol/errors.hpp"
#include "vibropol/lsq.hpp"
#include "vibropol/parallel.hpp"

namespace vibropol {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t parse_index(const std::string& s, const std::string& name) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad index '" + s + "' in fit parameter '" + name + "'");
  }
  return v;
}

// Resolves a parameter name to the double it controls.
double& parameter_ref(MaterialLibrary& materials, StackSpec& stack, const std::string& name) {
  const auto parts = split(name, '.');
  auto bad = [&]() -> ConfigError { return ConfigError("unknown fit parameter '" + name + "'"); };
  if (parts.size() == 3 && parts[0] == "layer" && parts[2] == "thickness") {
    const std::size_t i = parse_index(parts[1], name);
    if (i >= stack.layers.size()) throw bad();
    return stack.layers[i].thickness_nm;
  }
  if (parts.size() < 3 || parts[0] != "material") throw bad();
  // Material names may themselves contain dots; the property is at the end.
  auto find_material = [&](std::size_t name_parts) -> DielectricModel& {
    std::string mat = parts[1];
    for (std::size_t i = 2; i < 1 + name_parts; ++i) mat += "." + parts[i];
    const auto it = materials.find(mat);
    if (it == materials.end()) throw ConfigError("fit parameter '" + name + "' names unknown material '" + mat + "'");
    return it->second;
  };
  const std::string& last = parts.back();
  if (parts.size() >= 5 && parts[parts.size() - 3] == "osc") {
    auto& model = find_material(parts.size() - 4);
    auto* medium = std::get_if<LorentzMedium>(&model);
    if (!medium) throw ConfigError("fit parameter '" + name + "' needs a Lorentz material");
    const std::size_t j = parse_index(parts[parts.size() - 2], name);
    if (j >= medium->oscillators.size()) throw bad();
    auto& osc = medium->oscillators[j];
    if (last == "f") return osc.strength;
    if (last == "k0") return osc.center;
    if (last == "gamma") return osc.damping;
    throw bad();
  }
  auto& model = find_material(parts.size() - 2);
  if (last == "eps") {
    if (auto* c = std::get_if<ConstantMedium>(&model)) return c->eps;
  } else if (last == "eps_b") {
    if (auto* m = std::get_if<LorentzMedium>(&model)) return m->eps_background;
  } else if (last == "damping_multiplier") {
    if (auto* m = std::get_if<DrudeLorentzMetal>(&model)) return m->damping_multiplier;
  }
  throw ConfigError("fit parameter '" + name + "' does not apply to that material type");
}

std::vector<double> lower_bounds(const FitProblem& p) {
  std::vector<double> out;
  for (const auto& f : p.free) out.push_back(f.lower);
  return out;
}

std::vector<double> upper_bounds(const FitProblem& p) {
  std::vector<double> out;
  for (const auto& f : p.free) out.push_back(f.upper);
  return out;
}

}  // namespace

void validate(const FitProblem& problem) {
  if (problem.target.k.empty() || problem.target.k.size() != problem.target.values.size()) {
    throw ConfigError("fit target needs matching, non-empty wavenumber and value columns");
  }
  for (const double k : problem.target.k) {
    if (!(k > 0.0)) throw ConfigError("fit target wavenumbers must be positive");
  }
  const auto values = template_values(problem);
  for (std::size_t i = 0; i < problem.free.size(); ++i) {
    const auto& f = problem.free[i];
    if (!std::isfinite(f.lower) || !std::isfinite(f.upper) || !(f.lower < f.upper)) {
      throw ConfigError("fit parameter '" + f.name + "' needs finite bounds min < max");
    }
    if (values[i] < f.lower || values[i] > f.upper) {
      throw ConfigError("template value of fit parameter '" + f.name + "' lies outside its bounds");
    }
  }
}

std::vector<double> template_values(const FitProblem& problem) {
  MaterialLibrary materials = problem.materials;
  StackSpec stack = problem.stack;
  std::vector<double> out;
  for (const auto& f : problem.free) out.push_back(parameter_ref(materials, stack, f.name));
  return out;
}

std::pair<MaterialLibrary, StackSpec> apply_parameters(const FitProblem& problem,
                                                       std::span<const double> params) {
  if (params.size() != problem.free.size()) {
    throw ConfigError("expected " + std::to_string(problem.free.size()) + " fit parameters");
  }
  MaterialLibrary materials = problem.materials;
  StackSpec stack = problem.stack;
  for (std::size_t i = 0; i < params.size(); ++i) {
    parameter_ref(materials, stack, problem.free[i].name) = params[i];
  }
  return {std::move(materials), std::move(stack)};
}

std::vector<double> model_values(const FitProblem& problem, std::span<const double> params) {
  const auto [materials, spec] = apply_parameters(problem, params);
  const LayerStack stack = build_stack(materials, spec);
  const auto nodes = divergence_nodes(problem.angle_deg, problem.divergence);
  const std::size_t n = problem.target.k.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    double T = 0.0;
    double R = 0.0;
    for (const auto& [theta, w] : nodes) {
      const Response r = stack_response(stack, problem.target.k[i], theta, problem.polarization);
      T += w * r.T;
      R += w * r.R;
    }
    switch (problem.channel) {
      case Channel::T: out[i] = T; break;
      case Channel::R: out[i] = R; break;
      case Channel::A: out[i] = 1.0 - T - R; break;
    }
  });
  return out;
}

std::vector<double> residual_vector(const FitProblem& problem, std::span<const double> params) {
  auto model = model_values(problem, params);
  for (std::size_t i = 0; i < model.size(); ++i) model[i] -= problem.target.values[i];
  return model;
}

double fit_loss(const FitProblem& problem, std::span<const double> params) {
  return sum_of_squares(residual_vector(problem, params));
}

std::vector<double> fit_loss_gradient(const FitProblem& problem, std::span<const double> params) {
  const ResidualFunction f = [&](std::span<const double> p) { return residual_vector(problem, p); };
  return loss_gradient(f, params, lower_bounds(problem), upper_bounds(problem));
}

std::vector<std::vector<double>> multistart_points(const FitProblem& problem, std::uint64_t seed,
                                                   int extra_starts) {
  std::vector<std::vector<double>> starts{template_values(problem)};
  std::mt19937_64 rng(seed);
  for (int s = 0; s < extra_starts; ++s) {
    std::vector<double> x;
    for (const auto& f : problem.free) {
      // 53 random mantissa bits, so the draw is identical on every platform.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x.push_back(f.lower + u * (f.upper - f.lower));
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

FitResult solve(const FitProblem& problem, std::optional<std::uint64_t> seed,
                const FitOptions& options) {
  validate(problem);
  const auto lower = lower_bounds(problem);
  const auto upper = upper_bounds(problem);
  const auto starts = multistart_points(problem, seed.value_or(0), options.multistart);

  const ResidualFunction f = [&](std::span<const double> p) { return residual_vector(problem, p); };
  LsqOptions lsq;
  lsq.max_iterations = options.max_iterations;
  lsq.relative_tolerance = options.relative_tolerance;

  // Starts run one after another; each residual evaluation is already
  // parallel over wavenumbers.
  std::vector<LsqResult> runs;
  runs.reserve(starts.size());
  for (const auto& start : starts) runs.push_back(bounded_least_squares(f, start, lower, upper, lsq));

  FitResult result;
  for (const auto& fp : problem.free) result.names.push_back(fp.name);
  result.initial_params = starts.front();
  result.initial_loss = runs.front().initial_loss;
  std::size_t best = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    result.starts.push_back({starts[i], runs[i].x, runs[i].loss, runs[i].iterations, runs[i].converged});
    if (runs[i].loss < runs[best].loss) best = i;
  }
  result.best_start = best;
  result.params = runs[best].x;
  result.loss = runs[best].loss;
  result.iterations = runs[best].iterations;
  result.converged = runs[best].converged;
  result.residuals = runs[best].residuals;
  return result;
}

}  // namespace vibropol
