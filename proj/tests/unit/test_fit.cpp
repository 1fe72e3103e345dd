#include <doctest.h>

#include <cmath>
#include <vector>

#include "vibropol/errors.hpp"
#include "vibropol/fit.hpp"

using namespace vibropol;

namespace {

FitProblem paper_problem() {
  FitProblem p;
  p.materials = {{"Air", ConstantMedium{1.0}},
                 {"Ge", ConstantMedium{16.0}},
                 {"Au", rakic_gold(2.5)},
                 {"PVAc", pvac_carbonyl()}};
  p.stack.ambient = "Air";
  p.stack.layers = {{"Au", 10.0}, {"PVAc", 1930.0}, {"Au", 10.0}};
  p.stack.substrate = "Ge";
  p.free = {{"layer.1.thickness", 1700.0, 2200.0},
            {"material.PVAc.osc.0.f", 3e4, 8e4},
            {"material.PVAc.osc.0.gamma", 5.0, 30.0},
            {"material.Au.damping_multiplier", 1.0, 4.0}};
  p.target.k.clear();
  for (double k = 1500.0; k <= 2000.0; k += 2.0) p.target.k.push_back(k);
  p.target.values.assign(p.target.k.size(), 0.0);
  p.target.values = model_values(p, template_values(p));
  return p;
}

// Moves the template 10% away from the generating values.
FitProblem perturbed(FitProblem p) {
  p.stack.layers[1].thickness_nm *= 1.1;
  auto& pvac = std::get<LorentzMedium>(p.materials["PVAc"]);
  pvac.oscillators[0].strength *= 1.1;
  pvac.oscillators[0].damping *= 1.1;
  std::get<DrudeLorentzMetal>(p.materials["Au"]).damping_multiplier *= 1.1;
  return p;
}

const std::vector<double> kTruth{1930.0, 5e4, 13.0, 2.5};

}  // namespace

TEST_CASE("template values and parameter application") {
  const FitProblem p = paper_problem();
  CHECK(template_values(p) == kTruth);
  const auto [mats, stack] = apply_parameters(p, std::vector<double>{2000.0, 4e4, 10.0, 3.0});
  CHECK(stack.layers[1].thickness_nm == 2000.0);
  CHECK(std::get<LorentzMedium>(mats.at("PVAc")).oscillators[0].strength == 4e4);
  CHECK(std::get<LorentzMedium>(mats.at("PVAc")).oscillators[0].damping == 10.0);
  CHECK(std::get<DrudeLorentzMetal>(mats.at("Au")).damping_multiplier == 3.0);
}

TEST_CASE("residuals") {
  FitProblem p = paper_problem();
  for (double r : residual_vector(p, kTruth)) CHECK(r == 0.0);
  const double c = 0.0125;
  for (double& v : p.target.values) v -= c;
  for (double r : residual_vector(p, kTruth)) CHECK(r == doctest::Approx(c).epsilon(1e-12));
  CHECK(fit_loss(p, kTruth) == doctest::Approx(c * c * p.target.k.size()).epsilon(1e-10));
}

TEST_CASE("exact target converges at iteration zero") {
  const FitResult r = solve(paper_problem());
  CHECK(r.loss == 0.0);
  CHECK(r.iterations == 0);
  CHECK(r.converged);
  CHECK(r.params == kTruth);
}

TEST_CASE("no free parameters returns the template") {
  FitProblem p = paper_problem();
  for (double& v : p.target.values) v += 0.001;
  p.free.clear();
  const FitResult r = solve(p);
  CHECK(r.params.empty());
  CHECK(r.loss == doctest::Approx(1e-6 * p.target.k.size()).epsilon(1e-9));
  CHECK(r.loss == r.initial_loss);
}

TEST_CASE("four parameter round trip") {
  const FitProblem p = perturbed(paper_problem());
  const FitResult r = solve(p);
  CHECK(r.converged);
  CHECK(r.loss < 1e-8);
  CHECK(r.loss <= r.initial_loss);
  for (std::size_t i = 0; i < kTruth.size(); ++i) {
    CHECK(std::abs(r.params[i] - kTruth[i]) <= 0.02 * kTruth[i]);
    CHECK(r.params[i] >= p.free[i].lower);
    CHECK(r.params[i] <= p.free[i].upper);
  }
}

TEST_CASE("multi-start is deterministic and lands in one basin") {
  const FitProblem p = perturbed(paper_problem());
  FitOptions opts;
  opts.multistart = 9;
  const FitResult a = solve(p, 42, opts);
  const FitResult b = solve(p, 42, opts);
  CHECK(a.params == b.params);
  CHECK(a.loss == b.loss);
  REQUIRE(a.starts.size() == 10);
  int in_basin = 0;
  for (const auto& s : a.starts) {
    bool ok = true;
    for (std::size_t i = 0; i < kTruth.size(); ++i) ok = ok && std::abs(s.params[i] - kTruth[i]) <= 0.02 * kTruth[i];
    in_basin += ok;
  }
  CHECK(in_basin == 10);
  CHECK(multistart_points(p, 42, 9) == multistart_points(p, 42, 9));
  CHECK(multistart_points(p, 42, 9) != multistart_points(p, 43, 9));
}

TEST_CASE("loss gradient against central differences") {
  const FitProblem p = perturbed(paper_problem());
  const auto x = template_values(p);
  const auto g = fit_loss_gradient(p, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * (p.free[j].upper - p.free[j].lower);
    auto xp = x;
    auto xm = x;
    xp[j] += h;
    xm[j] -= h;
    const double fd = (fit_loss(p, xp) - fit_loss(p, xm)) / (2.0 * h);
    CHECK(std::abs(g[j] - fd) <= 1e-4 * std::abs(fd));
  }
}

TEST_CASE("problem validation") {
  FitProblem p = paper_problem();
  p.free.push_back({"layer.7.thickness", 1.0, 2.0});
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = paper_problem();
  p.free[0] = {"layer.1.thickness", 2000.0, 2100.0};
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = paper_problem();
  p.free[0].upper = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = paper_problem();
  p.free.push_back({"material.Nope.eps", 1.0, 2.0});
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = paper_problem();
  p.target.k.clear();
  p.target.values.clear();
  CHECK_THROWS_AS(validate(p), ConfigError);
}
