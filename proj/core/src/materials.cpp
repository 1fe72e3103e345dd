#include "vibropol/materials.hpp"

#include <cmath>
#include <string>

#include "vibropol/errors.hpp"
#include "vibropol/units.hpp"

namespace vibropol {

namespace {

void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError("wavenumber must be positive and finite, got " + std::to_string(k));
  }
}

// Drop a negative-zero imaginary part so the passive branch is chosen for
// negative real arguments.
Complex clean_zero(Complex z) {
  if (z.imag() == 0.0) return {z.real(), 0.0};
  return z;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate(const LorentzOscillator& osc) {
  if (!(osc.strength >= 0.0) || !std::isfinite(osc.strength)) {
    throw ConfigError("oscillator strength must be >= 0");
  }
  if (!(osc.center > 0.0)) throw ConfigError("oscillator center must be > 0");
  if (!(osc.damping > 0.0)) throw ConfigError("oscillator damping must be > 0");
}

void validate(const LorentzMedium& medium) {
  if (!(medium.eps_background >= 1.0)) {
    throw ConfigError("background permittivity must be >= 1");
  }
  for (const auto& osc : medium.oscillators) validate(osc);
}

void validate(const DrudeLorentzMetal& metal) {
  if (!(metal.plasma_frequency > 0.0)) throw ConfigError("plasma frequency must be > 0");
  if (!(metal.free_strength >= 0.0)) throw ConfigError("free-electron strength must be >= 0");
  if (!(metal.gamma0 > 0.0)) throw ConfigError("free-electron damping must be > 0");
  if (!(metal.damping_multiplier >= 1.0)) throw ConfigError("damping multiplier must be >= 1");
  for (const auto& term : metal.bound_terms) {
    if (!(term.strength >= 0.0)) throw ConfigError("bound-term strength must be >= 0");
    if (!(term.damping > 0.0)) throw ConfigError("bound-term damping must be > 0");
    if (!(term.center > 0.0)) throw ConfigError("bound-term frequency must be > 0");
  }
}

void validate(const DielectricModel& model) {
  std::visit(Overloaded{
                 [](const ConstantMedium& c) {
                   if (!(c.eps >= 1.0) || !std::isfinite(c.eps)) {
                     throw ConfigError("constant permittivity must be >= 1");
                   }
                 },
                 [](const LorentzMedium& m) { validate(m); },
                 [](const DrudeLorentzMetal& m) { validate(m); },
             },
             model);
}

Complex epsilon_lorentz(const LorentzMedium& medium, double k) {
  require_positive_k(k);
  Complex eps{medium.eps_background, 0.0};
  for (const auto& osc : medium.oscillators) {
    if (osc.strength == 0.0) continue;
    const Complex denom{k * k - osc.center * osc.center, k * osc.damping};
    eps -= osc.strength / denom;
  }
  return eps;
}

Complex epsilon_drude_lorentz(const DrudeLorentzMetal& metal, double k) {
  require_positive_k(k);
  const double w = units::cm1_to_ev(k);
  const double wp2 = metal.plasma_frequency * metal.plasma_frequency;
  // Written with e^{+i omega t}; conjugated at the end.
  Complex eps = 1.0 - metal.free_strength * wp2 /
                          (w * Complex{w, -metal.effective_damping()});
  for (const auto& term : metal.bound_terms) {
    eps += term.strength * wp2 / Complex{term.center * term.center - w * w, w * term.damping};
  }
  return std::conj(eps);
}

Complex epsilon(const DielectricModel& model, double k) {
  return std::visit(Overloaded{
                        [k](const ConstantMedium& c) {
                          require_positive_k(k);
                          return Complex{c.eps, 0.0};
                        },
                        [k](const LorentzMedium& m) { return epsilon_lorentz(m, k); },
                        [k](const DrudeLorentzMetal& m) { return epsilon_drude_lorentz(m, k); },
                    },
                    model);
}

Complex passive_sqrt(Complex z) {
  Complex n = std::sqrt(clean_zero(z));
  if (n.imag() < 0.0) n = -n;
  return n;
}

Complex refractive_index(const DielectricModel& model, double k) {
  return passive_sqrt(epsilon(model, k));
}

bool is_lossless(const DielectricModel& model) {
  if (std::holds_alternative<ConstantMedium>(model)) return true;
  if (const auto* m = std::get_if<LorentzMedium>(&model)) {
    for (const auto& osc : m->oscillators) {
      if (osc.strength != 0.0) return false;
    }
    return true;
  }
  return false;
}

DielectricModel without_vibrations(const DielectricModel& model) {
  if (const auto* m = std::get_if<LorentzMedium>(&model)) {
    LorentzMedium bare = *m;
    for (auto& osc : bare.oscillators) osc.strength = 0.0;
    return bare;
  }
  return model;
}

DrudeLorentzMetal rakic_gold(double damping_multiplier) {
  DrudeLorentzMetal au;
  au.plasma_frequency = 9.03;
  au.free_strength = 0.76;
  au.gamma0 = 0.05;
  au.bound_terms = {
      {0.02, 0.24, 0.41}, {0.01, 0.34, 0.83}, {0.07, 0.870, 2.96},
      {0.60, 2.49, 4.30}, {4.38, 2.21, 13.32},
  };
  au.damping_multiplier = damping_multiplier;
  return au;
}

LorentzMedium pvac_carbonyl() {
  LorentzMedium pvac;
  pvac.eps_background = 1.41 * 1.41;
  pvac.oscillators.push_back({5.0e4, 1739.0, 13.0, "C=O stretch"});
  return pvac;
}

}  // namespace vibropol
