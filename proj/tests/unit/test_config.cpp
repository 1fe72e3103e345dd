#include <doctest.h>

#include <string>

#include "vibropol/config.hpp"
#include "vibropol/errors.hpp"

using namespace vibropol;

namespace {

const std::string kMinimal = R"({
  "materials": {
    "Air": {"type": "constant", "n": 1.0},
    "Ge": {"type": "constant", "n": 4.0},
    "Au": {"type": "drude_lorentz", "preset": "rakic_gold", "damping_multiplier": 2.5},
    "PVAc": {"type": "lorentz", "n_b": 1.41,
             "oscillators": [{"f": 5e4, "k0": 1739, "gamma": 13, "label": "C=O"}]}
  },
  "stack": {
    "layers": [{"material": "Au", "thickness_nm": 10},
               {"material": "PVAc", "thickness_nm": 1930},
               {"material": "Au", "thickness_nm": 10}],
    "substrate": "Ge"
  }
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal config and defaults") {
  const Config c = parse_config(kMinimal);
  CHECK(c.materials.size() == 4);
  CHECK(c.stack.ambient == "Air");
  CHECK(c.stack.substrate_mode == SubstrateMode::incoherent_to_air);
  CHECK(c.grid == SpectralGrid{400.0, 7400.0, 1.0});
  CHECK(c.polarization == Polarization::unpolarized);
  const LayerStack s = build_stack(c.materials, c.stack);
  REQUIRE(s.layers.size() == 3);
  CHECK(std::get<LorentzMedium>(s.layers[1].material).eps_background == doctest::Approx(1.9881).epsilon(1e-14));
  CHECK(std::get<DrudeLorentzMetal>(s.layers[0].material) == rakic_gold(2.5));
  CHECK(std::get<ConstantMedium>(s.substrate.model).eps == 16.0);
}

TEST_CASE("round trip through the canonical form") {
  std::string text = kMinimal;
  text = replace(text, R"("substrate": "Ge")",
                 R"("substrate": "Ge", "substrate_mode": "coherent_semi_infinite", "incidence": "substrate")");
  text.insert(text.rfind('}'), R"(,
  "grid": {"min": 1500, "max": 2000, "step": 0.5},
  "angle": 12.5,
  "angles": {"min": -60, "max": 60, "step": 5},
  "polarization": "p",
  "divergence": {"sigma_deg": 2, "points": 7, "span_sigmas": 2.5},
  "analysis": {"window": [1500, 2000], "relative_prominence": 0.1, "window_points": 2},
  "field_map": {"z_step_nm": 5, "margin_nm": 50, "grid": {"min": 1000, "max": 4000, "step": 10}},
  "estimate": {"vibration": {"omega_cm1": 1740, "dipole_debye": 1, "reduced_mass_amu": 6.857, "damping_fwhm_meV": 3.2},
               "cavity": {"omega_cm1": 1740, "refractive_index": 1.41, "kappa_fwhm_meV": 17},
               "temperature_K": 300,
               "polymer": {"mass_density_g_cm3": 1.18, "monomer_mass_g_mol": 86.09},
               "rabi_splitting_meV": 20.7,
               "polariton_fwhm_meV": {"upper": 2.86, "lower": 1.5}},
  "fit": {"free": [{"name": "layer.1.thickness", "min": 1800, "max": 2100}],
          "channel": "R", "angle": 5, "target": "t.csv", "multistart": 3},
  "seed": 12345
)");
  const Config a = parse_config(text);
  CHECK(a.angles.size() == 25);
  CHECK(a.divergence == DivergenceQuadrature{2.0, 7, 2.5});
  CHECK(a.fit->channel == Channel::R);
  CHECK(a.stack.substrate_side_incidence);
  const Config b = parse_config(serialize_config(a));
  CHECK(a == b);
  CHECK(serialize_config(a) == serialize_config(b));
}

TEST_CASE("syntax errors carry line and column") {
  const std::string msg = error_of("{\n  \"materials\": {,\n}");
  CHECK(msg.find("test.cfg:2:") != std::string::npos);
  CHECK(msg.find("syntax") != std::string::npos);
}

TEST_CASE("semantic errors name the field") {
  CHECK(error_of(replace(kMinimal, R"("thickness_nm": 1930)", R"("thickness_nm": -5)"))
            .find("stack.layers[1].thickness_nm") != std::string::npos);
  CHECK(error_of(replace(kMinimal, R"("material": "PVAc")", R"("material": "PMMA")"))
            .find("PMMA") != std::string::npos);
  CHECK(error_of(replace(kMinimal, R"("gamma": 13)", R"("gamma": 0)"))
            .find("materials.PVAc.oscillators[0]: oscillator damping") != std::string::npos);
  CHECK(error_of(replace(kMinimal, R"("substrate": "Ge")", R"("substrate": "Ge", "colour": 1)"))
            .find("stack.colour") != std::string::npos);
  CHECK(error_of(replace(kMinimal, R"("type": "lorentz")", R"("type": "sellmeier")"))
            .find("materials.PVAc.type") != std::string::npos);
  CHECK(error_of(replace(kMinimal, R"("substrate": "Ge")", R"("substrate": "Ge", "incidence": "substrate")"))
            .find("stack.incidence") != std::string::npos);
  CHECK_FALSE(error_of(replace(kMinimal, R"("substrate": "Ge")", R"("substrate": "Ge", "_note": "x")"))
                  .size());
}

TEST_CASE("substrate-side incidence reverses the stack") {
  std::string text = replace(kMinimal, R"("thickness_nm": 10},
               {"material": "PVAc")", R"("thickness_nm": 20},
               {"material": "PVAc")");
  text = replace(text, R"("substrate": "Ge")",
                 R"("substrate": "Ge", "substrate_mode": "coherent_semi_infinite", "incidence": "substrate")");
  const Config c = parse_config(text);
  const LayerStack s = build_stack(c.materials, c.stack);
  CHECK(s.ambient.name == "Ge");
  CHECK(s.substrate.name == "Air");
  CHECK(s.layers.front().thickness_nm == 10.0);
  CHECK(s.layers.back().thickness_nm == 20.0);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"paper_coupled.cfg", "paper_uncoupled.cfg", "pvac_film.cfg", "fit_demo.cfg"}) {
    CAPTURE(name);
    const Config c = load_config(std::string(VIBROPOL_SOURCE_DIR) + "/configs/" + name);
    CHECK_NOTHROW(build_stack(c.materials, c.stack));
    CHECK(parse_config(serialize_config(c)) == c);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("angle ranges") {
  const auto a = angle_range(-60.0, 60.0, 5.0);
  CHECK(a.size() == 25);
  CHECK(a.front() == -60.0);
  CHECK(a.back() == 60.0);
  CHECK(a[12] == 0.0);
}
