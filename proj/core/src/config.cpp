#include "vibropol/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vibropol/errors.hpp"

namespace vibropol {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config error at " + (path.empty() ? std::string("<root>") : path) + ": " +
                    message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Ignored everywhere so configs can carry notes.
bool is_comment_key(const std::string& key) {
  return key.starts_with("_") || key == "comment";
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (is_comment_key(key)) continue;
    if (!ok.contains(key)) fail(join(path, key), "unknown field");
  }
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(join(path, key), "missing required number");
  const json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(join(path, key), "must be finite");
  return d;
}

double get_number_or(const json& j, const std::string& key, const std::string& path,
                     double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return get_number(j, key, path);
}

std::optional<double> get_optional_number(const json& j, const std::string& key,
                                          const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_number(j, key, path);
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(join(path, key), "missing required string");
  const json& v = j.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::string get_string_or(const json& j, const std::string& key, const std::string& path,
                          const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  return get_string(j, key, path);
}

int get_int_or(const json& j, const std::string& key, const std::string& path, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

template <class Fn>
void with_path(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.starts_with("config error at ")) throw;
    fail(path, what);
  }
}

// ---------------------------------------------------------------------------

DielectricModel parse_material(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = get_string(j, "type", path);
  DielectricModel model;
  if (type == "constant") {
    check_keys(j, path, {"type", "eps", "n"});
    if (j.contains("eps") == j.contains("n")) fail(path, "give exactly one of 'eps' or 'n'");
    ConstantMedium c;
    if (j.contains("eps")) {
      c.eps = get_number(j, "eps", path);
    } else {
      const double n = get_number(j, "n", path);
      c.eps = n * n;
    }
    model = c;
  } else if (type == "lorentz") {
    check_keys(j, path, {"type", "eps_b", "n_b", "oscillators"});
    if (j.contains("eps_b") == j.contains("n_b")) fail(path, "give exactly one of 'eps_b' or 'n_b'");
    LorentzMedium m;
    if (j.contains("eps_b")) {
      m.eps_background = get_number(j, "eps_b", path);
    } else {
      const double n = get_number(j, "n_b", path);
      m.eps_background = n * n;
    }
    if (j.contains("oscillators")) {
      const json& list = j.at("oscillators");
      const std::string lpath = join(path, "oscillators");
      if (!list.is_array()) fail(lpath, "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string opath = index_path(lpath, i);
        check_keys(list[i], opath, {"f", "k0", "gamma", "label"});
        LorentzOscillator osc;
        osc.strength = get_number(list[i], "f", opath);
        osc.center = get_number(list[i], "k0", opath);
        osc.damping = get_number(list[i], "gamma", opath);
        osc.label = get_string_or(list[i], "label", opath, "");
        with_path(opath, [&] { validate(osc); });
        m.oscillators.push_back(osc);
      }
    }
    model = m;
  } else if (type == "drude_lorentz") {
    check_keys(j, path, {"type", "preset", "omega_p", "f0", "gamma0", "damping_multiplier", "bound"});
    DrudeLorentzMetal m;
    if (j.contains("preset")) {
      const std::string preset = get_string(j, "preset", path);
      if (preset != "rakic_gold") fail(join(path, "preset"), "unknown preset '" + preset + "'");
      m = rakic_gold();
    } else {
      for (const char* key : {"omega_p", "f0", "gamma0"}) {
        if (!j.contains(key)) fail(join(path, key), "missing required number (or give a preset)");
      }
    }
    m.plasma_frequency = get_number_or(j, "omega_p", path, m.plasma_frequency);
    m.free_strength = get_number_or(j, "f0", path, m.free_strength);
    m.gamma0 = get_number_or(j, "gamma0", path, m.gamma0);
    m.damping_multiplier = get_number_or(j, "damping_multiplier", path, 1.0);
    if (j.contains("bound")) {
      m.bound_terms.clear();
      const json& list = j.at("bound");
      const std::string lpath = join(path, "bound");
      if (!list.is_array()) fail(lpath, "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string bpath = index_path(lpath, i);
        check_keys(list[i], bpath, {"f", "gamma", "omega"});
        m.bound_terms.push_back({get_number(list[i], "f", bpath), get_number(list[i], "gamma", bpath),
                                 get_number(list[i], "omega", bpath)});
      }
    }
    model = m;
  } else {
    fail(join(path, "type"), "unknown material type '" + type +
                                 "' (expected constant, lorentz or drude_lorentz)");
  }
  with_path(path, [&] { validate(model); });
  return model;
}

json material_to_json(const DielectricModel& model) {
  if (const auto* c = std::get_if<ConstantMedium>(&model)) {
    return {{"type", "constant"}, {"eps", c->eps}};
  }
  if (const auto* m = std::get_if<LorentzMedium>(&model)) {
    json oscs = json::array();
    for (const auto& o : m->oscillators) {
      json jo = {{"f", o.strength}, {"k0", o.center}, {"gamma", o.damping}};
      if (!o.label.empty()) jo["label"] = o.label;
      oscs.push_back(jo);
    }
    return {{"type", "lorentz"}, {"eps_b", m->eps_background}, {"oscillators", oscs}};
  }
  const auto& d = std::get<DrudeLorentzMetal>(model);
  json bound = json::array();
  for (const auto& b : d.bound_terms) {
    bound.push_back({{"f", b.strength}, {"gamma", b.damping}, {"omega", b.center}});
  }
  return {{"type", "drude_lorentz"},       {"omega_p", d.plasma_frequency},
          {"f0", d.free_strength},         {"gamma0", d.gamma0},
          {"damping_multiplier", d.damping_multiplier}, {"bound", bound}};
}

SubstrateMode parse_substrate_mode(const std::string& s, const std::string& path) {
  if (s == "incoherent_to_air") return SubstrateMode::incoherent_to_air;
  if (s == "coherent_semi_infinite" || s == "coherent") return SubstrateMode::coherent_semi_infinite;
  fail(path, "unknown substrate_mode '" + s + "'");
}

Polarization parse_polarization(const std::string& s, const std::string& path) {
  if (s == "s") return Polarization::s;
  if (s == "p") return Polarization::p;
  if (s == "unpolarized") return Polarization::unpolarized;
  fail(path, "unknown polarization '" + s + "' (expected s, p or unpolarized)");
}

SpectralGrid parse_grid(const json& j, const std::string& path) {
  check_keys(j, path, {"min", "max", "step"});
  SpectralGrid g{get_number(j, "min", path), get_number(j, "max", path),
                 get_number_or(j, "step", path, 1.0)};
  with_path(path, [&] { validate(g); });
  return g;
}

json grid_to_json(const SpectralGrid& g) {
  return {{"min", g.k_min}, {"max", g.k_max}, {"step", g.step}};
}

StackSpec parse_stack(const json& j, const std::string& path) {
  check_keys(j, path, {"ambient", "layers", "substrate", "substrate_mode", "exit_index", "incidence"});
  StackSpec s;
  s.ambient = get_string_or(j, "ambient", path, "Air");
  s.substrate = get_string(j, "substrate", path);
  s.substrate_mode =
      parse_substrate_mode(get_string_or(j, "substrate_mode", path, "incoherent_to_air"),
                           join(path, "substrate_mode"));
  s.exit_index = get_number_or(j, "exit_index", path, 1.0);
  const std::string incidence = get_string_or(j, "incidence", path, "ambient");
  if (incidence == "substrate") {
    s.substrate_side_incidence = true;
  } else if (incidence != "ambient") {
    fail(join(path, "incidence"), "expected 'ambient' or 'substrate'");
  }
  if (s.substrate_side_incidence && s.substrate_mode != SubstrateMode::coherent_semi_infinite) {
    fail(join(path, "incidence"), "substrate-side incidence needs a coherent substrate");
  }
  if (j.contains("layers")) {
    const json& list = j.at("layers");
    const std::string lpath = join(path, "layers");
    if (!list.is_array()) fail(lpath, "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = index_path(lpath, i);
      check_keys(list[i], p, {"material", "thickness_nm"});
      LayerSpec layer{get_string(list[i], "material", p), get_number(list[i], "thickness_nm", p)};
      if (!(layer.thickness_nm > 0.0)) fail(join(p, "thickness_nm"), "must be positive");
      s.layers.push_back(layer);
    }
  }
  return s;
}

json stack_to_json(const StackSpec& s) {
  json layers = json::array();
  for (const auto& l : s.layers) layers.push_back({{"material", l.material}, {"thickness_nm", l.thickness_nm}});
  return {{"ambient", s.ambient},
          {"layers", layers},
          {"substrate", s.substrate},
          {"substrate_mode", to_string(s.substrate_mode)},
          {"exit_index", s.exit_index},
          {"incidence", s.substrate_side_incidence ? "substrate" : "ambient"}};
}

std::vector<double> parse_angles(const json& j, const std::string& path) {
  if (j.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) fail(index_path(path, i), "expected a number");
      out.push_back(j[i].get<double>());
    }
    return out;
  }
  check_keys(j, path, {"min", "max", "step"});
  const double step = get_number(j, "step", path);
  if (!(step > 0.0)) fail(join(path, "step"), "must be positive");
  const double lo = get_number(j, "min", path);
  const double hi = get_number(j, "max", path);
  if (hi < lo) fail(path, "max must be >= min");
  return angle_range(lo, hi, step);
}

EstimateSpec parse_estimate(const json& j, const std::string& path) {
  check_keys(j, path, {"vibration", "cavity", "temperature_K", "polymer", "rabi_splitting_meV",
                       "polariton_fwhm_meV"});
  EstimateSpec e;
  {
    const std::string p = join(path, "vibration");
    if (!j.contains("vibration")) fail(p, "missing required object");
    const json& v = j.at("vibration");
    check_keys(v, p, {"omega_cm1", "dipole_debye", "reduced_mass_amu", "damping_fwhm_meV"});
    e.vibration.omega_cm1 = get_number(v, "omega_cm1", p);
    e.vibration.dipole_debye = get_number(v, "dipole_debye", p);
    e.vibration.reduced_mass_amu = get_optional_number(v, "reduced_mass_amu", p);
    e.vibration.damping_fwhm_mev = get_number(v, "damping_fwhm_meV", p);
    if (!(e.vibration.omega_cm1 > 0.0)) fail(join(p, "omega_cm1"), "must be positive");
    if (!(e.vibration.dipole_debye >= 0.0)) fail(join(p, "dipole_debye"), "must be >= 0");
    if (!(e.vibration.damping_fwhm_mev > 0.0)) fail(join(p, "damping_fwhm_meV"), "must be positive");
  }
  {
    const std::string p = join(path, "cavity");
    if (!j.contains("cavity")) fail(p, "missing required object");
    const json& c = j.at("cavity");
    check_keys(c, p, {"omega_cm1", "refractive_index", "mode_volume_m3", "kappa_fwhm_meV"});
    e.cavity_omega_cm1 = get_number(c, "omega_cm1", p);
    e.cavity_index = get_number_or(c, "refractive_index", p, 1.0);
    e.mode_volume_m3 = get_optional_number(c, "mode_volume_m3", p);
    e.kappa_fwhm_mev = get_number(c, "kappa_fwhm_meV", p);
    if (!(e.cavity_omega_cm1 > 0.0)) fail(join(p, "omega_cm1"), "must be positive");
    if (!(e.cavity_index > 0.0)) fail(join(p, "refractive_index"), "must be positive");
  }
  e.temperature_k = get_number_or(j, "temperature_K", path, 300.0);
  if (!(e.temperature_k >= 0.0)) fail(join(path, "temperature_K"), "must be >= 0");
  if (j.contains("polymer")) {
    const std::string p = join(path, "polymer");
    const json& pj = j.at("polymer");
    check_keys(pj, p, {"mass_density_g_cm3", "monomer_mass_g_mol", "bonds_per_monomer"});
    e.polymer = PolymerSpec{get_number(pj, "mass_density_g_cm3", p),
                            get_number(pj, "monomer_mass_g_mol", p),
                            get_number_or(pj, "bonds_per_monomer", p, 1.0)};
  }
  e.rabi_splitting_mev = get_optional_number(j, "rabi_splitting_meV", path);
  if (j.contains("polariton_fwhm_meV")) {
    const std::string p = join(path, "polariton_fwhm_meV");
    const json& f = j.at("polariton_fwhm_meV");
    check_keys(f, p, {"upper", "lower"});
    e.upper_fwhm_mev = get_optional_number(f, "upper", p);
    e.lower_fwhm_mev = get_optional_number(f, "lower", p);
  }
  return e;
}

json estimate_to_json(const EstimateSpec& e) {
  json vib = {{"omega_cm1", e.vibration.omega_cm1},
              {"dipole_debye", e.vibration.dipole_debye},
              {"damping_fwhm_meV", e.vibration.damping_fwhm_mev}};
  if (e.vibration.reduced_mass_amu) vib["reduced_mass_amu"] = *e.vibration.reduced_mass_amu;
  json cav = {{"omega_cm1", e.cavity_omega_cm1},
              {"refractive_index", e.cavity_index},
              {"kappa_fwhm_meV", e.kappa_fwhm_mev}};
  if (e.mode_volume_m3) cav["mode_volume_m3"] = *e.mode_volume_m3;
  json out = {{"vibration", vib}, {"cavity", cav}, {"temperature_K", e.temperature_k}};
  if (e.polymer) {
    out["polymer"] = {{"mass_density_g_cm3", e.polymer->mass_density_g_cm3},
                      {"monomer_mass_g_mol", e.polymer->monomer_mass_g_mol},
                      {"bonds_per_monomer", e.polymer->bonds_per_monomer}};
  }
  if (e.rabi_splitting_mev) out["rabi_splitting_meV"] = *e.rabi_splitting_mev;
  if (e.upper_fwhm_mev || e.lower_fwhm_mev) {
    json f = json::object();
    if (e.upper_fwhm_mev) f["upper"] = *e.upper_fwhm_mev;
    if (e.lower_fwhm_mev) f["lower"] = *e.lower_fwhm_mev;
    out["polariton_fwhm_meV"] = f;
  }
  return out;
}

FitSpec parse_fit(const json& j, const std::string& path) {
  check_keys(j, path, {"free", "channel", "angle", "target", "multistart", "max_iterations",
                       "relative_tolerance"});
  FitSpec f;
  if (j.contains("free")) {
    const json& list = j.at("free");
    const std::string lpath = join(path, "free");
    if (!list.is_array()) fail(lpath, "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = index_path(lpath, i);
      check_keys(list[i], p, {"name", "min", "max"});
      FreeParameter fp{get_string(list[i], "name", p), get_number(list[i], "min", p),
                       get_number(list[i], "max", p)};
      if (!(fp.lower < fp.upper)) fail(p, "needs min < max");
      f.free.push_back(fp);
    }
  }
  with_path(join(path, "channel"), [&] {
    f.channel = channel_from_string(get_string_or(j, "channel", path, "T"));
  });
  f.angle_deg = get_optional_number(j, "angle", path);
  f.target = get_string_or(j, "target", path, "");
  f.multistart = get_int_or(j, "multistart", path, 0);
  f.max_iterations = get_int_or(j, "max_iterations", path, 2000);
  f.relative_tolerance = get_number_or(j, "relative_tolerance", path, 1e-8);
  if (f.multistart < 0) fail(join(path, "multistart"), "must be >= 0");
  if (f.max_iterations < 1) fail(join(path, "max_iterations"), "must be >= 1");
  return f;
}

json fit_to_json(const FitSpec& f) {
  json free = json::array();
  for (const auto& p : f.free) free.push_back({{"name", p.name}, {"min", p.lower}, {"max", p.upper}});
  json out = {{"free", free},
              {"channel", std::string(1, to_char(f.channel))},
              {"target", f.target},
              {"multistart", f.multistart},
              {"max_iterations", f.max_iterations},
              {"relative_tolerance", f.relative_tolerance}};
  if (f.angle_deg) out["angle"] = *f.angle_deg;
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::vector<double> angle_range(double min_deg, double max_deg, double step_deg) {
  std::vector<double> out;
  if (!(step_deg > 0.0)) throw ConfigError("angle step must be positive");
  const auto n = static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(min_deg + static_cast<double>(i) * step_deg);
  return out;
}

LayerStack build_stack(const MaterialLibrary& materials, const StackSpec& spec) {
  auto lookup = [&](const std::string& name, const std::string& path) -> const DielectricModel& {
    const auto it = materials.find(name);
    if (it == materials.end()) fail(path, "references undefined material '" + name + "'");
    return it->second;
  };
  LayerStack stack;
  stack.ambient = {spec.ambient, lookup(spec.ambient, "stack.ambient")};
  stack.substrate = {spec.substrate, lookup(spec.substrate, "stack.substrate")};
  stack.substrate_mode = spec.substrate_mode;
  stack.exit_index = spec.exit_index;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& l = spec.layers[i];
    const std::string path = "stack.layers[" + std::to_string(i) + "].material";
    stack.layers.push_back({l.material, lookup(l.material, path), l.thickness_nm});
  }
  with_path("stack", [&] { validate(stack); });
  if (spec.substrate_side_incidence) return reversed(stack);
  return stack;
}

Config parse_config(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": config syntax error: " << e.what();
    throw ConfigError(msg.str());
  }
  check_keys(root, "", {"materials", "stack", "grid", "angle", "angles", "polarization",
                        "divergence", "analysis", "field_map", "estimate", "fit", "seed"});

  Config c;
  if (!root.contains("materials")) fail("materials", "missing required object");
  require_object(root.at("materials"), "materials");
  for (const auto& [name, value] : root.at("materials").items()) {
    if (is_comment_key(name)) continue;
    c.materials[name] = parse_material(value, "materials." + name);
  }
  if (!root.contains("stack")) fail("stack", "missing required object");
  c.stack = parse_stack(root.at("stack"), "stack");
  if (root.contains("grid")) c.grid = parse_grid(root.at("grid"), "grid");
  c.angle_deg = get_number_or(root, "angle", "", 0.0);
  if (!(std::abs(c.angle_deg) < 90.0)) fail("angle", "must lie in (-90, 90)");
  if (root.contains("angles")) c.angles = parse_angles(root.at("angles"), "angles");
  for (std::size_t i = 0; i < c.angles.size(); ++i) {
    if (!(std::abs(c.angles[i]) < 90.0)) fail(index_path("angles", i), "must lie in (-90, 90)");
  }
  c.polarization = parse_polarization(get_string_or(root, "polarization", "", "unpolarized"),
                                      "polarization");
  if (root.contains("divergence")) {
    const json& d = root.at("divergence");
    if (d.is_number()) {
      c.divergence.sigma_deg = d.get<double>();
    } else {
      check_keys(d, "divergence", {"sigma_deg", "points", "span_sigmas"});
      c.divergence.sigma_deg = get_number_or(d, "sigma_deg", "divergence", 0.0);
      c.divergence.points = get_int_or(d, "points", "divergence", 11);
      c.divergence.span_sigmas = get_number_or(d, "span_sigmas", "divergence", 3.0);
    }
    if (!(c.divergence.sigma_deg >= 0.0)) fail("divergence", "must be >= 0");
    if (c.divergence.points < 1) fail("divergence.points", "must be >= 1");
  }
  if (root.contains("analysis")) {
    const json& a = root.at("analysis");
    check_keys(a, "analysis", {"window", "relative_prominence", "min_prominence", "window_points"});
    if (a.contains("window")) {
      const json& w = a.at("window");
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
        fail("analysis.window", "expected [min, max]");
      }
      c.analysis.window = {w[0].get<double>(), w[1].get<double>()};
      if (!(c.analysis.window.k_lo < c.analysis.window.k_hi)) fail("analysis.window", "needs min < max");
    }
    c.analysis.peaks.relative_prominence =
        get_number_or(a, "relative_prominence", "analysis", 0.05);
    c.analysis.peaks.min_prominence = get_optional_number(a, "min_prominence", "analysis");
    c.analysis.peaks.window = get_int_or(a, "window_points", "analysis", 1);
  }
  if (root.contains("field_map")) {
    const json& f = root.at("field_map");
    check_keys(f, "field_map", {"z_step_nm", "margin_nm", "grid"});
    c.field_map.options.z_step_nm = get_number_or(f, "z_step_nm", "field_map", 10.0);
    c.field_map.options.margin_nm = get_number_or(f, "margin_nm", "field_map", 200.0);
    if (!(c.field_map.options.z_step_nm > 0.0)) fail("field_map.z_step_nm", "must be positive");
    if (!(c.field_map.options.margin_nm >= 0.0)) fail("field_map.margin_nm", "must be >= 0");
    if (f.contains("grid")) c.field_map.grid = parse_grid(f.at("grid"), "field_map.grid");
  }
  if (root.contains("estimate")) c.estimate = parse_estimate(root.at("estimate"), "estimate");
  if (root.contains("fit")) c.fit = parse_fit(root.at("fit"), "fit");
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("seed", "expected a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }

  // Resolve names now so a bad reference is reported against the config.
  (void)build_stack(c.materials, c.stack);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Config c = parse_config(buf.str(), path.string());
  c.base_dir = path.parent_path();
  return c;
}

std::string serialize_config(const Config& c) {
  json materials = json::object();
  for (const auto& [name, model] : c.materials) materials[name] = material_to_json(model);
  json out = {
      {"materials", materials},
      {"stack", stack_to_json(c.stack)},
      {"grid", grid_to_json(c.grid)},
      {"angle", c.angle_deg},
      {"angles", c.angles},
      {"polarization", to_string(c.polarization)},
      {"divergence",
       {{"sigma_deg", c.divergence.sigma_deg},
        {"points", c.divergence.points},
        {"span_sigmas", c.divergence.span_sigmas}}},
      {"seed", c.seed},
  };
  json analysis = {{"relative_prominence", c.analysis.peaks.relative_prominence},
                   {"window_points", c.analysis.peaks.window}};
  if (std::isfinite(c.analysis.window.k_hi)) {
    analysis["window"] = {c.analysis.window.k_lo, c.analysis.window.k_hi};
  }
  if (c.analysis.peaks.min_prominence) analysis["min_prominence"] = *c.analysis.peaks.min_prominence;
  out["analysis"] = analysis;
  json fm = {{"z_step_nm", c.field_map.options.z_step_nm}, {"margin_nm", c.field_map.options.margin_nm}};
  if (c.field_map.grid) fm["grid"] = grid_to_json(*c.field_map.grid);
  out["field_map"] = fm;
  if (c.estimate) out["estimate"] = estimate_to_json(*c.estimate);
  if (c.fit) out["fit"] = fit_to_json(*c.fit);
  return out.dump(2) + "\n";
}

bool operator==(const Config& a, const Config& b) {
  return a.materials == b.materials && a.stack == b.stack && a.grid == b.grid &&
         a.angle_deg == b.angle_deg && a.angles == b.angles && a.polarization == b.polarization &&
         a.divergence == b.divergence && a.analysis == b.analysis && a.field_map == b.field_map &&
         a.estimate == b.estimate && a.fit == b.fit && a.seed == b.seed;
}

}  // namespace vibropol
