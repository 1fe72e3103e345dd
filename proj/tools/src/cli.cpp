#include "vibropol_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "vibropol/config.hpp"
#include "vibropol/errors.hpp"
#include "vibropol/fields.hpp"
#include "vibropol/fit.hpp"
#include "vibropol/io.hpp"
#include "vibropol/polariton.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"
#include "vibropol/units.hpp"

namespace vibropol::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::string out_dir = ".";
  std::optional<double> angle;
  std::string grid;
  std::optional<std::uint64_t> seed;
  std::optional<double> divergence;
  std::string polarization;
  std::string channel = "T";
  std::string target;
  std::string csv;
  bool band_fit = false;
};

// Summaries are for reading; the CSVs keep full precision.
double display(double v) { return std::round(v * 10.0) / 10.0; }

SpectralGrid parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ConfigError("--grid: expected min:max:step, got '" + text + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ConfigError("--grid: expected min:max:step, got '" + text + "'");
  SpectralGrid g{parts[0], parts[1], parts[2]};
  try {
    validate(g);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--grid: ") + e.what());
  }
  return g;
}

Polarization parse_polarization(const std::string& s) {
  if (s == "s") return Polarization::s;
  if (s == "p") return Polarization::p;
  if (s == "unpolarized") return Polarization::unpolarized;
  throw ConfigError("--polarization: expected s, p or unpolarized, got '" + s + "'");
}

Channel parse_channel(const std::string& s) {
  try {
    return channel_from_string(s);
  } catch (const std::exception&) {
    throw ConfigError("--channel: expected T, R or A, got '" + s + "'");
  }
}

Config load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  Config c = load_config(o.config);
  if (!o.grid.empty()) c.grid = parse_grid(o.grid);
  if (o.angle) c.angle_deg = *o.angle;
  if (o.seed) c.seed = *o.seed;
  if (o.divergence) {
    if (!(*o.divergence >= 0.0)) throw ConfigError("--divergence must be >= 0");
    c.divergence.sigma_deg = *o.divergence;
  }
  if (!o.polarization.empty()) c.polarization = parse_polarization(o.polarization);
  return c;
}

void write_json(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

Json window_json(const SpectralWindow& w) {
  return Json::array({w.k_lo, std::isfinite(w.k_hi) ? Json(w.k_hi) : Json(nullptr)});
}

Json peak_json(const Peak& p) {
  return Json{{"center_cm1", display(p.center)},
              {"height", p.height},
              {"fwhm_cm1", display(p.fwhm)},
              {"prominence", p.prominence}};
}

// Peaks of one channel inside the analysis window, plus the splitting when
// there are exactly two.
Json channel_summary(std::span<const double> k, std::span<const double> signal, Channel channel,
                     const AnalysisSpec& analysis) {
  std::vector<double> wk;
  std::vector<double> ws;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] >= analysis.window.k_lo && k[i] <= analysis.window.k_hi) {
      wk.push_back(k[i]);
      ws.push_back(signal[i]);
    }
  }
  Json j;
  j["peaks"] = Json::array();
  if (wk.size() < 3) return j;
  for (const auto& p : find_peaks(wk, ws, analysis.peaks)) j["peaks"].push_back(peak_json(p));
  if (j["peaks"].size() == 2) {
    const auto rep = extract_splitting(k, signal, channel, analysis.window, analysis.peaks);
    j["omega_lower_cm1"] = display(rep.omega_lower);
    j["omega_upper_cm1"] = display(rep.omega_upper);
    j["splitting_cm1"] = display(rep.splitting_cm1);
    j["splitting_meV"] = std::round(rep.splitting_mev * 100.0) / 100.0;
  }
  return j;
}

std::string angle_tag(double angle) { return "angle_" + format_double(angle); }

double ambient_index(const LayerStack& stack, const SpectralGrid& grid) {
  const double k = grid.at(grid.size() / 2);
  return refractive_index(stack.ambient.model, k).real();
}

// Reference lines for the dispersion table: the empty-cavity peak from the
// same stack with its oscillators removed, and the strongest oscillator
// centre inside the analysis window.
void add_references(DispersionTable& table, const LayerStack& stack, const Config& c,
                    std::span<const double> angles) {
  double best_f = 0.0;
  double omega_v = std::nan("");
  for (const auto& layer : stack.layers) {
    if (const auto* m = std::get_if<LorentzMedium>(&layer.material)) {
      for (const auto& osc : m->oscillators) {
        const bool inside = osc.center >= c.analysis.window.k_lo && osc.center <= c.analysis.window.k_hi;
        if (inside && osc.strength > best_f) {
          best_f = osc.strength;
          omega_v = osc.center;
        }
      }
    }
  }
  const std::vector<Spectrum> empty =
      angle_scan(without_vibrations(stack), c.grid, angles, c.polarization, c.divergence);
  const std::vector<double> k = c.grid.points();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    table.rows[i].omega_vibration = omega_v;
    std::vector<double> wk;
    std::vector<double> ws;
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j] >= c.analysis.window.k_lo && k[j] <= c.analysis.window.k_hi) {
        wk.push_back(k[j]);
        ws.push_back(empty[i].T[j]);
      }
    }
    if (wk.size() < 3) continue;
    const auto peaks = find_peaks(wk, ws, c.analysis.peaks);
    if (peaks.empty()) continue;
    const auto top = std::max_element(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
      return a.prominence < b.prominence;
    });
    table.rows[i].omega_cavity = top->center;
  }
}

// --- subcommands -----------------------------------------------------------

int cmd_simulate(const Options& o, std::ostream& out) {
  const Config c = load(o);
  const LayerStack stack = build_stack(c.materials, c.stack);
  const std::vector<double> angles{c.angle_deg};
  const Spectrum s = angle_scan(stack, c.grid, angles, c.polarization, c.divergence).front();

  const fs::path dir(o.out_dir);
  std::ostringstream csv;
  write_spectrum_csv(csv, s);
  write_text_file(dir / "spectrum.csv", csv.str());

  const std::vector<double> k = s.grid.points();
  Json summary;
  summary["angle_deg"] = c.angle_deg;
  summary["polarization"] = to_string(c.polarization);
  summary["divergence_sigma_deg"] = c.divergence.sigma_deg;
  summary["points"] = s.size();
  summary["window_cm1"] = window_json(c.analysis.window);
  for (const Channel ch : {Channel::T, Channel::R, Channel::A}) {
    const std::vector<double> signal = channel_signal(s, ch);
    summary["channels"][std::string(1, to_char(ch))] = channel_summary(k, signal, ch, c.analysis);
  }
  write_json(dir / "summary.json", summary);
  out << summary.dump(2) << "\n";
  return kOk;
}

int cmd_scan_angle(const Options& o, std::ostream& out) {
  const Config c = load(o);
  const Channel channel = parse_channel(o.channel);
  const LayerStack stack = build_stack(c.materials, c.stack);
  std::vector<double> angles;
  if (o.angle) {
    angles = {*o.angle};
  } else if (!c.angles.empty()) {
    angles = c.angles;
  } else {
    angles = {c.angle_deg};
  }
  const std::vector<Spectrum> spectra =
      angle_scan(stack, c.grid, angles, c.polarization, c.divergence);

  const fs::path dir(o.out_dir);
  for (const auto& s : spectra) {
    std::ostringstream csv;
    write_spectrum_csv(csv, s);
    write_text_file(dir / "spectra" / (angle_tag(s.angle_deg) + ".csv"), csv.str());
  }
  DispersionTable table =
      build_dispersion(spectra, channel, c.analysis.window, c.analysis.peaks);
  add_references(table, stack, c, angles);
  std::ostringstream csv;
  write_dispersion_csv(csv, table);
  write_text_file(dir / "dispersion.csv", csv.str());

  Json summary;
  summary["channel"] = std::string(1, to_char(channel));
  summary["angles"] = table.rows.size();
  summary["usable_rows"] = table.usable_rows();
  const DispersionRow* narrowest = nullptr;
  for (const auto& r : table.rows) {
    if (r.ok && (!narrowest || r.splitting() < narrowest->splitting())) narrowest = &r;
  }
  if (narrowest) {
    summary["min_separation_cm1"] = display(narrowest->splitting());
    summary["min_separation_angle_deg"] = narrowest->angle_deg;
  }
  if (table.usable_rows() >= 4) {
    const CoupledModelFit fit = fit_coupled_model(table, ambient_index(stack, c.grid));
    Json jf{{"omega_v_cm1", fit.omega_v},
            {"n_eff", fit.n_eff},
            {"thickness_nm", fit.thickness_nm},
            {"splitting_cm1", fit.splitting},
            {"loss", fit.loss},
            {"iterations", fit.iterations},
            {"converged", fit.converged}};
    write_json(dir / "dispersion_fit.json", jf);
    summary["coupled_model"] = Json{{"omega_v_cm1", display(fit.omega_v)},
                                    {"splitting_cm1", display(fit.splitting)},
                                    {"converged", fit.converged}};
  }
  out << summary.dump(2) << "\n";
  return kOk;
}

int cmd_field_map(const Options& o, std::ostream& out) {
  const Config c = load(o);
  const LayerStack stack = build_stack(c.materials, c.stack);
  SpectralGrid grid = c.field_map.grid.value_or(c.grid);
  if (!o.grid.empty()) grid = c.grid;
  const FieldMap map = field_map(stack, grid, c.angle_deg, c.polarization, c.field_map.options);

  std::ostringstream csv;
  write_field_map_csv(csv, map);
  write_text_file(fs::path(o.out_dir) / "field_map.csv", csv.str());

  const auto peak = std::max_element(map.intensity.begin(), map.intensity.end());
  Json summary;
  summary["wavenumbers"] = grid.size();
  summary["depths"] = map.z_nm.size();
  summary["z_range_nm"] = Json::array({map.z_nm.front(), map.z_nm.back()});
  if (peak != map.intensity.end()) {
    const auto idx = static_cast<std::size_t>(peak - map.intensity.begin());
    summary["max_intensity"] = *peak;
    summary["max_at"] = Json{{"k_cm1", display(grid.at(idx / map.z_nm.size()))},
                             {"z_nm", display(map.z_nm[idx % map.z_nm.size()])}};
  }
  out << summary.dump(2) << "\n";
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const Channel channel = parse_channel(o.channel);
  AnalysisSpec analysis;
  if (!o.config.empty()) analysis = load(o).analysis;
  const CsvTable table = read_csv_file(o.csv);
  const TargetSpectrum data = target_from_csv(table, channel);
  std::vector<double> signal = data.values;
  if (channel == Channel::R) {
    for (double& v : signal) v = 1.0 - v;
  }
  for (std::size_t i = 1; i < data.k.size(); ++i) {
    if (!(data.k[i] > data.k[i - 1])) {
      throw ConfigError(o.csv + ": wavenumbers must be strictly increasing");
    }
  }

  Json report;
  report["source"] = o.csv;
  report["channel"] = std::string(1, to_char(channel));
  report["window_cm1"] = window_json(analysis.window);
  report.update(channel_summary(data.k, signal, channel, analysis));

  if (o.band_fit) {
    std::vector<double> wk;
    std::vector<double> wv;
    for (std::size_t i = 0; i < data.k.size(); ++i) {
      if (data.k[i] >= analysis.window.k_lo && data.k[i] <= analysis.window.k_hi) {
        wk.push_back(data.k[i]);
        wv.push_back(data.values[i]);
      }
    }
    LorentzBandFit band;
    try {
      band = fit_lorentzian_band(wk, wv);
    } catch (const BandFitNotConverged& e) {
      band = e.best();
    }
    report["band_fit"] = Json{{"strength_cm2", band.strength},
                              {"center_cm1", band.center},
                              {"damping_cm1", band.damping},
                              {"baseline", band.baseline},
                              {"residual_rms", band.residual_rms},
                              {"poor_fit", band.poor_fit},
                              {"converged", band.converged}};
  }
  write_json(fs::path(o.out_dir) / "analysis.json", report);
  out << report.dump(2) << "\n";
  return kOk;
}

Json estimate_report(const EstimateSpec& e) {
  const VibrationalMode& v = e.vibration;
  const double volume =
      e.mode_volume_m3.value_or(diffraction_limited_volume(e.cavity_omega_cm1, e.cavity_index));
  const CavityMode cavity{e.cavity_omega_cm1, volume, e.kappa_fwhm_mev};
  const double single_ev = single_coupling_ev(v, cavity);

  Json r;
  r["vibration_energy_meV"] = v.omega_mev();
  r["thermal_occupation"] = thermal_occupation(v.omega_mev(), e.temperature_k);
  r["temperature_K"] = e.temperature_k;
  r["mode_volume_m3"] = volume;
  r["vacuum_field_V_per_m"] = vacuum_field(e.cavity_omega_cm1, volume);
  if (v.reduced_mass_amu) {
    r["zero_point_amplitude_m"] = zero_point_amplitude(*v.reduced_mass_amu, v.omega_cm1);
  }
  r["single_coupling_ueV"] = single_ev * 1e6;
  if (v.damping_fwhm_mev > 0.0) {
    r["vibration_quality_factor"] = quality_factor(v.omega_mev(), v.damping_fwhm_mev);
  }
  if (e.kappa_fwhm_mev > 0.0) {
    r["cavity_quality_factor"] = quality_factor(cavity.omega_mev(), e.kappa_fwhm_mev);
  }
  if (e.polymer) {
    r["bond_density_cm3"] = bond_density(e.polymer->mass_density_g_cm3,
                                         e.polymer->monomer_mass_g_mol,
                                         e.polymer->bonds_per_monomer);
  }
  if (e.rabi_splitting_mev) {
    const double rabi = *e.rabi_splitting_mev;
    r["rabi_splitting_meV"] = rabi;
    r["rabi_splitting_cm1"] = units::mev_to_cm1(rabi);
    if (single_ev > 0.0) {
      const double ratio = rabi * 1e-3 / single_ev;
      r["coupled_oscillators"] = ratio * ratio;
      r["coupled_concentration_cm3"] = effective_concentration(rabi * 1e-3, single_ev, volume);
    } else {
      r["coupled_oscillators"] = nullptr;
      r["coupled_concentration_cm3"] = nullptr;
    }
    r["strong_coupling"] = is_strong_coupling(rabi, v.damping_fwhm_mev, e.kappa_fwhm_mev);
  }
  if (e.upper_fwhm_mev || e.lower_fwhm_mev) {
    Json d;
    if (e.upper_fwhm_mev) d["upper"] = dephasing_time_ps(*e.upper_fwhm_mev);
    if (e.lower_fwhm_mev) d["lower"] = dephasing_time_ps(*e.lower_fwhm_mev);
    r["dephasing_time_ps"] = d;
  }
  return r;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const Config c = load(o);
  if (!c.estimate) throw ConfigError("config error at estimate: block is missing");
  const Json report = estimate_report(*c.estimate);
  write_json(fs::path(o.out_dir) / "estimate.json", report);
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const Config c = load(o);
  if (!c.fit) throw ConfigError("config error at fit: block is missing");
  const FitSpec& spec = *c.fit;
  fs::path target;
  if (!o.target.empty()) {
    target = o.target;
  } else if (!spec.target.empty()) {
    target = fs::path(spec.target).is_absolute() ? fs::path(spec.target)
                                                  : c.base_dir / spec.target;
  } else {
    throw ConfigError("no target spectrum: set fit.target or pass --target");
  }
  if (!fs::exists(target)) throw ConfigError("target file not found: '" + target.string() + "'");
  const Channel channel = o.channel.empty() ? spec.channel : parse_channel(o.channel);

  FitProblem problem;
  problem.materials = c.materials;
  problem.stack = c.stack;
  problem.free = spec.free;
  problem.target = target_from_csv(read_csv_file(target), channel);
  problem.channel = channel;
  problem.angle_deg = o.angle ? *o.angle : spec.angle_deg.value_or(c.angle_deg);
  problem.polarization = c.polarization;
  problem.divergence = c.divergence;

  FitOptions opts;
  opts.max_iterations = spec.max_iterations;
  opts.relative_tolerance = spec.relative_tolerance;
  opts.multistart = spec.multistart;
  const FitResult res = solve(problem, c.seed, opts);

  Json params = Json::object();
  Json initial = Json::object();
  for (std::size_t i = 0; i < res.names.size(); ++i) {
    params[res.names[i]] = res.params[i];
    initial[res.names[i]] = res.initial_params[i];
  }
  double sq = 0.0;
  for (const double r : res.residuals) sq += r * r;
  Json j;
  j["converged"] = res.converged;
  j["loss"] = res.loss;
  j["initial_loss"] = res.initial_loss;
  j["iterations"] = res.iterations;
  j["residual_rms"] = res.residuals.empty() ? 0.0 : std::sqrt(sq / res.residuals.size());
  j["points"] = res.residuals.size();
  j["channel"] = std::string(1, to_char(channel));
  j["angle_deg"] = problem.angle_deg;
  j["seed"] = c.seed;
  j["starts"] = res.starts.size();
  j["best_start"] = res.best_start;
  j["parameters"] = params;
  j["initial_parameters"] = initial;

  const fs::path dir(o.out_dir);
  write_json(dir / "fit_result.json", j);
  const std::vector<double> model = model_values(problem, res.params);
  std::ostringstream csv;
  csv << "k_cm1,target,model,residual\n";
  for (std::size_t i = 0; i < model.size(); ++i) {
    csv << format_double(problem.target.k[i]) << ',' << format_double(problem.target.values[i])
        << ',' << format_double(model[i]) << ',' << format_double(res.residuals[i]) << '\n';
  }
  write_text_file(dir / "fit_spectrum.csv", csv.str());
  out << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar microcavity simulation and vibrational strong-coupling analysis",
               "vibropol"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vibropol 0.1.0");

  Options o;
  auto common = [&o](CLI::App* sub, bool config_required) {
    auto* cfg = sub->add_option("--config,-c", o.config, "Config file");
    if (config_required) cfg->required();
    sub->add_option("--out-dir,--out,-o", o.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--polarization", o.polarization, "s, p or unpolarized");
  };
  auto physics = [&o](CLI::App* sub) {
    sub->add_option("--angle", o.angle, "Incidence angle in degrees");
    sub->add_option("--grid", o.grid, "Spectral grid min:max:step in cm^-1");
    sub->add_option("--divergence", o.divergence, "Beam divergence (Gaussian sigma, degrees)");
    sub->add_option("--seed", o.seed, "Random seed");
  };

  auto* simulate = app.add_subcommand("simulate", "Spectrum at one angle");
  common(simulate, true);
  physics(simulate);

  auto* scan = app.add_subcommand("scan-angle", "Spectra over the configured angles");
  common(scan, true);
  physics(scan);
  scan->add_option("--channel", o.channel, "Channel for the dispersion table (T, R, A)");

  auto* fmap = app.add_subcommand("field-map", "Field intensity versus depth and wavenumber");
  common(fmap, true);
  physics(fmap);

  auto* analyze = app.add_subcommand("analyze", "Peaks and splitting of a spectrum CSV");
  analyze->add_option("csv", o.csv, "Spectrum CSV")->required();
  common(analyze, false);
  analyze->add_option("--channel", o.channel, "Channel column (T, R, A)");
  analyze->add_flag("--band-fit", o.band_fit, "Fit a single Lorentz band in the window");

  auto* estimate = app.add_subcommand("estimate", "Scalar coupling estimates");
  common(estimate, true);

  auto* fit = app.add_subcommand("fit", "Fit stack parameters to a target spectrum");
  common(fit, true);
  physics(fit);
  fit->add_option("--target", o.target, "Target spectrum CSV");
  fit->add_option("--channel", o.channel, "Fitted channel (T, R, A)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  if (fit->parsed() && fit->count("--channel") == 0) o.channel.clear();

  try {
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (scan->parsed()) return cmd_scan_angle(o, out);
    if (fmap->parsed()) return cmd_field_map(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (estimate->parsed()) return cmd_estimate(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace vibropol::cli
