#include "twave_cli/commands.hpp"

#include <cmath>
#include <numbers>

#include "twave/data.hpp"
#include "twave/errors.hpp"
#include "twave/dyadic.hpp"
#include "twave/fit.hpp"
#include "twave/propagator.hpp"
#include "twave/resonance.hpp"
#include "twave_cli/config_io.hpp"
#include "twave_cli/outputs.hpp"

namespace twave::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

RunDirectory open_run(const Common& c, const std::string& command) {
  return RunDirectory(c.root.empty() ? output_root() : c.root, command, c.run_id);
}

Wave parse_wave(int w) {
  if (w == 1) return Wave::first;
  if (w == 2) return Wave::second;
  throw SchemaError("wave must be 1 or 2");
}

SignPair parse_signs(const std::string& s) {
  if (s.size() != 2) throw SchemaError("signs must be one of pp, pm, mp, mm");
  auto one = [](char ch) {
    if (ch == 'p') return Sign::plus;
    if (ch == 'm') return Sign::minus;
    throw SchemaError("signs must be one of pp, pm, mp, mm");
  };
  return {one(s[0]), one(s[1])};
}

WaveSpeeds speeds_or_schema(double c1, double c2) {
  try {
    return WaveSpeeds::make(c1, c2);
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {"t",          "energy_HN",  "z1",          "z2",
                                                "linfxi1",    "linfxi2",    "linf_phys1",  "linf_phys2",
                                                "dhdt_linfxi", "drift",     "gradient_sup"};
  return cols;
}

std::string default_config_text() { return to_json(SimConfig{}).dump(2); }

CommandResult cmd_simulate(const SimulateArgs& a) {
  const SimConfig config = load_sim_config(a.config_path);
  RunDirectory dir = open_run(a.common, "simulate");
  const json cj = to_json(config);
  dir.set_config(cj, config.seed);
  write_json(dir.artifact("config.json"), cj);

  const RunRecord run = simulate(config);

  {
    CsvWriter csv(dir.artifact("diagnostics.csv"), diagnostics_columns());
    for (std::size_t i = 0; i < run.frames.size(); ++i) {
      const auto& f = run.frames[i];
      csv.row({f.t, f.energy_HN, f.z1, f.z2, f.linfxi1, f.linfxi2, f.linf_phys1, f.linf_phys2, f.dhdt_linfxi,
               run.drift[i], run.gradient_sup[i]});
    }
  }
  for (std::size_t i = 0; i < run.checkpoints.size(); ++i) {
    const std::string name = "checkpoint_" + std::to_string(i) + ".awck";
    write_checkpoint(dir.artifact(name).string(), run.checkpoints[i], config.speeds);
  }
  write_checkpoint(dir.artifact("final.awck").string(), run.final_state, config.speeds);

  json summary = {{"steps", run.steps},           {"dt", run.dt},
                  {"t_reached", run.final_state.t}, {"aborted", run.aborted},
                  {"abort_time", run.aborted ? json(run.abort_time) : json(nullptr)},
                  {"abort_reason", run.abort_reason}};
  if (run.checkpoints.size() >= 4) {
    const ScatteringReport sc = scattering_check(run);
    json diffs = json::array();
    for (const auto& d : sc.checkpoints) diffs.push_back({{"t1", d.t1}, {"t2", d.t2}, {"value", d.value}});
    summary["scattering"] = {
        {"differences", diffs}, {"fitted_decay", sc.fitted_decay}, {"strictly_decreasing", sc.strictly_decreasing}};
  }
  write_json(dir.artifact("summary.json"), summary);
  dir.set_status(run.aborted ? "aborted" : "ok");
  dir.finish();
  return {dir.path(), run.aborted ? kInstability : kOk};
}

CommandResult cmd_decay(const DecayArgs& a) {
  const Wave wave = parse_wave(a.wave);
  const WaveSpeeds speeds = speeds_or_schema(a.c1, a.c2);
  if (a.norm != "linf" && a.norm != "shellwise") throw SchemaError("norm must be linf or shellwise");
  if (!(a.t_min > 0.0 && a.t_max > a.t_min) || a.count < 2) throw SchemaError("need 0 < t_min < t_max and count >= 2");
  Grid g;
  try {
    g = Grid(a.n, a.length);
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  RunDirectory dir = open_run(a.common, "decay");
  const json cj = {{"wave", a.wave},   {"speeds", {a.c1, a.c2}}, {"n", a.n},         {"length", a.length},
                   {"sigma", a.sigma}, {"t_min", a.t_min},       {"t_max", a.t_max}, {"count", a.count},
                   {"norm", a.norm},   {"shell", a.shell}};
  dir.set_config(cj, 0);

  std::vector<double> times;
  for (int i = 0; i < a.count; ++i) times.push_back(a.t_min * std::pow(a.t_max / a.t_min, double(i) / (a.count - 1)));
  DecayOptions opts;
  opts.norm = a.norm == "linf" ? DecayNorm::linf : DecayNorm::shellwise;
  opts.shell = a.shell;
  const DecayReport rep = measure_decay(to_spectral(gaussian_bump(g, a.sigma)), times, wave, speeds, opts);
  {
    CsvWriter csv(dir.artifact("decay.csv"), {"t", "sup_norm", "boundary_fraction", "shell"});
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      csv.row({rep.times[i], rep.sup_norms[i], rep.boundary_fraction[i], rep.shell ? double(*rep.shell) : NAN});
  }
  write_json(dir.artifact("decay.json"), {{"fitted_exponent", rep.fitted_exponent},
                                          {"fit_residual", rep.fit_residual},
                                          {"wraparound", rep.wraparound},
                                          {"degenerate", rep.degenerate}});
  dir.finish();
  return {dir.path(), kOk};
}

CommandResult cmd_resonance(const ResonanceArgs& a) {
  const Wave wave = parse_wave(a.wave);
  const SignPair signs = parse_signs(a.signs);
  const WaveSpeeds speeds = speeds_or_schema(a.c1, a.c2);
  if (a.samples < 1) throw SchemaError("samples must be positive");
  RunDirectory dir = open_run(a.common, "resonance");
  dir.set_config({{"wave", a.wave}, {"signs", a.signs}, {"speeds", {a.c1, a.c2}}, {"k", a.k}, {"k1", a.k1},
                  {"k2", a.k2}, {"samples", a.samples}, {"tol", a.tol}, {"phase_m", {a.phase_m_min, a.phase_m_max}},
                  {"phase_samples", a.phase_samples}, {"alpha", a.alpha}},
                 a.seed);

  ResonanceOptions ro;
  ro.tol_phase = ro.tol_grad = a.tol;
  ro.seed = a.seed;
  const auto pts = resonance_sample(wave, signs, speeds, a.k, a.k1, a.k2, a.samples, ro);
  double worst = 0.0;
  {
    CsvWriter csv(dir.artifact("resonance_points.csv"),
                  {"xi1", "xi2", "xi3", "eta1", "eta2", "eta3", "phase", "grad_eta_phase", "transverse_ratio"});
    for (const auto& p : pts) {
      csv.row({p.xi[0], p.xi[1], p.xi[2], p.eta[0], p.eta[1], p.eta[2], p.phase_value, p.grad_eta_phase_norm,
               p.transverse_ratio});
      worst = std::max(worst, p.transverse_ratio);
    }
  }
  const LowerBoundReport lb = lower_bound_check(wave, signs, speeds, a.k, a.k1, a.k2, a.samples, a.seed);
  json summary = {{"accepted", pts.size()},
                  {"attempted", a.samples},
                  {"max_transverse_ratio", worst},
                  {"lower_bound_min_ratio", lb.min_ratio}};
  if (a.phase_m_max >= a.phase_m_min) {
    std::vector<int> ms;
    for (int m = a.phase_m_min; m <= a.phase_m_max; ++m) ms.push_back(m);
    const auto pe = phase_expansion_check(wave, signs, speeds, ms, a.alpha, a.phase_samples, a.seed);
    CsvWriter csv(dir.artifact("phase_expansion.csv"), {"m", "accepted", "attempted", "max_residual"});
    for (const auto& l : pe.levels) csv.row({double(l.m), double(l.accepted), double(l.attempted), l.max_residual});
    summary["phase_fitted_slope"] = pe.fitted_slope;
    summary["phase_low_coverage"] = pe.low_coverage;
  }
  write_json(dir.artifact("resonance.json"), summary);
  dir.finish();
  return {dir.path(), kOk};
}

CommandResult cmd_lpcheck(const LpcheckArgs& a) {
  if (a.n < 8 || a.samples < 1) throw SchemaError("need n >= 8 and samples >= 1");
  RunDirectory dir = open_run(a.common, "lpcheck");
  dir.set_config({{"n", a.n}, {"length", a.length}, {"samples", a.samples}}, a.seed);
  const Grid g = Grid::cube(a.n, a.length);
  const SpectralField f = random_envelope_field(g, a.seed, 0);
  const auto [lo, hi] = representable_shells(g);
  const double pu = partition_of_unity_error(a.samples, a.seed);
  const double atoms = lo <= hi ? atom_reconstruction_error(f, lo, hi) : 0.0;
  write_json(dir.artifact("lpcheck.json"), {{"partition_of_unity_max_error", pu},
                                            {"atom_reconstruction_max_rel_error", atoms},
                                            {"shells", {lo, hi}},
                                            {"partition_ok", pu < 1e-12},
                                            {"atoms_ok", atoms < 1e-10}});
  dir.finish();
  return {dir.path(), kOk};
}

CommandResult cmd_volume(const VolumeArgs& a) {
  const SignPair signs = parse_signs(a.signs);
  const WaveSpeeds speeds = speeds_or_schema(a.c1, a.c2);
  if (a.l_min > a.l_max || a.samples < 1) throw SchemaError("need l_min <= l_max and samples >= 1");
  RunDirectory dir = open_run(a.common, "volume");
  dir.set_config({{"k", a.k}, {"k1", a.k1}, {"k2", a.k2}, {"signs", a.signs}, {"speeds", {a.c1, a.c2}},
                  {"xi", a.xi}, {"l", {a.l_min, a.l_max}}, {"samples", a.samples}},
                 a.seed);
  std::vector<double> ls, lm;
  double worst = 0.0;
  {
    CsvWriter csv(dir.artifact("volume.csv"),
                  {"l", "measure", "predicted", "ratio", "hits", "samples", "ci_halfwidth"});
    for (int l = a.l_min; l <= a.l_max; ++l) {
      const VolumeEstimate v = volume_support_estimate(a.k, a.k1, a.k2, l, signs, a.xi, speeds, a.samples, a.seed);
      csv.row({double(l), v.measure, v.predicted, v.ratio, double(v.hits), double(v.samples), v.ci_halfwidth});
      worst = std::max(worst, v.ratio);
      if (v.measure > 0.0) {
        ls.push_back(l);
        lm.push_back(std::log2(v.measure));
      }
    }
  }
  json summary = {{"max_ratio", worst}, {"fitted_exponent", nullptr}};
  if (ls.size() >= 2) summary["fitted_exponent"] = fit_line(ls, lm).slope;
  write_json(dir.artifact("volume.json"), summary);
  dir.finish();
  return {dir.path(), kOk};
}

CommandResult cmd_compare(const CompareArgs& a) {
  SimConfig c;
  try {
    c.grid = Grid({a.n, 1, 1}, {a.length, 1.0, 1.0});
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  c.family = DataFamily::right_moving;
  c.normalization = DataNormalization::amplitude;
  c.sigma = a.sigma;
  c.eps0 = a.eps0;
  c.t_final = a.t_final;
  c.frame_interval = a.frame_interval;
  c.compute_z = false;
  try {
    c.validate();
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  RunDirectory dir = open_run(a.common, "compare");
  dir.set_config(to_json(c), c.seed);
  const BlowupReport rep = blowup_probe(c);
  {
    CsvWriter csv(dir.artifact("compare.csv"), {"t", "null_sup", "flipped_sup"});
    for (std::size_t i = 0; i < rep.times.size(); ++i) csv.row({rep.times[i], rep.null_sup[i], rep.flipped_sup[i]});
  }
  write_json(dir.artifact("compare.json"), {{"exceed_time", optional_number(rep.exceed_time)},
                                            {"flipped_aborted", rep.flipped_aborted},
                                            {"null_growth", rep.null_growth}});
  dir.finish();
  return {dir.path(), kOk};
}

CommandResult cmd_surface(const SurfaceArgs& a) {
  const WaveSpeeds speeds = speeds_or_schema(a.c1, a.c2);
  if (a.n_theta < 2 || a.n_phi < 1) throw SchemaError("need n_theta >= 2 and n_phi >= 1");
  RunDirectory dir = open_run(a.common, "surface");
  dir.set_config({{"speeds", {a.c1, a.c2}}, {"n_theta", a.n_theta}, {"n_phi", a.n_phi}}, 0);
  {
    // level sets Lambda_a = 1 along rays omega(theta, phi), theta measured from the xi1 axis
    CsvWriter csv(dir.artifact("normal_surface.csv"),
                  {"theta", "phi", "omega1", "omega2", "omega3", "radius1", "radius2", "normal_gap"});
    for (int p = 0; p < a.n_phi; ++p) {
      const double phi = std::numbers::pi / 2 * p / std::max(1, a.n_phi - 1);
      for (int t = 0; t < a.n_theta; ++t) {
        const double theta = std::numbers::pi * t / (a.n_theta - 1);
        const Vec3 w{std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi)};
        const Vec3 n1 = group_velocity(Wave::first, w, speeds), n2 = group_velocity(Wave::second, w, speeds);
        csv.row({theta, phi, w[0], w[1], w[2], 1.0 / lambda(Wave::first, w, speeds),
                 1.0 / lambda(Wave::second, w, speeds), norm(n1 - n2)});
      }
    }
  }
  dir.finish();
  return {dir.path(), kOk};
}

}  // namespace twave::cli
