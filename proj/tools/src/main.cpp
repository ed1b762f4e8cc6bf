#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <new>

#include "twave/errors.hpp"
#include "twave_cli/commands.hpp"
#include "twave_cli/config_io.hpp"

using namespace twave::cli;

namespace {

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.root, "Output root (overrides TWAVE_OUTPUT_ROOT)");
  sub->add_option("--run-id", c.run_id, "Run directory name; default derives from the clock");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twave: anisotropic wave simulator and harmonic-analysis checks"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Run the nonlinear profile solver from a JSON config");
  s_sim->add_option("config", sim.config_path, "Config file (see print-config)")->required();
  add_common(s_sim, sim.common);

  auto* s_print = app.add_subcommand("print-config", "Print the default simulate config");

  DecayArgs dec;
  auto* s_dec = app.add_subcommand("decay", "Linear decay of Gaussian half-wave data");
  s_dec->add_option("--wave", dec.wave)->check(CLI::IsMember({1, 2}));
  s_dec->add_option("--c1", dec.c1);
  s_dec->add_option("--c2", dec.c2);
  s_dec->add_option("--n", dec.n)->expected(3);
  s_dec->add_option("--length", dec.length)->expected(3);
  s_dec->add_option("--sigma", dec.sigma);
  s_dec->add_option("--t-min", dec.t_min);
  s_dec->add_option("--t-max", dec.t_max);
  s_dec->add_option("--count", dec.count);
  s_dec->add_option("--norm", dec.norm)->check(CLI::IsMember({"linf", "shellwise"}));
  s_dec->add_option("--shell", dec.shell);
  add_common(s_dec, dec.common);

  ResonanceArgs res;
  auto* s_res = app.add_subcommand("resonance", "Sample space-time resonant points and check the phase expansion");
  s_res->add_option("--wave", res.wave)->check(CLI::IsMember({1, 2}));
  s_res->add_option("--signs", res.signs)->check(CLI::IsMember({"pp", "pm", "mp", "mm"}));
  s_res->add_option("--c1", res.c1);
  s_res->add_option("--c2", res.c2);
  s_res->add_option("--k", res.k);
  s_res->add_option("--k1", res.k1);
  s_res->add_option("--k2", res.k2);
  s_res->add_option("--samples", res.samples);
  s_res->add_option("--seed", res.seed);
  s_res->add_option("--tol", res.tol);
  s_res->add_option("--phase-m-min", res.phase_m_min);
  s_res->add_option("--phase-m-max", res.phase_m_max);
  s_res->add_option("--phase-samples", res.phase_samples);
  s_res->add_option("--alpha", res.alpha);
  add_common(s_res, res.common);

  LpcheckArgs lp;
  auto* s_lp = app.add_subcommand("lpcheck", "Partition of unity and atom reconstruction checks");
  s_lp->add_option("--n", lp.n);
  s_lp->add_option("--length", lp.length);
  s_lp->add_option("--seed", lp.seed);
  s_lp->add_option("--samples", lp.samples);
  add_common(s_lp, lp.common);

  VolumeArgs vol;
  auto* s_vol = app.add_subcommand("volume", "Monte Carlo volume of the near-resonant set");
  s_vol->add_option("--k", vol.k);
  s_vol->add_option("--k1", vol.k1);
  s_vol->add_option("--k2", vol.k2);
  s_vol->add_option("--signs", vol.signs)->check(CLI::IsMember({"pp", "pm", "mp", "mm"}));
  s_vol->add_option("--c1", vol.c1);
  s_vol->add_option("--c2", vol.c2);
  s_vol->add_option("--xi", vol.xi)->expected(3);
  s_vol->add_option("--l-min", vol.l_min);
  s_vol->add_option("--l-max", vol.l_max);
  s_vol->add_option("--samples", vol.samples);
  s_vol->add_option("--seed", vol.seed);
  add_common(s_vol, vol.common);

  CompareArgs cmp;
  auto* s_cmp = app.add_subcommand("compare", "Null versus sign-flipped nonlinearity in 1D");
  s_cmp->add_option("--n", cmp.n);
  s_cmp->add_option("--length", cmp.length);
  s_cmp->add_option("--sigma", cmp.sigma);
  s_cmp->add_option("--eps0", cmp.eps0);
  s_cmp->add_option("--t-final", cmp.t_final);
  s_cmp->add_option("--frame-interval", cmp.frame_interval);
  add_common(s_cmp, cmp.common);

  SurfaceArgs surf;
  auto* s_surf = app.add_subcommand("surface", "Normal-surface sections of both waves");
  s_surf->add_option("--c1", surf.c1);
  s_surf->add_option("--c2", surf.c2);
  s_surf->add_option("--n-theta", surf.n_theta);
  s_surf->add_option("--n-phi", surf.n_phi);
  add_common(s_surf, surf.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fail(kSchema, "schema", e.what());
  }

  try {
    CommandResult r;
    if (*s_print) {
      std::cout << default_config_text() << '\n';
      return kOk;
    }
    if (*s_sim) r = cmd_simulate(sim);
    else if (*s_dec) r = cmd_decay(dec);
    else if (*s_res) r = cmd_resonance(res);
    else if (*s_lp) r = cmd_lpcheck(lp);
    else if (*s_vol) r = cmd_volume(vol);
    else if (*s_cmp) r = cmd_compare(cmp);
    else if (*s_surf) r = cmd_surface(surf);
    std::cout << r.run_dir.string() << '\n';
    if (r.exit_code == kInstability) return fail(kInstability, "instability", "run aborted; see summary.json");
    return r.exit_code;
  } catch (const SchemaError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const twave::UsageError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const twave::DataError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const twave::ResolutionError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const twave::DomainError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const twave::InstabilityError& e) {
    return fail(kInstability, "instability", e.what());
  } catch (const std::bad_alloc&) {
    return fail(kResource, "resource", "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kResource, "resource", e.what());
  }
}
