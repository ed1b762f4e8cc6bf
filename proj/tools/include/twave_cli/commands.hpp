#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace twave::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kOk = 0, kSchema = 2, kInstability = 3, kResource = 4 };

struct CommandResult {
  std::filesystem::path run_dir;
  int exit_code = kOk;
};

struct Common {
  std::filesystem::path root;  ///< empty selects output_root()
  std::string run_id;
};

struct SimulateArgs {
  Common common;
  std::string config_path;
};

struct DecayArgs {
  Common common;
  int wave = 1;
  double c1 = 2.0, c2 = 2.0;
  std::array<int, 3> n{128, 128, 128};
  std::array<double, 3> length{112.0, 112.0, 112.0};
  double sigma = 1.5;
  double t_min = 5.0, t_max = 40.0;
  int count = 8;
  std::string norm = "linf";
  int shell = 0;
};

struct ResonanceArgs {
  Common common;
  int wave = 1;
  std::string signs = "pp";
  double c1 = 2.0, c2 = 2.0;
  int k = 0, k1 = 0, k2 = 0;
  int samples = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  int phase_m_min = 0, phase_m_max = -1;  ///< empty range skips the phase expansion
  int phase_samples = 10000;
  double alpha = 0.05;
};

struct LpcheckArgs {
  Common common;
  int n = 64;
  double length = 64.0;
  std::uint64_t seed = 1;
  int samples = 100000;
};

struct VolumeArgs {
  Common common;
  int k = 0, k1 = 0, k2 = -1;
  std::string signs = "pm";
  double c1 = 2.0, c2 = 2.0;
  std::array<double, 3> xi{1.0, 0.0, 0.0};
  int l_min = -10, l_max = -2;
  long long samples = 200000;
  std::uint64_t seed = 1;
};

struct CompareArgs {
  Common common;
  int n = 256;
  double length = 64.0;
  double sigma = 2.0;
  double eps0 = 0.05;
  double t_final = 200.0;
  double frame_interval = 5.0;
};

struct SurfaceArgs {
  Common common;
  double c1 = 2.0, c2 = 2.0;
  int n_theta = 91, n_phi = 4;
};

CommandResult cmd_simulate(const SimulateArgs& a);
CommandResult cmd_decay(const DecayArgs& a);
CommandResult cmd_resonance(const ResonanceArgs& a);
CommandResult cmd_lpcheck(const LpcheckArgs& a);
CommandResult cmd_volume(const VolumeArgs& a);
CommandResult cmd_compare(const CompareArgs& a);
CommandResult cmd_surface(const SurfaceArgs& a);

/// Default simulate config as pretty JSON.
std::string default_config_text();

/// Column names of diagnostics.csv.
const std::vector<std::string>& diagnostics_columns();

}  // namespace twave::cli
