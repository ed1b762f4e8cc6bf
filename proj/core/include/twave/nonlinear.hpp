#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twave/dispersion.hpp"
#include "twave/grid.hpp"

namespace twave {

enum class DataFamily { gaussian, right_moving, random };

/// How eps0 is imposed on the initial data.
///   data_norms: sum over a of |U_a|_{H^N} + |<x>^{1+alpha} U_a|_2 + |<xi>^8 U_a_hat|_inf = eps0
///   amplitude:   max over a of sup_x |du_a| = eps0, with du = (dt u, d1 u, d2 u, d3 u)
enum class DataNormalization { data_norms, amplitude };

struct SimConfig {
  Grid grid = Grid::cube(32, 64.0);
  WaveSpeeds speeds = WaveSpeeds::make(2.0, 2.0);
  NullFormSpec nf = NullFormSpec::paper_null();
  double eps0 = 1e-3;
  double dt = 0.0;  ///< 0 selects 0.1 * smallest grid spacing
  double t_final = 1.0;
  double dealias = 2.0 / 3.0;  ///< spherical cutoff as a fraction of Nyquist; 1 keeps all but Nyquist
  int sobolev_order = 8;
  double alpha = 0.05;
  double delta = 0.01;
  std::uint64_t seed = 1;
  DataFamily family = DataFamily::gaussian;
  DataNormalization normalization = DataNormalization::data_norms;
  double sigma = 4.0;  ///< Gaussian width
  Vec3 xi0{};          ///< Gaussian modulation
  double frame_interval = 1.0;
  int checkpoint_levels = 5;  ///< dyadic checkpoints t_final 2^{-i}, i < levels
  int max_halvings = 4;
  bool compute_z = true;  ///< Z norms dominate the diagnostics cost

  double effective_dt() const;
  /// Throws UsageError on inconsistent settings.
  void validate() const;
};

struct ProfileState {
  SpectralField h1;
  SpectralField h2;
  double t = 0.0;
};

struct DiagnosticsFrame {
  double t = 0.0;
  double energy_HN = 0.0;
  double z1 = 0.0, z2 = 0.0;
  double linfxi1 = 0.0, linfxi2 = 0.0;
  double linf_phys1 = 0.0, linf_phys2 = 0.0;
  double dhdt_linfxi = 0.0;
};

/// Physical time and space derivatives of u_a recovered from a half wave.
struct WaveDerivatives {
  std::vector<double> ut;
  std::array<std::vector<double>, 3> dx;  ///< empty for degenerate axes
};

/// Precomputed multipliers for one grid and one pair of speeds.
class ProfileSolver {
 public:
  explicit ProfileSolver(const SimConfig& config);

  const SimConfig& config() const { return config_; }
  const Grid& grid() const { return config_.grid; }

  /// d/dt of both profiles: e^{it Lambda_a} mask N_a(u1, u2), mean mode removed.
  std::pair<SpectralField, SpectralField> rhs(const ProfileState& s) const;
  /// One classical RK4 step of size dt. Throws InstabilityError on non-finite output.
  ProfileState step(const ProfileState& s, double dt) const;

  /// U_a(t) = e^{-it Lambda_a} h_a.
  SpectralField half_wave(const SpectralField& h, Wave a, double t) const;
  WaveDerivatives derivatives(const SpectralField& U, Wave a) const;
  /// max over a and components of sup_x |du_a|.
  double gradient_sup(const ProfileState& s) const;
  SpectralField apply_mask(SpectralField f) const;

 private:
  SimConfig config_;
  std::vector<double> lambda1_, lambda2_;
  std::vector<unsigned char> mask_;
  bool zero_nonlinearity_ = false;
};

std::pair<SpectralField, SpectralField> rhs_profile(const ProfileState& s, const SimConfig& config);
ProfileState step(const ProfileState& s, double dt, const SimConfig& config);

/// Sum of the three data norms of one half wave.
double data_norm(const SpectralField& U, int sobolev_order, double alpha);

/// Initial profiles h_a(0) = U_a(0) for the configured family, masked and normalized to eps0.
ProfileState initial_state(const SimConfig& config);

DiagnosticsFrame diagnostics(const ProfileSolver& solver, const ProfileState& s);

struct RunRecord {
  std::vector<DiagnosticsFrame> frames;
  std::vector<ProfileState> checkpoints;  ///< dyadic, increasing in time
  ProfileState final_state;
  /// max_a |<xi>^8 (h_a(t) - h_a(0))|_inf at each frame
  std::vector<double> drift;
  std::vector<double> gradient_sup;  ///< max_a sup |du_a| at each frame
  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_reason;
  double dt = 0.0;  ///< final step size after any halvings
  long long steps = 0;
};

/// Runs from initial_state(config), or from the given state.
RunRecord simulate(const SimConfig& config, const std::optional<ProfileState>& start = std::nullopt,
                   const std::function<void(const DiagnosticsFrame&)>& on_frame = {});

struct ScatteringReport {
  struct Difference {
    double t1, t2, value;
  };
  std::vector<Difference> checkpoints;
  ProfileState limit_profile;
  double fitted_decay = 0.0;  ///< slope of log2 difference against log2 t1
  bool strictly_decreasing = false;
};

/// Dyadic Cauchy differences of the profiles in the <xi>^8 weighted sup norm.
/// Throws UsageError with fewer than four checkpoints.
ScatteringReport scattering_check(const RunRecord& run);

/// Same solver on a (n, 1, 1) grid, where Lambda_1 = Lambda_2 = |xi_1| and the transverse terms vanish.
RunRecord asymptotic_1d_solve(const SimConfig& config_1d, const std::optional<ProfileState>& start = std::nullopt);

struct ReductionReport {
  std::vector<double> times;
  std::vector<double> deviation;  ///< relative sup difference of the averaged 3D profile and the 1D profile
  double max_deviation = 0.0;
};

/// Evolves transverse-independent 3D data and its 1D reduction side by side.
/// dt_1d = 0 uses the 3D step. Throws UsageError when the data depend on x2 or x3.
ReductionReport transverse_reduction_compare(const SimConfig& config_3d, const ProfileState& start_3d,
                                             double dt_1d = 0.0);

struct BlowupReport {
  std::vector<double> times;
  std::vector<double> null_sup;     ///< max sup |du| for the null nonlinearity
  std::vector<double> flipped_sup;  ///< same for the sign-flipped nonlinearity
  std::optional<double> exceed_time;  ///< first frame where flipped > 5 * null
  bool flipped_aborted = false;
  double null_growth = 0.0;  ///< max over time of null_sup / null_sup(0)
};

/// Runs config with nf = paper_null and with nf = sign_flipped from identical data.
BlowupReport blowup_probe(const SimConfig& config);

// ==== Checkpoints ====

/// Little-endian layout: "AWCK", u32 version, u32 n[3], f64 L[3], f64 c1, f64 c2, f64 t,
/// then h1 and h2 as (re, im) f64 pairs in storage order.
void write_checkpoint(const std::string& path, const ProfileState& s, const WaveSpeeds& speeds);

struct Checkpoint {
  ProfileState state;
  double c1 = 0.0, c2 = 0.0;
};

/// Throws DataError on a malformed or truncated file.
Checkpoint read_checkpoint(const std::string& path);

}  // namespace twave
