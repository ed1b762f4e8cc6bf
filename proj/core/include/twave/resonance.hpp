#pragma once

#include <cstdint>
#include <vector>

#include "twave/dispersion.hpp"

namespace twave {

/// Four-term resonance functional:
///   |eta'|^2/|eta|^2 + |mu sgn(xi1 - eta1) - nu sgn(eta1)| + |p'|^2/|p|^2
///   + |p' / |p1| - mu nu (c1^2 eta2, c2^2 eta3) / |eta1||,
/// with p = xi - eta and ' the transverse part. Throws DomainError when eta, p, eta1 or p1 vanish.
double l_functional(SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds);

/// grad_eta Phi^a = mu (xi - eta)/|xi - eta| - nu N_2(eta); independent of a.
Vec3 grad_eta_phase(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds);

struct LowerBoundReport {
  double min_ratio = 0.0;  ///< min |grad_eta Phi| / min(l, 1)
  Vec3 worst_xi{};
  Vec3 worst_eta{};
  int samples = 0;
};

/// Samples xi in shell k and eta with |eta| ~ 2^k2, |xi - eta| ~ 2^k1.
/// l is unbounded near eta1 = 0 while the gradient is not, so the ratio uses min(l, 1).
LowerBoundReport lower_bound_check(Wave a, SignPair s, const WaveSpeeds& speeds, int k, int k1, int k2,
                                   int n_samples, std::uint64_t seed = 1);

// ==== Resonant points ====

struct ResonancePoint {
  Vec3 xi{};
  Vec3 eta{};
  Wave a = Wave::first;
  SignPair signs{};
  double phase_value = 0.0;
  double grad_eta_phase_norm = 0.0;
  /// max(|xi2|, |xi3|, |eta2|, |eta3|) / |xi|
  double transverse_ratio = 0.0;
};

struct ResonanceOptions {
  double tol_phase = 1e-6;
  double tol_grad = 1e-6;
  int descent_steps = 50;
  int lm_iterations = 60;
  std::uint64_t seed = 1;
};

/// Draws (xi, eta) in the shell triple, runs gradient descent on Phi^2 + |grad_eta Phi|^2 with
/// step 2^{-7} 2^k, polishes with Levenberg-Marquardt and keeps the points that meet both
/// tolerances. An empty result is not an error.
std::vector<ResonancePoint> resonance_sample(Wave a, SignPair s, const WaveSpeeds& speeds, int k, int k1, int k2,
                                             int n_samples, const ResonanceOptions& opts = {});

/// Whether (xi, eta) meets the tolerances; fills the point either way.
bool accept_point(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds,
                  const ResonanceOptions& opts, ResonancePoint* out);

// ==== Phase expansion near the common axis ====

/// Explicit leading part of Phi^a near the resonant axis configuration, in the eta form.
double phase_leading(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds);

/// Whether (mu, nu) admits on-axis resonances (false only for (-, -)).
bool has_axis_resonance(SignPair s);

struct PhaseSample {
  int m = 0;
  Vec3 xi{};
  Vec3 eta{};
  double residual = 0.0;
};

struct PhaseExpansionLevel {
  int m = 0;
  int accepted = 0;
  int attempted = 0;
  double max_residual = 0.0;
  bool low_coverage = false;
};

struct PhaseExpansionReport {
  Wave a = Wave::first;
  SignPair signs{};
  double alpha = 0.05;
  std::vector<PhaseExpansionLevel> levels;
  std::vector<PhaseSample> sample_residuals;  ///< worst sample per level
  double fitted_slope = 0.0;                  ///< of log2(max residual) against m
  bool low_coverage = false;
};

/// For each m draws resonant near-axis samples with |eta'|/|eta| ~ 2^{-m/4} and
/// l < 2^{-m/2 + alpha m} and records max |Phi - leading|.
/// Throws UsageError for (-, -), which has no resonant configuration.
PhaseExpansionReport phase_expansion_check(Wave a, SignPair s, const WaveSpeeds& speeds, const std::vector<int>& m_list,
                                           double alpha = 0.05, int samples_per_m = 10000, std::uint64_t seed = 1);

// ==== Volume of the support ====

struct VolumeEstimate {
  int k = 0, k1 = 0, k2 = 0, l = 0;
  SignPair signs{};
  double measure = 0.0;
  double predicted = 0.0;  ///< 2^{min(k1,k2) + 2 max(k1,k2) + 3l/2}
  double ratio = 0.0;
  long long samples = 0;
  long long hits = 0;
  double ci_halfwidth = 0.0;  ///< 95% binomial half-width on measure
};

/// Monte Carlo measure of {eta : l(xi, eta) <= 2^l, eta in supp psi_k2, xi - eta in supp psi_k1}.
/// The smaller of eta and xi - eta is sampled in the cylinder |transverse| <= 2^{l/2} * outer
/// radius (which contains the set), stratified in the transverse radius.
VolumeEstimate volume_support_estimate(int k, int k1, int k2, int l, SignPair s, const Vec3& xi,
                                       const WaveSpeeds& speeds, long long n_samples = 1000000,
                                       std::uint64_t seed = 1);

// ==== Partitions of unity ====

enum class PartitionKind { sign_partition, hh_partition, lh_partition };

/// Values of the chosen partition at (xi, eta): 2 entries for the sign partition, 3 otherwise.
/// hh uses mu only, lh uses nu only. Throws DomainError where a ratio is undefined.
std::vector<double> partition_eval(PartitionKind which, SignPair s, const Vec3& xi, const Vec3& eta,
                                   const WaveSpeeds& speeds);

}  // namespace twave
