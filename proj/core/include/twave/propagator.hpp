#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twave/dispersion.hpp"
#include "twave/dyadic.hpp"
#include "twave/grid.hpp"

namespace twave {

/// Multiplies each coefficient by exp(-i mu t Lambda_a(xi)).
SpectralField evolve_free(const SpectralField& h, double t, Wave a, Sign mu, const WaveSpeeds& speeds);

enum class DecayNorm { linf, shellwise };

struct DecayReport {
  std::vector<double> times;
  std::vector<double> sup_norms;
  std::vector<double> boundary_fraction;  ///< share of |U|^2 within 5% of the box faces
  double fitted_exponent = 0.0;           ///< slope of log sup against log t
  double fit_residual = 0.0;              ///< rms of the log-log residuals
  std::optional<int> shell;               ///< empty for the full field
  bool wraparound = false;                ///< fit invalid: the wave reached the box boundary
  bool degenerate = false;                ///< all norms zero, no fit
};

struct DecayOptions {
  DecayNorm norm = DecayNorm::linf;
  int shell = 0;  ///< used with DecayNorm::shellwise
  Sign mu = Sign::plus;
  double boundary_threshold = 1e-2;  ///< tolerated growth of the boundary energy share
};

/// Evolves the data to each time, records sup_x |U(t, x)| (of P_k U for shellwise) and fits the
/// exponent. Times must be positive and strictly increasing.
DecayReport measure_decay(const SpectralField& data, const std::vector<double>& times, Wave a,
                          const WaveSpeeds& speeds, const DecayOptions& opts = {});

struct SuperLocalizedCheck {
  int k = 0;
  int k_tilde = 0;
  int m = 0;
  double t = 0.0;
  double n = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double linf_term = 0.0;   ///< 2^{k + k~ + k_+} ||f_hat psi_k||_inf
  double atom_term = 0.0;   ///< weighted sup over j of 2^{(1+alpha) j} ||T Q_{j,k} f||_2
};

struct SuperLocalizedOptions {
  double alpha = 0.05;
  double delta = 0.01;
  Sign mu = Sign::plus;
  /// Symbol m(xi) multiplying f_hat, with its S^infty_k norm. Defaults to m = 1.
  LinearSymbol symbol;
  double symbol_norm = 1.0;
};

/// Energy-shell multiplier psi_{k~}(Lambda_a(xi) - n) applied to f.
SpectralField energy_shell(const SpectralField& f, Wave a, const WaveSpeeds& speeds, int k_tilde, double n);

/// Left side: sup over grid points x of |int e^{i x.xi - i mu t Lambda_a} m f_hat psi_{k~}(Lambda_a - n) dxi|.
/// Right side: the two-term bound with unit constants, including the 2^{-m} factor.
/// Throws UsageError for parameters outside the admissible window and ResolutionError when
/// the energy band misses the grid.
SuperLocalizedCheck superlocalized_decay_check(const SpectralField& f, int m, double t, int k, int k_tilde, double n,
                                               Wave a, const WaveSpeeds& speeds,
                                               const SuperLocalizedOptions& opts = {});

enum class VectorField { S, L1, Omega12, Omega13 };

/// Sup over random space-time points of |box_a(Gamma u)| for the plane wave
/// u = cos(x.xi0 - t Lambda_a(xi0)); for S, |box_a(S u) - 2 box_a u|. Derivatives are exact
/// (second-order forward-mode jets on the closed form).
double vectorfield_residual(VectorField gamma, Wave a, const Vec3& xi0, const WaveSpeeds& speeds,
                            int n_points = 1000, double extent = 10.0, std::uint64_t seed = 1);

}  // namespace twave
