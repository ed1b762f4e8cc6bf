#pragma once

#include <array>
#include <complex>
#include <functional>
#include <utility>

#include "twave/grid.hpp"
#include "twave/vec3.hpp"

namespace twave {

/// The two waves: branch 1 is isotropic, branch 2 has speeds (1, c1, c2).
enum class Wave : int { first = 1, second = 2 };

/// Converts a user-supplied branch index, throwing UsageError outside {1, 2}.
Wave wave_from_int(int a);

enum class Sign : int { plus = 1, minus = -1 };

inline double value(Sign s) { return static_cast<double>(static_cast<int>(s)); }
inline Sign operator-(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
Sign sign_from_int(int s);

struct SignPair {
  Sign mu = Sign::plus;
  Sign nu = Sign::plus;

  double product() const { return value(mu) * value(nu); }
};

/// Transverse speeds of the second wave. Both must lie on the same side of 1.
class WaveSpeeds {
 public:
  /// Throws UsageError unless c1, c2 > 0 and (c1 - 1)(c2 - 1) > 0.
  static WaveSpeeds make(double c1, double c2);

  double c1() const { return c1_; }
  double c2() const { return c2_; }
  /// Smallest k <= 0 with 2^k >= min(|1 - c1|, |1 - c2|), capped at 0.
  int c_low() const { return c_low_; }
  /// Smallest k >= 0 with 2^k >= max(c1, c2).
  int c_high() const { return c_high_; }
  /// Anisotropy weights (1, c1^2, c2^2) of Delta_2.
  Vec3 weights() const { return {1.0, c1_ * c1_, c2_ * c2_}; }

 private:
  WaveSpeeds(double c1, double c2, int lo, int hi) : c1_(c1), c2_(c2), c_low_(lo), c_high_(hi) {}
  double c1_, c2_;
  int c_low_, c_high_;
};

/// Constant-coefficient bilinear nonlinearity
///   time_coeff * dt u1 dt u2 + x1_coeff * d1 u1 d1 u2 + sum_{i,j in {2,3}} q^a_ij d_i u1 d_j u2.
struct NullFormSpec {
  enum class Mode { paper_null, sign_flipped, custom };

  Mode mode = Mode::paper_null;
  double time_coeff = 1.0;
  double x1_coeff = -1.0;
  /// qij[a-1][i-2][j-2]
  std::array<std::array<std::array<double, 2>, 2>, 2> qij{};

  /// dt dt - d1 d1, with an optional transverse table.
  static NullFormSpec paper_null(const std::array<std::array<std::array<double, 2>, 2>, 2>& q = {});
  /// dt dt + d1 d1: the x1 part loses its null structure.
  static NullFormSpec sign_flipped(const std::array<std::array<std::array<double, 2>, 2>, 2>& q = {});
  /// Fully user-specified coefficients; throws UsageError on non-finite entries.
  static NullFormSpec custom(double time_coeff, double x1_coeff,
                             const std::array<std::array<std::array<double, 2>, 2>, 2>& q);

  double q(Wave a, int i, int j) const { return qij[static_cast<int>(a) - 1][i - 2][j - 2]; }
  bool is_zero() const;
};

double lambda(Wave a, const Vec3& xi, const WaveSpeeds& speeds);

/// Gradient of lambda; throws DomainError at xi = 0.
Vec3 group_velocity(Wave a, const Vec3& xi, const WaveSpeeds& speeds);

/// Lambda_a(xi) - mu Lambda_1(xi - eta) - nu Lambda_2(eta).
double phase(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds);

/// Symbol of the bilinear interaction between h1^mu at frequency p = xi - eta and
/// h2^nu at eta. Throws DomainError when p or eta vanishes.
std::complex<double> interaction_symbol(Wave a, SignPair s, const Vec3& p, const Vec3& eta,
                                        const WaveSpeeds& speeds, const NullFormSpec& nf);

// Half waves U_a = (dt - i Lambda_a) u_a on the spectral side.

SpectralField half_wave_decompose(const SpectralField& u, const SpectralField& ut, Wave a,
                                  const WaveSpeeds& speeds);

struct WavePair {
  SpectralField u;
  SpectralField ut;
};

/// Inverse of half_wave_decompose on zero-mean data. Throws DomainError if the
/// zero-frequency coefficient of U is nonzero, since Lambda^{-1} is singular there.
WavePair half_wave_reconstruct(const SpectralField& U, Wave a, const WaveSpeeds& speeds);

/// Bilinear symbol m(p, eta), p = xi - eta.
using BilinearSymbol = std::function<std::complex<double>(const Vec3& p, const Vec3& eta)>;

struct SymbolBoundReport {
  double bound = 0.0;          ///< max over sampled points and multi-indices
  double order0 = 0.0;         ///< sup |m| alone
  int worst_order_p = 0;       ///< |alpha| of the maximizing term
  int worst_order_eta = 0;     ///< |beta| of the maximizing term
  int accepted_samples = 0;
  bool empty = false;          ///< no sample landed in the shell triple
  bool exceeds_limit = false;
};

struct SymbolBoundOptions {
  int max_total_order = 4;
  double limit = 1.0e3;
  unsigned long long seed = 12345;
  /// Finite-difference step relative to the smaller input scale.
  double relative_step = 0.02;
};

/// Sampled sup of 2^{|alpha| k1 + |beta| k2} |d_p^alpha d_eta^beta m(p, eta)| over
/// |xi| ~ 2^k, |p| ~ 2^k1, |eta| ~ 2^k2 and |alpha| + |beta| <= max_total_order.
SymbolBoundReport symbol_bound(const BilinearSymbol& m, int k, int k1, int k2, int sample_count,
                               const SymbolBoundOptions& opts = {});

/// symbol_bound maximized over all interaction symbols q^a_{mu,nu} of nf.
SymbolBoundReport validate_nullform(const NullFormSpec& nf, const WaveSpeeds& speeds, int k, int k1, int k2,
                                    int sample_count, const SymbolBoundOptions& opts = {});

}  // namespace twave
