#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twave/dispersion.hpp"
#include "twave/grid.hpp"
#include "twave/shells.hpp"

namespace twave {

// ==== Cutoffs ====

/// Fixed even bump: 1 on [-5/4, 5/4], 0 outside (-3/2, 3/2), smooth in between.
struct CutoffSpec {
  static constexpr double plateau = 1.25;
  static constexpr double support = 1.5;
};

double psi_tilde(double x);
/// psi_k(r) = psi_tilde(r / 2^k) - psi_tilde(r / 2^{k-1}); r = |x|.
double psi_k(int k, double r);
double psi_leq(int k, double r);
double psi_geq(int k, double r);
/// psi_{k-1} + psi_k + psi_{k+1}.
double psi_band(int k, double r);
/// Lowest admissible physical scale for frequency shell k: -min(k, 0).
inline int min_atom_j(int k) { return k < 0 ? -k : 0; }
/// Physical cutoff of the atom (j, k); the first atom carries the whole ball.
double varphi_jk(int j, int k, double r);

inline double psi_k(int k, const Vec3& x) { return psi_k(k, norm(x)); }

enum class ShellClass { high_high, low_high, high_low, none };

/// Membership of (k1, k2) in the three interaction classes of output shell k.
/// High x high is checked first where the classes overlap.
ShellClass classify_shells(int k, int k1, int k2);
std::string to_string(ShellClass c);

// ==== Projections ====

/// Shell k is resolved by the grid if it lies between the fundamental frequency and Nyquist.
bool shell_representable(const Grid& g, int k);
/// Smallest and largest representable shell; returns {1, 0} if none.
std::pair<int, int> representable_shells(const Grid& g);

/// P_k. Sets *truncated when part of the shell lies beyond Nyquist.
SpectralField project_shell(const SpectralField& f, int k, bool* truncated = nullptr);
SpectralField project_leq(const SpectralField& f, int k);
SpectralField project_geq(const SpectralField& f, int k);

/// Largest atom scale needed to cover the box: smallest j with (5/4) 2^j >= max |x|.
int max_atom_j(const Grid& g, int k);

/// Q_{j,k} f = P_k(varphi_{j,k} P_k f). Throws UsageError if j < -min(k, 0).
SpectralField atom_project(const SpectralField& f, int j, int k);

struct Atom {
  int j;
  int k;
  SpectralField payload;
};

/// All atoms of shell k from the first scale up to max_atom_j; they sum to P_k f.
std::vector<Atom> atoms(const SpectralField& f, int k);

/// max | sum_k psi_k(r) - 1 | and the telescoped psi_leq + sum + psi_geq form, over n_samples
/// log-uniform radii in [2^-18, 2^18].
double partition_of_unity_error(int n_samples = 100000, std::uint64_t seed = 1);

/// max over shells k in [k_lo, k_hi] of |sum_j Q_{j,k} f - P_k f|_2 / |P_k f|_2.
double atom_reconstruction_error(const SpectralField& f, int k_lo, int k_hi);

// ==== Norms ====

struct NormReport {
  double z_norm = 0.0;
  double linf_xi = 0.0;
  double sobolev = 0.0;
  int sobolev_order = 8;
  double alpha = 0.05;
};

/// sup over representable shells k and j in [-k_-, max_atom_j] of 2^{(1+alpha) j} |Q_{j,k} f|_2.
/// Throws DataError on non-finite input.
double z_norm(const SpectralField& f, double alpha = 0.05);

/// sup_xi <xi>^w |f(xi)|. Comparable to sup_k 2^{w k_+} |f psi_k|_inf with constants
/// depending only on w.
double linf_xi_norm(const SpectralField& h, int weight_order = 8);

/// (integral <xi>^{2N} |f(xi)|^2 dxi / (2 pi)^3)^{1/2}.
double sobolev_norm(const SpectralField& f, int order);

NormReport norm_report(const SpectralField& f, int sobolev_order = 8, double alpha = 0.05);

// ==== Kernel L1 estimate ====

using LinearSymbol = std::function<cplx(const Vec3&)>;

struct KernelOptions {
  int n = 64;                 ///< grid points per axis, 3D kernels
  int n_reduced = 1024;       ///< grid points per axis, reduced 2D kernels
  double delta = 0.01;        ///< interpolation exponent
  int derivative_samples = 400;
  double relative_step = 0.02;
  unsigned long long seed = 7;
};

struct KernelReport {
  double measured = 0.0;  ///< L1 norm of the kernel
  double bound = 0.0;     ///< B3^{1-delta} B4^{delta}
  double b3 = 0.0;
  double b4 = 0.0;
  double ratio = 0.0;     ///< measured / bound (0 if bound = 0)
  int dimension = 3;      ///< dimension of each frequency variable
};

/// Box used for shell k with n points: Nyquist just above the outer shell edge, so the
/// physical box is as large as the point budget allows (the cutoff tails decay slowly).
double kernel_box_length(int n, int k);

/// L1 norm of the kernel of m(xi) psi_k(xi) on R^3, with F^{-1} normalized by (2 pi)^{-3}.
/// Computed on a periodic box of about 1.9 n / 2^k: this is the L1 norm of the periodized,
/// sampled kernel. The cutoff tails decay slowly, so at n = 64 it sits well below the
/// whole-space value; it approaches it as n grows.
double kernel_l1_linear(const LinearSymbol& m, int k, const KernelOptions& opts = {});

/// Separable symbol a(xi) b(eta) on R^3 x R^3: the kernel factorizes, so measured and
/// bound are products of single-variable quantities.
KernelReport kernel_l1_estimate(const LinearSymbol& a, const LinearSymbol& b, int k, int k1,
                                const KernelOptions& opts = {});

/// General symbol m(xi, eta) (here eta is the second frequency variable, not xi - eta)
/// restricted to xi, eta on the x1 axis, so d = 1 per variable and the kernel lives on a 2D grid.
KernelReport kernel_l1_estimate_reduced(const BilinearSymbol& m, int k, int k1, const KernelOptions& opts = {});

}  // namespace twave
