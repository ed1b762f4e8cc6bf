#include "twave/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fd_stencil.hpp"
#include "twave/errors.hpp"

namespace twave {

namespace {

double smooth_step(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double psi_tilde(double x) {
  const double r = std::abs(x);
  if (r <= CutoffSpec::plateau) return 1.0;
  if (r >= CutoffSpec::support) return 0.0;
  const double up = smooth_step(CutoffSpec::support - r);
  const double down = smooth_step(r - CutoffSpec::plateau);
  return up / (up + down);
}

double psi_leq(int k, double r) { return psi_tilde(std::ldexp(r, -k)); }
double psi_k(int k, double r) { return psi_leq(k, r) - psi_leq(k - 1, r); }
double psi_geq(int k, double r) { return 1.0 - psi_leq(k - 1, r); }
double psi_band(int k, double r) { return psi_leq(k + 1, r) - psi_leq(k - 2, r); }

double varphi_jk(int j, int k, double r) {
  const int j0 = min_atom_j(k);
  if (j < j0) throw UsageError("atom index j must be at least -min(k, 0)");
  return j == j0 ? psi_leq(j, r) : psi_k(j, r);
}

ShellClass classify_shells(int k, int k1, int k2) {
  if (std::abs(k1 - k2) <= 10 && k <= k1 + 10) return ShellClass::high_high;
  if (k1 <= k2 - 10 && std::abs(k - k2) <= 5) return ShellClass::low_high;
  if (k2 <= k1 - 10 && std::abs(k - k1) <= 5) return ShellClass::high_low;
  return ShellClass::none;
}

std::string to_string(ShellClass c) {
  switch (c) {
    case ShellClass::high_high: return "high_high";
    case ShellClass::low_high: return "low_high";
    case ShellClass::high_low: return "high_low";
    case ShellClass::none: break;
  }
  return "none";
}

// ==== Projections ====

bool shell_representable(const Grid& g, int k) {
  return shell_outer(k) <= g.nyquist() && shell_inner(k) >= g.fundamental();
}

std::pair<int, int> representable_shells(const Grid& g) {
  const int lo = static_cast<int>(std::ceil(std::log2(g.fundamental() / 0.625)));
  const int hi = static_cast<int>(std::floor(std::log2(g.nyquist() / 1.5)));
  int a = lo - 1, b = hi + 1;
  while (!shell_representable(g, a) && a <= b) ++a;
  while (!shell_representable(g, b) && b >= a) --b;
  if (a > b) return {1, 0};
  return {a, b};
}

namespace {

template <class F>
SpectralField multiply(const SpectralField& f, F&& symbol) {
  SpectralField out(f.grid);
  f.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    if (f[idx] != cplx{0.0, 0.0}) out[idx] = f[idx] * symbol(norm(f.grid.xi(i, j, k)));
  });
  return out;
}

}  // namespace

SpectralField project_shell(const SpectralField& f, int k, bool* truncated) {
  if (truncated) *truncated = !shell_representable(f.grid, k);
  return multiply(f, [k](double r) { return psi_k(k, r); });
}

SpectralField project_leq(const SpectralField& f, int k) {
  return multiply(f, [k](double r) { return psi_leq(k, r); });
}

SpectralField project_geq(const SpectralField& f, int k) {
  return multiply(f, [k](double r) { return psi_geq(k, r); });
}

int max_atom_j(const Grid& g, int k) {
  int j = min_atom_j(k);
  const double R = g.max_radius();
  while (CutoffSpec::plateau * std::ldexp(1.0, j) < R) ++j;
  return j;
}

namespace {

// Outer projection of an atom: psi_{k-1} + psi_k + psi_{k+1}, which is 1 on supp psi_k.
SpectralField band_limit(const SpectralField& f, int k) {
  return multiply(f, [k](double r) { return psi_band(k, r); });
}

SpectralField localize(const PhysicalField& pk, int j, int k) {
  PhysicalField w(pk.grid);
  pk.grid.for_each([&](int a, int b, int c, std::size_t idx) {
    w.values[idx] = pk.values[idx] * varphi_jk(j, k, norm(pk.grid.x(a, b, c)));
  });
  return band_limit(to_spectral(w), k);
}

}  // namespace

SpectralField atom_project(const SpectralField& f, int j, int k) {
  if (j < min_atom_j(k)) throw UsageError("atom index j must be at least -min(k, 0)");
  return localize(to_physical(project_shell(f, k)), j, k);
}

std::vector<Atom> atoms(const SpectralField& f, int k) {
  const PhysicalField pk = to_physical(project_shell(f, k));
  std::vector<Atom> out;
  for (int j = min_atom_j(k); j <= max_atom_j(f.grid, k); ++j) out.push_back({j, k, localize(pk, j, k)});
  return out;
}

double partition_of_unity_error(int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw UsageError("partition check: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-18.0, 18.0);
  double worst = 0.0;
  for (int n = 0; n < n_samples; ++n) {
    const double r = std::exp2(u(rng));
    double s = 0.0;
    for (int k = -20; k <= 20; ++k) s += psi_k(k, r);
    worst = std::max(worst, std::abs(s - 1.0));
    worst = std::max(worst, std::abs(psi_leq(-21, r) + s + psi_geq(21, r) - 1.0));
  }
  return worst;
}

double atom_reconstruction_error(const SpectralField& f, int k_lo, int k_hi) {
  if (k_lo > k_hi) throw UsageError("atom check: empty shell range");
  double worst = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const SpectralField pk = project_shell(f, k);
    SpectralField sum(f.grid);
    for (const auto& a : atoms(f, k)) sum += a.payload;
    const double ref = l2_norm(pk);
    if (ref > 0.0) worst = std::max(worst, l2_norm(sum - pk) / ref);
  }
  return worst;
}

// ==== Norms ====

double z_norm(const SpectralField& f, double alpha) {
  require_finite(f, "z_norm input");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("z_norm: alpha must lie in (0, 1)");
  const auto [lo, hi] = representable_shells(f.grid);
  double z = 0.0;
  for (int k = lo; k <= hi; ++k)
    for (const auto& a : atoms(f, k)) z = std::max(z, std::pow(2.0, (1.0 + alpha) * a.j) * l2_norm(a.payload));
  return z;
}

double linf_xi_norm(const SpectralField& h, int weight_order) {
  if (weight_order < 0) throw UsageError("linf_xi_norm: weight order must be nonnegative");
  double s = 0.0;
  h.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    const Vec3 xi = h.grid.xi(i, j, k);
    s = std::max(s, std::pow(1.0 + dot(xi, xi), 0.5 * weight_order) * std::abs(h[idx]));
  });
  return s;
}

double sobolev_norm(const SpectralField& f, int order) {
  double s = 0.0;
  f.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    const Vec3 xi = f.grid.xi(i, j, k);
    s += std::pow(1.0 + dot(xi, xi), order) * std::norm(f[idx]);
  });
  return std::sqrt(s / f.grid.volume());
}

NormReport norm_report(const SpectralField& f, int sobolev_order, double alpha) {
  NormReport r;
  r.alpha = alpha;
  r.sobolev_order = sobolev_order;
  r.z_norm = z_norm(f, alpha);
  r.linf_xi = linf_xi_norm(f, 8);
  r.sobolev = sobolev_norm(f, sobolev_order);
  return r;
}

// ==== Kernel L1 estimate ====

double kernel_box_length(int n, int k) { return std::numbers::pi * n / (1.1 * shell_outer(k)); }

namespace {

void check_resolution(const KernelOptions& o) {
  if (o.n < 16 || o.n_reduced < 16) throw ResolutionError("kernel estimate: need at least 16 points per axis");
  if (o.derivative_samples < 1) throw UsageError("kernel estimate: derivative_samples must be positive");
  if (!(o.delta >= 0.0 && o.delta <= 1.0)) throw UsageError("kernel estimate: delta must lie in [0, 1]");
}

double l1_physical(const SpectralField& f) {
  const PhysicalField k = to_physical(f);
  double s = 0.0;
  for (const auto& v : k.values) s += std::abs(v);
  return s * f.grid.cell_volume();
}

// Sum over |alpha| <= n of sup |xi|^{|alpha|} |d^alpha a| psi_band(k, |xi|), for n = 3 and 4.
std::pair<double, double> derivative_sums_3d(const LinearSymbol& a, int k, const KernelOptions& o) {
  const auto stencils = detail::stencils_up_to<3>(4);
  std::vector<double> sup(stencils.size(), 0.0);
  const double h = o.relative_step * std::ldexp(1.0, k);
  std::mt19937_64 rng(o.seed);
  for (int s = 0; s < o.derivative_samples; ++s) {
    const Vec3 xi = uniform_in_annulus(rng, shell_inner(k - 1), shell_outer(k + 1));
    const double r = norm(xi);
    const double cut = psi_band(k, r);
    for (std::size_t t = 0; t < stencils.size(); ++t) {
      cplx acc{0.0, 0.0};
      for (const auto& [off, w] : stencils[t].taps) acc += w * a({xi[0] + off[0] * h, xi[1] + off[1] * h, xi[2] + off[2] * h});
      const int n = stencils[t].total();
      sup[t] = std::max(sup[t], std::pow(r / h, n) * std::abs(acc) * cut);
    }
  }
  double s3 = 0.0, s4 = 0.0;
  for (std::size_t t = 0; t < stencils.size(); ++t) {
    if (stencils[t].total() <= 3) s3 += sup[t];
    s4 += sup[t];
  }
  return {s3, s4};
}

KernelReport finish(double measured, double b3, double b4, double delta, int dim) {
  KernelReport r;
  r.measured = measured;
  r.b3 = b3;
  r.b4 = b4;
  r.bound = (b3 > 0.0 && b4 > 0.0) ? std::pow(b3, 1.0 - delta) * std::pow(b4, delta) : 0.0;
  r.ratio = r.bound > 0.0 ? measured / r.bound : 0.0;
  r.dimension = dim;
  return r;
}

}  // namespace

double kernel_l1_linear(const LinearSymbol& m, int k, const KernelOptions& opts) {
  check_resolution(opts);
  const Grid g = Grid::cube(opts.n, kernel_box_length(opts.n, k));
  SpectralField f(g);
  g.for_each([&](int i, int j, int l, std::size_t idx) {
    const Vec3 xi = g.xi(i, j, l);
    const double cut = psi_k(k, norm(xi));
    if (cut > 0.0) f[idx] = m(xi) * cut;
  });
  return l1_physical(f);
}

KernelReport kernel_l1_estimate(const LinearSymbol& a, const LinearSymbol& b, int k, int k1,
                                const KernelOptions& opts) {
  const double measured = kernel_l1_linear(a, k, opts) * kernel_l1_linear(b, k1, opts);
  const auto [a3, a4] = derivative_sums_3d(a, k, opts);
  const auto [b3, b4] = derivative_sums_3d(b, k1, opts);
  return finish(measured, a3 * b3, a4 * b4, opts.delta, 3);
}

KernelReport kernel_l1_estimate_reduced(const BilinearSymbol& m, int k, int k1, const KernelOptions& opts) {
  check_resolution(opts);
  const int n = opts.n_reduced;
  const Grid g({n, n, 1}, {kernel_box_length(n, k), kernel_box_length(n, k1), 1.0});
  auto eval = [&](double x, double y) { return m(Vec3{x, 0.0, 0.0}, Vec3{y, 0.0, 0.0}); };
  SpectralField f(g);
  g.for_each([&](int i, int j, int l, std::size_t idx) {
    const double x = g.wavenumber(0, i), y = g.wavenumber(1, j);
    const double cut = psi_k(k, std::abs(x)) * psi_k(k1, std::abs(y));
    (void)l;
    if (cut > 0.0) f[idx] = eval(x, y) * cut;
  });
  const double measured = l1_physical(f);

  // sum over a, b <= n of sup |x|^a |y|^b |d_x^a d_y^b m| on the fattened shells
  const auto stencils = detail::stencils_up_to<2>(8);
  std::vector<double> sup(stencils.size(), 0.0);
  const double hx = opts.relative_step * std::ldexp(1.0, k);
  const double hy = opts.relative_step * std::ldexp(1.0, k1);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ux(shell_inner(k - 1), shell_outer(k + 1));
  std::uniform_real_distribution<double> uy(shell_inner(k1 - 1), shell_outer(k1 + 1));
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < opts.derivative_samples; ++s) {
    const double x = coin(rng) ? ux(rng) : -ux(rng);
    const double y = coin(rng) ? uy(rng) : -uy(rng);
    const double cut = psi_band(k, std::abs(x)) * psi_band(k1, std::abs(y));
    for (std::size_t t = 0; t < stencils.size(); ++t) {
      const auto& st = stencils[t];
      if (st.order[0] > 4 || st.order[1] > 4) continue;
      cplx acc{0.0, 0.0};
      for (const auto& [off, w] : st.taps) acc += w * eval(x + off[0] * hx, y + off[1] * hy);
      const double v = std::pow(std::abs(x) / hx, st.order[0]) * std::pow(std::abs(y) / hy, st.order[1]) *
                       std::abs(acc) * cut;
      sup[t] = std::max(sup[t], v);
    }
  }
  double s3 = 0.0, s4 = 0.0;
  for (std::size_t t = 0; t < stencils.size(); ++t) {
    const auto& st = stencils[t];
    if (st.order[0] > 4 || st.order[1] > 4) continue;
    if (st.order[0] <= 3 && st.order[1] <= 3) s3 += sup[t];
    s4 += sup[t];
  }
  return finish(measured, s3, s4, opts.delta, 1);
}

}  // namespace twave
