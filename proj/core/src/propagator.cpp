#include "twave/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "twave/errors.hpp"
#include "twave/fit.hpp"

namespace twave {

SpectralField evolve_free(const SpectralField& h, double t, Wave a, Sign mu, const WaveSpeeds& speeds) {
  SpectralField out(h.grid);
  const double s = value(mu) * t;
  h.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    out[idx] = h[idx] * std::polar(1.0, -s * lambda(a, h.grid.xi(i, j, k), speeds));
  });
  return out;
}

namespace {

double boundary_share(const PhysicalField& f) {
  const Grid& g = f.grid;
  double edge = 0.0, total = 0.0;
  g.for_each([&](int i, int j, int k, std::size_t idx) {
    const double e = std::norm(f.values[idx]);
    total += e;
    const Vec3 x = g.x(i, j, k);
    for (int ax = 0; ax < 3; ++ax)
      if (g.dims()[ax] > 1 && std::abs(x[ax]) >= 0.45 * g.lengths()[ax]) {
        edge += e;
        break;
      }
  });
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace

DecayReport measure_decay(const SpectralField& data, const std::vector<double>& times, Wave a,
                          const WaveSpeeds& speeds, const DecayOptions& opts) {
  if (times.size() < 2) throw UsageError("measure_decay: need at least two times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw UsageError("measure_decay: times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw UsageError("measure_decay: times must increase");
  }
  require_finite(data, "measure_decay data");

  DecayReport rep;
  rep.times = times;
  SpectralField h = data;
  if (opts.norm == DecayNorm::shellwise) {
    rep.shell = opts.shell;
    h = project_shell(data, opts.shell);
  }
  const double share0 = boundary_share(to_physical(h));
  for (double t : times) {
    const PhysicalField u = to_physical(evolve_free(h, t, a, opts.mu, speeds));
    rep.sup_norms.push_back(sup_norm(u));
    rep.boundary_fraction.push_back(boundary_share(u));
    if (rep.boundary_fraction.back() > share0 + opts.boundary_threshold) rep.wraparound = true;
  }

  std::vector<double> lt, ls;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (rep.sup_norms[i] > 0.0) {
      lt.push_back(std::log(times[i]));
      ls.push_back(std::log(rep.sup_norms[i]));
    }
  if (lt.size() < 2) {
    rep.degenerate = true;
    return rep;
  }
  const LineFit fit = fit_line(lt, ls);
  rep.fitted_exponent = fit.slope;
  double ss = 0.0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    const double r = ls[i] - (fit.slope * lt[i] + fit.intercept);
    ss += r * r;
  }
  rep.fit_residual = std::sqrt(ss / lt.size());
  return rep;
}

SpectralField energy_shell(const SpectralField& f, Wave a, const WaveSpeeds& speeds, int k_tilde, double n) {
  SpectralField out(f.grid);
  f.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    out[idx] = f[idx] * psi_k(k_tilde, std::abs(lambda(a, f.grid.xi(i, j, k), speeds) - n));
  });
  return out;
}

SuperLocalizedCheck superlocalized_decay_check(const SpectralField& f, int m, double t, int k, int k_tilde, double n,
                                               Wave a, const WaveSpeeds& speeds, const SuperLocalizedOptions& opts) {
  if (m < 1) throw UsageError("superlocalized check: m must be positive");
  if (k_tilde > k) throw UsageError("superlocalized check: k_tilde must not exceed k");
  const double floor_k = -m + opts.delta * m;
  if (k < floor_k || k_tilde < floor_k) throw UsageError("superlocalized check: k, k_tilde below -m + delta m");
  if (t < std::ldexp(1.0, m - 1) || t > std::ldexp(1.0, m)) throw UsageError("superlocalized check: t outside [2^{m-1}, 2^m]");
  const int ct = speeds.c_high();
  if (n < std::ldexp(1.0, k - 10 - ct) || n > std::ldexp(1.0, k + 10 + ct))
    throw UsageError("superlocalized check: n outside the energy window");
  require_finite(f, "superlocalized check data");

  const Grid& g = f.grid;
  bool band_hit = false;
  SpectralField band(g);
  g.for_each([&](int i, int j, int kk, std::size_t idx) {
    const Vec3 xi = g.xi(i, j, kk);
    const double w = psi_k(k_tilde, std::abs(lambda(a, xi, speeds) - n));
    if (w > 0.0 && psi_band(k, norm(xi)) > 0.0) band_hit = true;
    const cplx sym = opts.symbol ? opts.symbol(xi) : cplx{1.0, 0.0};
    band[idx] = f[idx] * sym * w;
  });
  if (!band_hit) throw ResolutionError("superlocalized check: energy band misses the grid near shell k");

  int dim = 0;
  for (int ax = 0; ax < 3; ++ax) dim += g.dims()[ax] > 1;
  SuperLocalizedCheck out;
  out.k = k;
  out.k_tilde = k_tilde;
  out.m = m;
  out.t = t;
  out.n = n;
  out.lhs = std::pow(2.0 * std::numbers::pi, dim) * sup_norm(to_physical(evolve_free(band, t, a, opts.mu, speeds)));

  double linf = 0.0;
  g.for_each([&](int i, int j, int kk, std::size_t idx) { linf = std::max(linf, std::abs(f[idx]) * psi_k(k, g.xi(i, j, kk))); });
  out.linf_term = std::ldexp(linf, k + k_tilde + std::max(k, 0));

  double atom_sup = 0.0;
  for (const Atom& at : atoms(f, k)) {
    const double v = std::exp2((1.0 + opts.alpha) * at.j) * l2_norm(energy_shell(at.payload, a, speeds, k_tilde, n));
    atom_sup = std::max(atom_sup, v);
  }
  out.atom_term = std::exp2(-(opts.alpha - 4 * opts.delta) * m / 2.0 + (opts.alpha + opts.delta) * k / 2.0 +
                            (2.0 * k + k_tilde) / 2.0) *
                  atom_sup;
  out.rhs = std::ldexp(opts.symbol_norm * (out.linf_term + out.atom_term), -m);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

// ==== Vector fields ====

namespace {

// Value, first and pure second derivatives in (t, x1, x2, x3).
struct Jet {
  double v = 0.0;
  std::array<double, 4> d{};
  std::array<double, 4> dd{};
};

Jet variable(int i, double v) {
  Jet j;
  j.v = v;
  j.d[i] = 1.0;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v + b.v;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] + b.d[i];
    r.dd[i] = a.dd[i] + b.dd[i];
  }
  return r;
}

Jet operator*(double s, const Jet& a) {
  Jet r;
  r.v = s * a.v;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = s * a.d[i];
    r.dd[i] = s * a.dd[i];
  }
  return r;
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-1.0) * b; }

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    r.dd[i] = a.dd[i] * b.v + 2.0 * a.d[i] * b.d[i] + a.v * b.dd[i];
  }
  return r;
}

Jet sin(const Jet& a) {
  Jet r;
  const double s = std::sin(a.v), c = std::cos(a.v);
  r.v = s;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = c * a.d[i];
    r.dd[i] = c * a.dd[i] - s * a.d[i] * a.d[i];
  }
  return r;
}

Jet cos(const Jet& a) {
  Jet r;
  const double s = std::sin(a.v), c = std::cos(a.v);
  r.v = c;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = -s * a.d[i];
    r.dd[i] = -s * a.dd[i] - c * a.d[i] * a.d[i];
  }
  return r;
}

double box(const Jet& u, const Vec3& w) { return u.dd[0] - w[0] * u.dd[1] - w[1] * u.dd[2] - w[2] * u.dd[3]; }

}  // namespace

double vectorfield_residual(VectorField gamma, Wave a, const Vec3& xi0, const WaveSpeeds& speeds, int n_points,
                            double extent, std::uint64_t seed) {
  if (n_points < 1) throw UsageError("vectorfield_residual: n_points must be positive");
  const Vec3 w = a == Wave::first ? Vec3{1.0, 1.0, 1.0} : speeds.weights();
  const double omega = lambda(a, xi0, speeds);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  double worst = 0.0;
  for (int p = 0; p < n_points; ++p) {
    const Jet t = variable(0, u(rng));
    const std::array<Jet, 3> x{variable(1, u(rng)), variable(2, u(rng)), variable(3, u(rng))};
    const Jet theta = xi0[0] * x[0] + xi0[1] * x[1] + xi0[2] * x[2] - omega * t;
    // Gamma applied to the linear phase, then Gamma cos(theta) = -(Gamma theta) sin(theta)
    Jet gtheta;
    switch (gamma) {
      case VectorField::S:
        gtheta = theta;
        break;
      case VectorField::L1:
        gtheta = (-omega) * x[0] + xi0[0] * t;
        break;
      case VectorField::Omega12:
        gtheta = xi0[1] * x[0] - xi0[0] * x[1];
        break;
      case VectorField::Omega13:
        gtheta = xi0[2] * x[0] - xi0[0] * x[2];
        break;
    }
    const Jet gu = (-1.0) * (gtheta * sin(theta));
    double r = box(gu, w);
    if (gamma == VectorField::S) r -= 2.0 * box(cos(theta), w);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace twave
