#include "twave/resonance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "twave/dyadic.hpp"
#include "twave/errors.hpp"
#include "twave/fit.hpp"
#include "twave/shells.hpp"

namespace twave {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void require_nonzero(const Vec3& xi, const Vec3& eta) {
  if (is_zero(eta)) throw DomainError("l functional: eta = 0");
  const Vec3 p = xi - eta;
  if (is_zero(p)) throw DomainError("l functional: xi - eta = 0");
  if (eta[0] == 0.0) throw DomainError("l functional: eta1 = 0");
  if (p[0] == 0.0) throw DomainError("l functional: xi1 - eta1 = 0");
}

}  // namespace

double l_functional(SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds) {
  require_nonzero(xi, eta);
  const Vec3 p = xi - eta;
  const double mu = value(s.mu), nu = value(s.nu), mn = s.product();
  const double t1 = (eta[1] * eta[1] + eta[2] * eta[2]) / dot(eta, eta);
  const double t2 = std::abs(mu * sgn(p[0]) - nu * sgn(eta[0]));
  const double t3 = (p[1] * p[1] + p[2] * p[2]) / dot(p, p);
  const Vec3 w = speeds.weights();
  const double d2 = p[1] / std::abs(p[0]) - mn * w[1] * eta[1] / std::abs(eta[0]);
  const double d3 = p[2] / std::abs(p[0]) - mn * w[2] * eta[2] / std::abs(eta[0]);
  return t1 + t2 + t3 + std::hypot(d2, d3);
}

Vec3 grad_eta_phase(Wave, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds) {
  const Vec3 p = xi - eta;
  if (is_zero(p)) throw DomainError("phase gradient: xi - eta = 0");
  if (is_zero(eta)) throw DomainError("phase gradient: eta = 0");
  return (value(s.mu) / norm(p)) * p - value(s.nu) * group_velocity(Wave::second, eta, speeds);
}

LowerBoundReport lower_bound_check(Wave a, SignPair s, const WaveSpeeds& speeds, int k, int k1, int k2,
                                   int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw UsageError("lower bound check: n_samples must be positive");
  std::mt19937_64 rng(seed);
  LowerBoundReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  const long long max_attempts = 1000LL * n_samples;
  for (long long attempt = 0; attempt < max_attempts && rep.samples < n_samples; ++attempt) {
    const Vec3 xi = uniform_in_shell(rng, k);
    const Vec3 eta = uniform_in_shell(rng, k2);
    const Vec3 p = xi - eta;
    if (!in_shell(norm(p), k1) || eta[0] == 0.0 || p[0] == 0.0) continue;
    const double l = l_functional(s, xi, eta, speeds);
    if (l == 0.0) continue;
    ++rep.samples;
    const double ratio = norm(grad_eta_phase(a, s, xi, eta, speeds)) / std::min(l, 1.0);
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.worst_xi = xi;
      rep.worst_eta = eta;
    }
  }
  if (rep.samples == 0) rep.min_ratio = 0.0;
  return rep;
}

// ==== Resonant points ====

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;

Vec3 head(const Vec6& z) { return {z[0], z[1], z[2]}; }
Vec3 tail(const Vec6& z) { return {z[3], z[4], z[5]}; }

bool degenerate(const Vec6& z, double scale) {
  const Vec3 xi = head(z), eta = tail(z);
  return norm(eta) < 1e-6 * scale || norm(xi - eta) < 1e-6 * scale || norm(xi) < 1e-6 * scale;
}

Vec4 residual(Wave a, SignPair s, const Vec6& z, const WaveSpeeds& sp) {
  const Vec3 xi = head(z), eta = tail(z);
  const Vec3 g = grad_eta_phase(a, s, xi, eta, sp);
  Vec4 r;
  r << phase(a, s, xi, eta, sp), g[0], g[1], g[2];
  return r;
}

Eigen::Matrix<double, 4, 6> jacobian(Wave a, SignPair s, const Vec6& z, const WaveSpeeds& sp, double h) {
  Eigen::Matrix<double, 4, 6> J;
  for (int c = 0; c < 6; ++c) {
    Vec6 zp = z, zm = z;
    zp[c] += h;
    zm[c] -= h;
    J.col(c) = (residual(a, s, zp, sp) - residual(a, s, zm, sp)) / (2 * h);
  }
  return J;
}

ResonancePoint make_point(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& sp) {
  ResonancePoint pt;
  pt.xi = xi;
  pt.eta = eta;
  pt.a = a;
  pt.signs = s;
  pt.phase_value = phase(a, s, xi, eta, sp);
  pt.grad_eta_phase_norm = norm(grad_eta_phase(a, s, xi, eta, sp));
  const double tr = std::max({std::abs(xi[1]), std::abs(xi[2]), std::abs(eta[1]), std::abs(eta[2])});
  pt.transverse_ratio = tr / norm(xi);
  return pt;
}

}  // namespace

bool accept_point(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds,
                  const ResonanceOptions& opts, ResonancePoint* out) {
  const ResonancePoint pt = make_point(a, s, xi, eta, speeds);
  if (out) *out = pt;
  return std::abs(pt.phase_value) <= opts.tol_phase && pt.grad_eta_phase_norm <= opts.tol_grad;
}

std::vector<ResonancePoint> resonance_sample(Wave a, SignPair s, const WaveSpeeds& speeds, int k, int k1, int k2,
                                             int n_samples, const ResonanceOptions& opts) {
  if (!(opts.tol_phase > 0.0) || !(opts.tol_grad > 0.0)) throw UsageError("resonance sampler: tolerances must be positive");
  if (n_samples < 0) throw UsageError("resonance sampler: n_samples must be nonnegative");
  std::mt19937_64 rng(opts.seed);
  std::vector<ResonancePoint> out;
  const double scale = std::ldexp(1.0, k);
  const double step = std::ldexp(1.0, k - 7);
  const double h = 1e-7 * scale;

  int drawn = 0;
  for (long long attempt = 0; drawn < n_samples && attempt < 1000LL * std::max(n_samples, 1); ++attempt) {
    const Vec3 xi0 = uniform_in_shell(rng, k);
    const Vec3 eta0 = uniform_in_shell(rng, k2);
    if (!in_shell(norm(xi0 - eta0), k1)) continue;
    ++drawn;
    Vec6 z;
    z << xi0[0], xi0[1], xi0[2], eta0[0], eta0[1], eta0[2];

    bool ok = true;
    // descent on Phi^2 + |grad_eta Phi|^2
    for (int it = 0; it < opts.descent_steps && ok; ++it) {
      if (degenerate(z, scale)) {
        ok = false;
        break;
      }
      const Vec4 r = residual(a, s, z, speeds);
      const Eigen::Matrix<double, 4, 6> J = jacobian(a, s, z, speeds, h);
      z -= step * 2.0 * J.transpose() * r;
    }
    // Levenberg-Marquardt polish
    double lambda_lm = 1e-3;
    for (int it = 0; it < opts.lm_iterations && ok; ++it) {
      if (degenerate(z, scale)) {
        ok = false;
        break;
      }
      const Vec4 r = residual(a, s, z, speeds);
      if (std::abs(r[0]) <= 0.01 * opts.tol_phase && r.tail<3>().norm() <= 0.01 * opts.tol_grad) break;
      const Eigen::Matrix<double, 4, 6> J = jacobian(a, s, z, speeds, h);
      const Eigen::Matrix<double, 6, 6> A = J.transpose() * J;
      const Vec6 g = J.transpose() * r;
      bool improved = false;
      for (int tries = 0; tries < 20; ++tries) {
        Eigen::Matrix<double, 6, 6> M = A;
        M.diagonal().array() += lambda_lm * (1.0 + A.diagonal().array());
        const Vec6 dz = M.ldlt().solve(-g);
        const Vec6 zn = z + dz;
        if (!degenerate(zn, scale) && residual(a, s, zn, speeds).squaredNorm() < r.squaredNorm()) {
          z = zn;
          lambda_lm = std::max(lambda_lm / 3.0, 1e-12);
          improved = true;
          break;
        }
        lambda_lm *= 4.0;
      }
      if (!improved) break;
    }
    if (!ok || degenerate(z, scale)) continue;
    ResonancePoint pt;
    if (accept_point(a, s, head(z), tail(z), speeds, opts, &pt)) out.push_back(pt);
  }
  return out;
}

// ==== Phase expansion ====

bool has_axis_resonance(SignPair s) { return !(s.mu == Sign::minus && s.nu == Sign::minus); }

double phase_leading(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds) {
  const Vec3 p = xi - eta;
  const double mn = s.product();
  const double r = std::abs(p[0]) / std::abs(eta[0]);
  const Vec3 w = speeds.weights();
  double total = 0.0;
  for (int i = 1; i <= 2; ++i) {
    const double base = (1.0 - w[i]) * eta[i] * eta[i] / (2.0 * std::abs(xi[0])) * (1.0 + mn * w[i] * r);
    total += a == Wave::first ? base : -mn * w[i] * r * base;
  }
  return total;
}

PhaseExpansionReport phase_expansion_check(Wave a, SignPair s, const WaveSpeeds& speeds, const std::vector<int>& m_list,
                                           double alpha, int samples_per_m, std::uint64_t seed) {
  if (!has_axis_resonance(s)) throw UsageError("phase expansion: (-, -) has no resonant axis configuration");
  if (samples_per_m < 1) throw UsageError("phase expansion: samples_per_m must be positive");
  if (m_list.empty()) throw UsageError("phase expansion: empty m list");

  PhaseExpansionReport rep;
  rep.a = a;
  rep.signs = s;
  rep.alpha = alpha;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mn = s.product();
  const bool same_sign = s.mu == Sign::plus && s.nu == Sign::plus;
  // ratio |p1| / |eta1| keeping |xi1| = mu |p1| + nu |eta1| on the axis
  double r_lo = 0.5, r_hi = 2.0;
  if (s.mu == Sign::plus && s.nu == Sign::minus) r_lo = 1.5, r_hi = 3.0;
  if (s.mu == Sign::minus && s.nu == Sign::plus) r_lo = 1.0 / 3.0, r_hi = 2.0 / 3.0;
  const Vec3 w = speeds.weights();

  for (int m : m_list) {
    PhaseExpansionLevel lev;
    lev.m = m;
    PhaseSample worst{m, {}, {}, 0.0};
    const double theta0 = std::exp2(-m / 4.0);
    const double lmax = std::exp2(-m / 2.0 + alpha * m);
    for (int n = 0; n < samples_per_m; ++n) {
      ++lev.attempted;
      const double e1 = 0.8 + 0.4 * u(rng);
      const double sg = u(rng) < 0.5 ? 1.0 : -1.0;
      const double r = r_lo + (r_hi - r_lo) * u(rng);
      const double eta1 = sg * e1;
      const double p1 = (same_sign ? sg : -sg) * r * e1;
      const double theta = theta0 * (1.0 / 16.0 + (3.0 / 16.0) * u(rng));
      const double ang = 2.0 * std::numbers::pi * u(rng);
      const double eta2 = theta * e1 * std::cos(ang), eta3 = theta * e1 * std::sin(ang);
      const double wn = 0.5 * lmax * u(rng);
      const double wang = 2.0 * std::numbers::pi * u(rng);
      const double p2 = mn * w[1] * r * eta2 + std::abs(p1) * wn * std::cos(wang);
      const double p3 = mn * w[2] * r * eta3 + std::abs(p1) * wn * std::sin(wang);
      const Vec3 eta{eta1, eta2, eta3};
      const Vec3 xi{p1 + eta1, p2 + eta2, p3 + eta3};
      if (l_functional(s, xi, eta, speeds) >= lmax) continue;
      ++lev.accepted;
      const double res = std::abs(phase(a, s, xi, eta, speeds) - phase_leading(a, s, xi, eta, speeds));
      if (res >= lev.max_residual) {
        lev.max_residual = res;
        worst = {m, xi, eta, res};
      }
    }
    lev.low_coverage = lev.accepted < lev.attempted / 2;
    rep.low_coverage = rep.low_coverage || lev.low_coverage;
    rep.levels.push_back(lev);
    rep.sample_residuals.push_back(worst);
  }

  std::vector<double> ms, logs;
  for (const auto& lev : rep.levels) {
    if (lev.accepted == 0 || lev.max_residual <= 0.0) continue;
    ms.push_back(lev.m);
    logs.push_back(std::log2(lev.max_residual));
  }
  if (ms.size() >= 2) rep.fitted_slope = fit_line(ms, logs).slope;
  return rep;
}

// ==== Volume ====

VolumeEstimate volume_support_estimate(int k, int k1, int k2, int l, SignPair s, const Vec3& xi,
                                       const WaveSpeeds& speeds, long long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw UsageError("volume estimate: n_samples must be positive");
  if (!in_shell(norm(xi), k)) throw UsageError("volume estimate: xi is not in shell k");
  VolumeEstimate est;
  est.k = k;
  est.k1 = k1;
  est.k2 = k2;
  est.l = l;
  est.signs = s;
  est.predicted = std::exp2(std::min(k1, k2) + 2.0 * std::max(k1, k2) + 1.5 * l);

  // sample whichever of eta, xi - eta lives on the smaller shell
  const bool sample_p = k1 < k2;
  const double R = shell_outer(sample_p ? k1 : k2);
  const double rho = std::min(1.0, std::exp2(0.5 * l)) * R;
  const double threshold = std::exp2(static_cast<double>(l));
  constexpr int strata = 16;
  const long long per = std::max<long long>(1, n_samples / strata);
  const double v_total = 2.0 * R * std::numbers::pi * rho * rho;
  const double v_stratum = v_total / strata;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double measure = 0.0, var = 0.0;
  for (int st = 0; st < strata; ++st) {
    long long hits = 0;
    for (long long n = 0; n < per; ++n) {
      const double rr = rho * std::sqrt((st + u(rng)) / strata);
      const double ang = 2.0 * std::numbers::pi * u(rng);
      const Vec3 v{R * (2.0 * u(rng) - 1.0), rr * std::cos(ang), rr * std::sin(ang)};
      const Vec3 eta = sample_p ? xi - v : v;
      const Vec3 p = xi - eta;
      if (!in_shell(norm(eta), k2) || !in_shell(norm(p), k1)) continue;
      if (eta[0] == 0.0 || p[0] == 0.0) continue;
      if (l_functional(s, xi, eta, speeds) <= threshold) ++hits;
    }
    const double frac = static_cast<double>(hits) / per;
    measure += v_stratum * frac;
    var += v_stratum * v_stratum * frac * (1.0 - frac) / per;
    est.hits += hits;
  }
  est.samples = per * strata;
  est.measure = measure;
  est.ci_halfwidth = 1.96 * std::sqrt(var);
  est.ratio = est.measure / est.predicted;
  return est;
}

// ==== Partitions ====

namespace {

// psi_{[a,b]}(x) = sum_{a<=j<=b} psi_j(|x|)
double psi_range(int a, int b, double x) { return psi_leq(b, std::abs(x)) - psi_leq(a - 1, std::abs(x)); }

}  // namespace

std::vector<double> partition_eval(PartitionKind which, SignPair s, const Vec3& xi, const Vec3& eta,
                                   const WaveSpeeds& speeds) {
  switch (which) {
    case PartitionKind::sign_partition: {
      const double p1 = xi[0] - eta[0];
      double first = 0.0;
      if (s.mu == Sign::plus && s.nu == Sign::plus) first = p1 * eta[0] >= 0.0 ? 1.0 : 0.0;
      else if (s.mu == Sign::plus) first = xi[0] * eta[0] < 0.0 ? 1.0 : 0.0;
      else if (s.nu == Sign::plus) first = p1 * xi[0] < 0.0 ? 1.0 : 0.0;
      return {first, 1.0 - first};
    }
    case PartitionKind::hh_partition: {
      if (is_zero(xi) || is_zero(eta)) throw DomainError("hh partition: xi or eta = 0");
      const double te = transverse_norm(eta);
      if (te == 0.0) throw DomainError("hh partition: transverse part of eta = 0");
      const double y = 1.0 + value(s.mu) * xi[0] * eta[0] / (norm(xi) * norm(eta));
      const double band = psi_range(-3 + speeds.c_low(), 3 + speeds.c_high(), transverse_norm(xi) / te);
      const double hi = 1.0 - psi_leq(-3, y);
      const double lo = psi_leq(-3, y);
      return {hi * band, lo * band, 1.0 - band};
    }
    case PartitionKind::lh_partition: {
      const Vec3 p = xi - eta;
      if (is_zero(p)) throw DomainError("lh partition: xi - eta = 0");
      if (is_zero(xi) || is_zero(eta)) throw DomainError("lh partition: xi or eta = 0");
      const Vec3 w = speeds.weights();
      const double den = norm(p) * std::hypot(w[1] * eta[1], w[2] * eta[2]);
      if (den == 0.0) throw DomainError("lh partition: transverse part of eta = 0");
      const double X = transverse_norm(p) * lambda(Wave::second, eta, speeds) / den;
      const double y = 1.0 - value(s.nu) * xi[0] * eta[0] / (norm(xi) * norm(eta));
      const double band = psi_range(-10, 10, X);
      return {psi_geq(-10, y) * band, psi_leq(-11, y) * band, 1.0 - band};
    }
  }
  throw UsageError("unknown partition kind");
}

}  // namespace twave
