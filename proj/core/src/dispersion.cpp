#include "twave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "twave/errors.hpp"
#include "twave/shells.hpp"
#include "fd_stencil.hpp"

namespace twave {

Wave wave_from_int(int a) {
  if (a == 1) return Wave::first;
  if (a == 2) return Wave::second;
  throw UsageError("branch must be 1 or 2, got " + std::to_string(a));
}

Sign sign_from_int(int s) {
  if (s == 1) return Sign::plus;
  if (s == -1) return Sign::minus;
  throw UsageError("sign must be +1 or -1, got " + std::to_string(s));
}

namespace {

int ceil_log2(double v) {
  // smallest k with 2^k >= v
  int k = static_cast<int>(std::ceil(std::log2(v)));
  while (std::ldexp(1.0, k) < v) ++k;
  while (std::ldexp(1.0, k - 1) >= v) --k;
  return k;
}

}  // namespace

WaveSpeeds WaveSpeeds::make(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !std::isfinite(c1) || !std::isfinite(c2))
    throw UsageError("wave speeds must be positive and finite");
  if (!((c1 - 1.0) * (c2 - 1.0) > 0.0))
    throw UsageError("wave speeds must both exceed 1 or both lie in (0, 1)");
  const int lo = std::min(ceil_log2(std::min(std::abs(1.0 - c1), std::abs(1.0 - c2))), 0);
  const int hi = std::max(ceil_log2(std::max(c1, c2)), 0);
  return WaveSpeeds(c1, c2, lo, hi);
}

NullFormSpec NullFormSpec::paper_null(const std::array<std::array<std::array<double, 2>, 2>, 2>& q) {
  NullFormSpec nf = custom(1.0, -1.0, q);
  nf.mode = Mode::paper_null;
  return nf;
}

NullFormSpec NullFormSpec::sign_flipped(const std::array<std::array<std::array<double, 2>, 2>, 2>& q) {
  NullFormSpec nf = custom(1.0, 1.0, q);
  nf.mode = Mode::sign_flipped;
  return nf;
}

NullFormSpec NullFormSpec::custom(double time_coeff, double x1_coeff,
                                  const std::array<std::array<std::array<double, 2>, 2>, 2>& q) {
  NullFormSpec nf;
  nf.mode = Mode::custom;
  nf.time_coeff = time_coeff;
  nf.x1_coeff = x1_coeff;
  nf.qij = q;
  bool finite = std::isfinite(time_coeff) && std::isfinite(x1_coeff);
  for (const auto& a : q)
    for (const auto& row : a)
      for (double v : row) finite = finite && std::isfinite(v);
  if (!finite) throw UsageError("null form: coefficients must be finite");
  return nf;
}

bool NullFormSpec::is_zero() const {
  if (time_coeff != 0.0 || x1_coeff != 0.0) return false;
  for (const auto& a : qij)
    for (const auto& row : a)
      for (double v : row)
        if (v != 0.0) return false;
  return true;
}

double lambda(Wave a, const Vec3& xi, const WaveSpeeds& speeds) {
  if (a == Wave::first) return norm(xi);
  const double t2 = speeds.c1() * xi[1];
  const double t3 = speeds.c2() * xi[2];
  return std::sqrt(xi[0] * xi[0] + t2 * t2 + t3 * t3);
}

Vec3 group_velocity(Wave a, const Vec3& xi, const WaveSpeeds& speeds) {
  if (is_zero(xi)) throw DomainError("group velocity: xi = 0");
  const double l = lambda(a, xi, speeds);
  if (a == Wave::first) return {xi[0] / l, xi[1] / l, xi[2] / l};
  const Vec3 w = speeds.weights();
  return {xi[0] / l, w[1] * xi[1] / l, w[2] * xi[2] / l};
}

double phase(Wave a, SignPair s, const Vec3& xi, const Vec3& eta, const WaveSpeeds& speeds) {
  return lambda(a, xi, speeds) - value(s.mu) * lambda(Wave::first, xi - eta, speeds) -
         value(s.nu) * lambda(Wave::second, eta, speeds);
}

std::complex<double> interaction_symbol(Wave a, SignPair s, const Vec3& p, const Vec3& eta,
                                        const WaveSpeeds& speeds, const NullFormSpec& nf) {
  if (is_zero(p)) throw DomainError("interaction symbol: xi - eta = 0");
  if (is_zero(eta)) throw DomainError("interaction symbol: eta = 0");
  // c_mu c_nu with c_mu = mu / (2i)
  const double cc = -0.25 * s.product();
  const double denom = lambda(Wave::first, p, speeds) * lambda(Wave::second, eta, speeds);
  double transverse = 0.0;
  for (int i = 2; i <= 3; ++i)
    for (int j = 2; j <= 3; ++j) transverse += nf.q(a, i, j) * p[i - 1] * eta[j - 1];
  const double val = 0.25 * nf.time_coeff - nf.x1_coeff * cc * p[0] * eta[0] / denom - cc * transverse / denom;
  return {val, 0.0};
}

SpectralField half_wave_decompose(const SpectralField& u, const SpectralField& ut, Wave a,
                                  const WaveSpeeds& speeds) {
  if (u.grid != ut.grid) throw UsageError("half wave: u and ut live on different grids");
  SpectralField U(u.grid);
  u.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    const double l = lambda(a, u.grid.xi(i, j, k), speeds);
    U[idx] = ut[idx] - cplx{0.0, l} * u[idx];
  });
  return U;
}

WavePair half_wave_reconstruct(const SpectralField& U, Wave a, const WaveSpeeds& speeds) {
  double scale = 0.0;
  for (const auto& c : U.coeffs) scale = std::max(scale, std::abs(c));
  if (std::abs(U[0]) > 1e-14 * scale)
    throw DomainError("half wave reconstruction: zero-frequency mode of U is nonzero (Lambda^{-1} is singular at xi = 0)");

  WavePair out{SpectralField(U.grid), SpectralField(U.grid)};
  const cplx two_i{0.0, 2.0};
  U.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    if (idx == 0) return;
    const cplx conj_mirror = std::conj(U[U.grid.mirror(i, j, k)]);
    // dt u = Re U, Lambda u = -Im U
    out.ut[idx] = 0.5 * (U[idx] + conj_mirror);
    const double l = lambda(a, U.grid.xi(i, j, k), speeds);
    out.u[idx] = -(U[idx] - conj_mirror) / (two_i * l);
  });
  return out;
}

SymbolBoundReport symbol_bound(const BilinearSymbol& m, int k, int k1, int k2, int sample_count,
                               const SymbolBoundOptions& opts) {
  if (sample_count < 1) throw UsageError("symbol bound: sample_count must be at least 1");
  if (opts.max_total_order < 0) throw UsageError("symbol bound: negative derivative order");

  const auto stencils = detail::stencils_up_to<6>(opts.max_total_order);
  const double h = opts.relative_step * std::ldexp(1.0, std::min(k1, k2));
  std::mt19937_64 rng(opts.seed);

  SymbolBoundReport rep;
  const int max_attempts = 200 * sample_count;
  for (int attempt = 0; attempt < max_attempts && rep.accepted_samples < sample_count; ++attempt) {
    const Vec3 eta = uniform_in_shell(rng, k2);
    const Vec3 p = uniform_in_shell(rng, k1);
    const Vec3 xi = p + eta;
    if (!in_shell(norm(xi), k)) continue;
    ++rep.accepted_samples;
    // derivatives in (xi, eta) of m(xi - eta, eta)
    for (const auto& st : stencils) {
      std::complex<double> acc{0.0, 0.0};
      for (const auto& [off, w] : st.taps) {
        const Vec3 x{xi[0] + off[0] * h, xi[1] + off[1] * h, xi[2] + off[2] * h};
        const Vec3 e{eta[0] + off[3] * h, eta[1] + off[4] * h, eta[2] + off[5] * h};
        acc += w * m(x - e, e);
      }
      const int op = st.order[0] + st.order[1] + st.order[2];
      const int oe = st.order[3] + st.order[4] + st.order[5];
      const double scaled = std::abs(acc) / std::pow(h, op + oe) * std::ldexp(1.0, op * k1 + oe * k2);
      if (op + oe == 0) rep.order0 = std::max(rep.order0, scaled);
      if (scaled > rep.bound) {
        rep.bound = scaled;
        rep.worst_order_p = op;
        rep.worst_order_eta = oe;
      }
    }
  }
  rep.empty = rep.accepted_samples == 0;
  rep.exceeds_limit = rep.bound > opts.limit;
  return rep;
}

SymbolBoundReport validate_nullform(const NullFormSpec& nf, const WaveSpeeds& speeds, int k, int k1, int k2,
                                    int sample_count, const SymbolBoundOptions& opts) {
  SymbolBoundReport worst;
  bool first = true;
  for (Wave a : {Wave::first, Wave::second})
    for (SignPair s : {SignPair{Sign::plus, Sign::plus}, SignPair{Sign::plus, Sign::minus}}) {
      auto sym = [&](const Vec3& p, const Vec3& eta) { return interaction_symbol(a, s, p, eta, speeds, nf); };
      auto rep = symbol_bound(sym, k, k1, k2, sample_count, opts);
      if (first || rep.bound > worst.bound) {
        const double o0 = std::max(worst.order0, rep.order0);
        worst = rep;
        worst.order0 = o0;
      } else {
        worst.order0 = std::max(worst.order0, rep.order0);
      }
      first = false;
    }
  return worst;
}

}  // namespace twave
