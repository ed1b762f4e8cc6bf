#include "twave/nonlinear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "twave/data.hpp"
#include "twave/dyadic.hpp"
#include "twave/errors.hpp"
#include "twave/fft.hpp"
#include "twave/fit.hpp"
#include "twave/propagator.hpp"

namespace twave {

// ==== Config ====

double SimConfig::effective_dt() const {
  if (dt > 0.0) return dt;
  double h = 1e300;
  for (int ax = 0; ax < 3; ++ax)
    if (grid.dims()[ax] > 1) h = std::min(h, grid.spacing(ax));
  return 0.1 * h;
}

void SimConfig::validate() const {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw UsageError("config: dt must be nonnegative");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw UsageError("config: t_final must be nonnegative");
  if (!(dealias > 0.0 && dealias <= 1.0)) throw UsageError("config: dealias must lie in (0, 1]");
  if (sobolev_order < 2) throw UsageError("config: sobolev_order must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("config: alpha must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("config: delta must lie in (0, 1)");
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) throw UsageError("config: eps0 must be nonnegative");
  if (!(sigma > 0.0)) throw UsageError("config: sigma must be positive");
  if (!(frame_interval > 0.0)) throw UsageError("config: frame_interval must be positive");
  if (checkpoint_levels < 0 || checkpoint_levels > 30) throw UsageError("config: checkpoint_levels out of range");
  if (max_halvings < 0) throw UsageError("config: max_halvings must be nonnegative");
  if (grid.dims()[0] < 2) throw UsageError("config: the x1 axis must not be degenerate");
}

// ==== Solver ====

ProfileSolver::ProfileSolver(const SimConfig& config) : config_(config) {
  config_.validate();
  const Grid& g = config_.grid;
  lambda1_.resize(g.size());
  lambda2_.resize(g.size());
  mask_.resize(g.size());
  std::array<double, 3> nyq{};
  for (int ax = 0; ax < 3; ++ax) nyq[ax] = std::numbers::pi / g.spacing(ax);
  g.for_each([&](int i, int j, int k, std::size_t idx) {
    const Vec3 xi = g.xi(i, j, k);
    lambda1_[idx] = lambda(Wave::first, xi, config_.speeds);
    lambda2_[idx] = lambda(Wave::second, xi, config_.speeds);
    double r2 = 0.0;
    for (int ax = 0; ax < 3; ++ax)
      if (g.dims()[ax] > 1) r2 += (xi[ax] / nyq[ax]) * (xi[ax] / nyq[ax]);
    const bool nyquist = g.is_nyquist(0, i) || g.is_nyquist(1, j) || g.is_nyquist(2, k);
    mask_[idx] = !nyquist && (config_.dealias >= 1.0 || std::sqrt(r2) <= config_.dealias);
  });
  zero_nonlinearity_ = config_.nf.is_zero();
}

SpectralField ProfileSolver::apply_mask(SpectralField f) const {
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    if (!mask_[i]) f[i] = 0.0;
  return f;
}

SpectralField ProfileSolver::half_wave(const SpectralField& h, Wave a, double t) const {
  const auto& lam = a == Wave::first ? lambda1_ : lambda2_;
  SpectralField U(h.grid);
  for (std::size_t i = 0; i < lam.size(); ++i) U[i] = h[i] * std::polar(1.0, -t * lam[i]);
  return U;
}

namespace {

std::vector<cplx> inverse(const Grid& g, std::vector<cplx> buf) {
  fft::backward(g.dims(), buf);
  const double s = 1.0 / g.volume();
  for (auto& v : buf) v *= s;
  return buf;
}

}  // namespace

WaveDerivatives ProfileSolver::derivatives(const SpectralField& U, Wave a) const {
  const Grid& g = grid();
  const auto& lam = a == Wave::first ? lambda1_ : lambda2_;
  WaveDerivatives d;
  {
    const auto phys = inverse(g, U.coeffs);
    d.ut.resize(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) d.ut[i] = phys[i].real();
  }
  for (int ax = 0; ax < 3; ++ax) {
    if (g.dims()[ax] == 1) continue;
    // d_i u = -Im F^{-1}[i xi_i / Lambda * U]
    std::vector<cplx> buf(g.size());
    g.for_each([&](int i, int j, int k, std::size_t idx) {
      const int along = ax == 0 ? i : (ax == 1 ? j : k);
      if (lam[idx] == 0.0 || g.is_nyquist(ax, along)) return;
      buf[idx] = cplx{0.0, g.wavenumber(ax, along) / lam[idx]} * U[idx];
    });
    const auto phys = inverse(g, std::move(buf));
    d.dx[ax].resize(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) d.dx[ax][i] = -phys[i].imag();
  }
  return d;
}

std::pair<SpectralField, SpectralField> ProfileSolver::rhs(const ProfileState& s) const {
  const Grid& g = grid();
  if (s.h1.grid != g || s.h2.grid != g) throw UsageError("rhs: state grid does not match the config");
  SpectralField out1(g), out2(g);
  if (zero_nonlinearity_) return {out1, out2};

  const WaveDerivatives d1 = derivatives(half_wave(s.h1, Wave::first, s.t), Wave::first);
  const WaveDerivatives d2 = derivatives(half_wave(s.h2, Wave::second, s.t), Wave::second);
  const NullFormSpec& nf = config_.nf;
  const std::size_t n = g.size();

  for (int a = 1; a <= 2; ++a) {
    const Wave w = a == 1 ? Wave::first : Wave::second;
    std::vector<cplx> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = nf.time_coeff * d1.ut[i] * d2.ut[i];
    if (nf.x1_coeff != 0.0)
      for (std::size_t i = 0; i < n; ++i) prod[i] += nf.x1_coeff * d1.dx[0][i] * d2.dx[0][i];
    for (int p = 2; p <= 3; ++p)
      for (int q = 2; q <= 3; ++q) {
        const double c = nf.q(w, p, q);
        if (c == 0.0 || d1.dx[p - 1].empty() || d2.dx[q - 1].empty()) continue;
        for (std::size_t i = 0; i < n; ++i) prod[i] += c * d1.dx[p - 1][i] * d2.dx[q - 1][i];
      }
    fft::forward(g.dims(), prod);
    const double dv = g.cell_volume();
    const auto& lam = a == 1 ? lambda1_ : lambda2_;
    SpectralField& out = a == 1 ? out1 : out2;
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask_[i] || lam[i] == 0.0) continue;
      out[i] = prod[i] * dv * std::polar(1.0, s.t * lam[i]);
    }
    for (const auto& c : out.coeffs)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InstabilityError("non-finite nonlinearity", s.t);
  }
  return {out1, out2};
}

ProfileState ProfileSolver::step(const ProfileState& s, double dt) const {
  auto axpy = [](const ProfileState& base, double c, const std::pair<SpectralField, SpectralField>& k, double t) {
    ProfileState r{base.h1, base.h2, t};
    for (std::size_t i = 0; i < r.h1.coeffs.size(); ++i) {
      r.h1[i] += c * k.first[i];
      r.h2[i] += c * k.second[i];
    }
    return r;
  };
  const auto k1 = rhs(s);
  const auto k2 = rhs(axpy(s, dt / 2, k1, s.t + dt / 2));
  const auto k3 = rhs(axpy(s, dt / 2, k2, s.t + dt / 2));
  const auto k4 = rhs(axpy(s, dt, k3, s.t + dt));
  ProfileState r{s.h1, s.h2, s.t + dt};
  for (std::size_t i = 0; i < r.h1.coeffs.size(); ++i) {
    r.h1[i] += dt / 6 * (k1.first[i] + 2.0 * k2.first[i] + 2.0 * k3.first[i] + k4.first[i]);
    r.h2[i] += dt / 6 * (k1.second[i] + 2.0 * k2.second[i] + 2.0 * k3.second[i] + k4.second[i]);
    if (!std::isfinite(std::abs(r.h1[i])) || !std::isfinite(std::abs(r.h2[i])))
      throw InstabilityError("non-finite profile after step", s.t + dt);
  }
  return r;
}

double ProfileSolver::gradient_sup(const ProfileState& s) const {
  double m = 0.0;
  for (Wave a : {Wave::first, Wave::second}) {
    const WaveDerivatives d = derivatives(half_wave(a == Wave::first ? s.h1 : s.h2, a, s.t), a);
    for (double v : d.ut) m = std::max(m, std::abs(v));
    for (const auto& comp : d.dx)
      for (double v : comp) m = std::max(m, std::abs(v));
  }
  return m;
}

std::pair<SpectralField, SpectralField> rhs_profile(const ProfileState& s, const SimConfig& config) {
  return ProfileSolver(config).rhs(s);
}

ProfileState step(const ProfileState& s, double dt, const SimConfig& config) { return ProfileSolver(config).step(s, dt); }

// ==== Data ====

double data_norm(const SpectralField& U, int sobolev_order, double alpha) {
  const PhysicalField phys = to_physical(U);
  double weighted = 0.0;
  phys.grid.for_each([&](int i, int j, int k, std::size_t idx) {
    const Vec3 x = phys.grid.x(i, j, k);
    weighted += std::pow(1.0 + dot(x, x), 1.0 + alpha) * std::norm(phys.values[idx]);
  });
  weighted = std::sqrt(weighted * phys.grid.cell_volume());
  return sobolev_norm(U, sobolev_order) + weighted + linf_xi_norm(U, 8);
}

ProfileState initial_state(const SimConfig& config) {
  const ProfileSolver solver(config);
  const Grid& g = config.grid;
  ProfileState s{SpectralField(g), SpectralField(g), 0.0};
  if (config.eps0 == 0.0) return s;

  auto assemble = [&](const SpectralField& f, const SpectralField& gt, Wave a) {
    SpectralField U = half_wave_decompose(f, gt, a, config.speeds);
    U[0] = 0.0;
    return solver.apply_mask(std::move(U));
  };

  for (Wave a : {Wave::first, Wave::second}) {
    SpectralField f(g), gt(g);
    switch (config.family) {
      case DataFamily::gaussian:
        f = to_spectral(gaussian_bump(g, config.sigma, {}, config.xi0));
        break;
      case DataFamily::right_moving: {
        f = to_spectral(gaussian_bump(g, config.sigma, {}, config.xi0));
        g.for_each([&](int i, int, int, std::size_t idx) { gt[idx] = cplx{0.0, -g.wavenumber(0, i)} * f[idx]; });
        break;
      }
      case DataFamily::random: {
        const std::uint64_t base = config.seed * 4 + (a == Wave::first ? 0 : 2);
        f = random_envelope_field(g, base, 8);
        gt = random_envelope_field(g, base + 1, 8);
        break;
      }
    }
    (a == Wave::first ? s.h1 : s.h2) = assemble(f, gt, a);
  }

  double total = 0.0;
  if (config.normalization == DataNormalization::data_norms) {
    total = data_norm(s.h1, config.sobolev_order, config.alpha) + data_norm(s.h2, config.sobolev_order, config.alpha);
  } else {
    total = solver.gradient_sup(s);
  }
  if (total == 0.0) throw DataError("initial data vanish after masking; widen the data or refine the grid");
  const double scale = config.eps0 / total;
  s.h1 *= scale;
  s.h2 *= scale;
  return s;
}

// ==== Diagnostics and runs ====

DiagnosticsFrame diagnostics(const ProfileSolver& solver, const ProfileState& s) {
  const SimConfig& c = solver.config();
  DiagnosticsFrame f;
  f.t = s.t;
  f.energy_HN = sobolev_norm(s.h1, c.sobolev_order) + sobolev_norm(s.h2, c.sobolev_order);
  if (c.compute_z) {
    f.z1 = z_norm(s.h1, c.alpha);
    f.z2 = z_norm(s.h2, c.alpha);
  }
  f.linfxi1 = linf_xi_norm(s.h1, 8);
  f.linfxi2 = linf_xi_norm(s.h2, 8);
  f.linf_phys1 = sup_norm(to_physical(solver.half_wave(s.h1, Wave::first, s.t)));
  f.linf_phys2 = sup_norm(to_physical(solver.half_wave(s.h2, Wave::second, s.t)));
  const auto d = solver.rhs(s);
  f.dhdt_linfxi = std::max(linf_xi_norm(d.first, 8), linf_xi_norm(d.second, 8));
  return f;
}

namespace {

double weighted_difference(const ProfileState& a, const ProfileState& b) {
  return std::max(linf_xi_norm(a.h1 - b.h1, 8), linf_xi_norm(a.h2 - b.h2, 8));
}

}  // namespace

RunRecord simulate(const SimConfig& config, const std::optional<ProfileState>& start,
                   const std::function<void(const DiagnosticsFrame&)>& on_frame) {
  const ProfileSolver solver(config);
  RunRecord run;
  ProfileState s = start ? *start : initial_state(config);
  if (s.h1.grid != config.grid || s.h2.grid != config.grid) throw UsageError("simulate: start state grid mismatch");
  require_finite(s.h1, "initial profile 1");
  require_finite(s.h2, "initial profile 2");
  const ProfileState s0 = s;
  const double t0 = s.t, t_end = config.t_final;
  if (t_end < t0) throw UsageError("simulate: t_final precedes the start time");

  // event times: frames and dyadic checkpoints
  std::vector<double> frame_times, check_times;
  for (long long i = 0;; ++i) {
    const double t = t0 + i * config.frame_interval;
    if (t >= t_end - 1e-12 * std::max(1.0, t_end)) break;
    frame_times.push_back(t);
  }
  frame_times.push_back(t_end);
  for (int i = config.checkpoint_levels - 1; i >= 0; --i) {
    const double t = t_end * std::ldexp(1.0, -i);
    if (t > t0) check_times.push_back(t);
  }

  double dt = config.effective_dt();
  int halvings = 0;
  std::size_t next_frame = 0, next_check = 0;
  auto record = [&](const ProfileState& st) {
    const DiagnosticsFrame f = diagnostics(solver, st);
    run.frames.push_back(f);
    run.drift.push_back(weighted_difference(st, s0));
    run.gradient_sup.push_back(solver.gradient_sup(st));
    if (on_frame) on_frame(f);
  };

  try {
    while (true) {
      const double eps = 1e-12 * std::max(1.0, std::abs(s.t));
      while (next_frame < frame_times.size() && frame_times[next_frame] <= s.t + eps) {
        record(s);
        ++next_frame;
      }
      while (next_check < check_times.size() && check_times[next_check] <= s.t + eps) {
        run.checkpoints.push_back(s);
        ++next_check;
      }
      if (next_frame >= frame_times.size() && next_check >= check_times.size()) break;
      double target = t_end;
      if (next_frame < frame_times.size()) target = std::min(target, frame_times[next_frame]);
      if (next_check < check_times.size()) target = std::min(target, check_times[next_check]);
      const double h = std::min(dt, target - s.t);
      try {
        ProfileState n = solver.step(s, h);
        // land exactly on event times
        if (target - n.t < 1e-12 * std::max(1.0, target)) n.t = target;
        s = std::move(n);
        ++run.steps;
      } catch (const InstabilityError&) {
        if (halvings >= config.max_halvings) throw;
        ++halvings;
        dt /= 2;
      }
    }
  } catch (const InstabilityError& e) {
    run.aborted = true;
    run.abort_time = e.time();
    run.abort_reason = e.what();
  }
  run.final_state = s;
  run.dt = dt;
  return run;
}

ScatteringReport scattering_check(const RunRecord& run) {
  if (run.checkpoints.size() < 4) throw UsageError("scattering_check: need at least four dyadic checkpoints");
  ScatteringReport rep;
  std::vector<double> lt, ld;
  for (std::size_t i = 0; i + 1 < run.checkpoints.size(); ++i) {
    const auto& a = run.checkpoints[i];
    const auto& b = run.checkpoints[i + 1];
    const double v = weighted_difference(b, a);
    rep.checkpoints.push_back({a.t, b.t, v});
    if (v > 0.0 && a.t > 0.0) {
      lt.push_back(std::log2(a.t));
      ld.push_back(std::log2(v));
    }
  }
  rep.limit_profile = run.checkpoints.back();
  if (lt.size() >= 2) rep.fitted_decay = fit_line(lt, ld).slope;
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.checkpoints.size(); ++i)
    if (!(rep.checkpoints[i].value < rep.checkpoints[i - 1].value)) rep.strictly_decreasing = false;
  return rep;
}

RunRecord asymptotic_1d_solve(const SimConfig& config_1d, const std::optional<ProfileState>& start) {
  const auto& n = config_1d.grid.dims();
  if (n[1] != 1 || n[2] != 1) throw UsageError("asymptotic_1d_solve: grid must be (n, 1, 1)");
  return simulate(config_1d, start);
}

ReductionReport transverse_reduction_compare(const SimConfig& config_3d, const ProfileState& start_3d, double dt_1d) {
  const Grid& g3 = config_3d.grid;
  if (start_3d.h1.grid != g3 || start_3d.h2.grid != g3) throw UsageError("reduction: start state grid mismatch");
  const double area = g3.lengths()[1] * g3.lengths()[2];
  const Grid g1({g3.dims()[0], 1, 1}, {g3.lengths()[0], 1.0, 1.0});

  ProfileState s1{SpectralField(g1), SpectralField(g1), start_3d.t};
  double scale = 0.0;
  g3.for_each([&](int, int, int, std::size_t idx) {
    scale = std::max({scale, std::abs(start_3d.h1[idx]), std::abs(start_3d.h2[idx])});
  });
  g3.for_each([&](int i, int j, int k, std::size_t idx) {
    if (j == 0 && k == 0) {
      s1.h1[i] = start_3d.h1[idx] / area;
      s1.h2[i] = start_3d.h2[idx] / area;
    } else if (std::abs(start_3d.h1[idx]) > 1e-14 * scale || std::abs(start_3d.h2[idx]) > 1e-14 * scale) {
      throw UsageError("reduction: 3D data depend on the transverse variables");
    }
  });

  SimConfig c1 = config_3d;
  c1.grid = g1;
  c1.dt = dt_1d > 0.0 ? dt_1d : config_3d.effective_dt();
  SimConfig c3 = config_3d;
  c3.dt = config_3d.effective_dt();
  c1.compute_z = c3.compute_z = false;

  const ProfileSolver p3(c3), p1(c1);
  ReductionReport rep;
  ProfileState a = start_3d, b = s1;
  auto compare = [&]() {
    double diff = 0.0, ref = 0.0;
    for (int i = 0; i < g3.dims()[0]; ++i) {
      const std::size_t idx = g3.flat(i, 0, 0);
      diff = std::max({diff, std::abs(a.h1[idx] / area - b.h1[i]), std::abs(a.h2[idx] / area - b.h2[i])});
      ref = std::max({ref, std::abs(b.h1[i]), std::abs(b.h2[i])});
    }
    rep.times.push_back(a.t);
    rep.deviation.push_back(ref > 0.0 ? diff / ref : diff);
    rep.max_deviation = std::max(rep.max_deviation, rep.deviation.back());
  };
  compare();
  const double t_end = config_3d.t_final;
  for (long long i = 1;; ++i) {
    const double target = std::min(start_3d.t + i * config_3d.frame_interval, t_end);
    while (a.t < target - 1e-12 * std::max(1.0, target)) a = p3.step(a, std::min(c3.dt, target - a.t));
    while (b.t < target - 1e-12 * std::max(1.0, target)) b = p1.step(b, std::min(c1.dt, target - b.t));
    a.t = b.t = target;
    compare();
    if (target >= t_end) break;
  }
  return rep;
}

BlowupReport blowup_probe(const SimConfig& config) {
  SimConfig cn = config, cf = config;
  cn.nf = NullFormSpec::paper_null();
  cf.nf = NullFormSpec::sign_flipped();
  cn.compute_z = cf.compute_z = false;
  const ProfileState start = initial_state(cn);
  const RunRecord rn = simulate(cn, start);
  const RunRecord rf = simulate(cf, start);

  BlowupReport rep;
  rep.flipped_aborted = rf.aborted;
  for (std::size_t i = 0; i < rn.frames.size(); ++i) {
    rep.times.push_back(rn.frames[i].t);
    rep.null_sup.push_back(rn.gradient_sup[i]);
    rep.flipped_sup.push_back(i < rf.gradient_sup.size() ? rf.gradient_sup[i] : std::nan(""));
  }
  const double base = rep.null_sup.empty() ? 0.0 : rep.null_sup.front();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    if (base > 0.0) rep.null_growth = std::max(rep.null_growth, rep.null_sup[i] / base);
    if (!rep.exceed_time && i < rf.gradient_sup.size() && rep.flipped_sup[i] > 5.0 * rep.null_sup[i] &&
        rep.null_sup[i] > 0.0)
      rep.exceed_time = rep.times[i];
  }
  // a flipped run that aborted before any recorded excess still counts from its abort time
  if (!rep.exceed_time && rf.aborted && base > 0.0) rep.exceed_time = rf.abort_time;
  return rep;
}

// ==== Checkpoints ====

namespace {

constexpr char kMagic[4] = {'A', 'W', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  std::reverse(b, b + sizeof(T));
  std::memcpy(&v, b, sizeof(T));
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("checkpoint: truncated file");
  return to_little(v);
}

}  // namespace

void write_checkpoint(const std::string& path, const ProfileState& s, const WaveSpeeds& speeds) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  const Grid& g = s.h1.grid;
  for (int n : g.dims()) put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  for (double l : g.lengths()) put<double>(os, l);
  put<double>(os, speeds.c1());
  put<double>(os, speeds.c2());
  put<double>(os, s.t);
  for (const SpectralField* f : {&s.h1, &s.h2})
    for (const cplx& c : f->coeffs) {
      put<double>(os, c.real());
      put<double>(os, c.imag());
    }
  if (!os) throw DataError("checkpoint: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("checkpoint: cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw DataError("checkpoint: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw DataError("checkpoint: unsupported version");
  std::array<int, 3> n{};
  std::array<double, 3> len{};
  for (auto& v : n) {
    const auto u = get<std::uint32_t>(is);
    if (u == 0 || u > (1u << 16)) throw DataError("checkpoint: bad grid size");
    v = static_cast<int>(u);
  }
  for (auto& v : len) v = get<double>(is);
  Checkpoint c;
  c.c1 = get<double>(is);
  c.c2 = get<double>(is);
  const double t = get<double>(is);
  Grid g;
  try {
    g = Grid(n, len);
  } catch (const UsageError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  c.state = ProfileState{SpectralField(g), SpectralField(g), t};
  for (SpectralField* f : {&c.state.h1, &c.state.h2})
    for (cplx& v : f->coeffs) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      v = {re, im};
    }
  if (is.peek() != std::char_traits<char>::eof()) throw DataError("checkpoint: trailing bytes");
  return c;
}

}  // namespace twave
