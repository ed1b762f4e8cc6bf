#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"
#include "twave/data.hpp"
#include "twave/dyadic.hpp"
#include "twave/errors.hpp"
#include "twave/nonlinear.hpp"

using namespace twave;

namespace {

using QTable = std::array<std::array<std::array<double, 2>, 2>, 2>;

QTable sample_q() {
  QTable q{};
  q[0][0][0] = 0.3;
  q[0][0][1] = -0.2;
  q[1][1][0] = 0.7;
  q[1][1][1] = 0.1;
  return q;
}

// complex profile without Hermitian symmetry, Nyquist planes empty
SpectralField complex_profile(const Grid& g, std::uint64_t seed) {
  SpectralField a = random_envelope_field(g, seed, 2);
  const SpectralField b = random_envelope_field(g, seed + 100, 2);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a[i] += cplx{0.0, 1.0} * b[i];
  return a;
}

std::size_t mirror_index(const Grid& g, int i, int j, int k) {
  const auto& n = g.dims();
  return g.flat((n[0] - i) % n[0], (n[1] - j) % n[1], (n[2] - k) % n[2]);
}

// d/dt h_a(xi) = e^{it L_a(xi)} V^{-1} sum_eta sum_{mu nu} q(xi - eta, eta) h1^mu h2^nu e^{-it(mu L1 + nu L2)}
std::pair<SpectralField, SpectralField> convolution_oracle(const SimConfig& c, const ProfileState& s) {
  const Grid& g = c.grid;
  const auto& n = g.dims();
  std::pair<SpectralField, SpectralField> out{SpectralField(g), SpectralField(g)};
  auto signed_value = [&](const SpectralField& h, int i, int j, int k, int mu) {
    return mu > 0 ? h[g.flat(i, j, k)] : std::conj(h[mirror_index(g, i, j, k)]);
  };
  for (Wave a : {Wave::first, Wave::second}) {
    SpectralField& dst = a == Wave::first ? out.first : out.second;
    g.for_each([&](int i, int j, int k, std::size_t idx) {
      if (idx == 0 || g.is_nyquist(0, i) || g.is_nyquist(1, j) || g.is_nyquist(2, k)) return;
      const Vec3 xi = g.xi(i, j, k);
      cplx acc = 0.0;
      g.for_each([&](int i2, int j2, int k2, std::size_t idx2) {
        const int pi = (i - i2 + n[0]) % n[0], pj = (j - j2 + n[1]) % n[1], pk = (k - k2 + n[2]) % n[2];
        if (idx2 == 0 || g.flat(pi, pj, pk) == 0) return;
        const Vec3 eta = g.xi(i2, j2, k2), p = g.xi(pi, pj, pk);
        for (Sign mu : {Sign::plus, Sign::minus})
          for (Sign nu : {Sign::plus, Sign::minus}) {
            const int m = mu == Sign::plus ? 1 : -1, v = nu == Sign::plus ? 1 : -1;
            const double ph = m * lambda(Wave::first, p, c.speeds) + v * lambda(Wave::second, eta, c.speeds);
            acc += interaction_symbol(a, {mu, nu}, p, eta, c.speeds, c.nf) * signed_value(s.h1, pi, pj, pk, m) *
                   signed_value(s.h2, i2, j2, k2, v) * std::polar(1.0, -s.t * ph);
          }
      });
      dst[idx] = acc * std::polar(1.0, s.t * lambda(a, xi, c.speeds)) / g.volume();
    });
  }
  return out;
}

double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

SimConfig small_config() {
  SimConfig c;
  c.grid = Grid::cube(16, 16.0);
  c.sigma = 2.0;
  c.compute_z = false;
  c.normalization = DataNormalization::amplitude;
  return c;
}

}  // namespace

TEST_CASE("rhs matches the direct convolution sum") {
  SimConfig c;
  c.grid = Grid({8, 8, 8}, {7.0, 9.0, 11.0});
  c.speeds = WaveSpeeds::make(2.0, 1.5);
  c.dealias = 1.0;
  for (const NullFormSpec& nf : {NullFormSpec::paper_null(sample_q()), NullFormSpec::sign_flipped(sample_q()),
                                 NullFormSpec::custom(0.4, 1.3, sample_q())}) {
    c.nf = nf;
    const ProfileSolver solver(c);
    const ProfileState s{complex_profile(c.grid, 3), complex_profile(c.grid, 4), 0.37};
    const auto got = solver.rhs(s);
    const auto want = convolution_oracle(c, s);
    const double scale = std::max(max_abs(want.first), max_abs(want.second));
    REQUIRE(scale > 0.0);
    CHECK(max_abs(got.first - want.first) < 1e-10 * scale);
    CHECK(max_abs(got.second - want.second) < 1e-10 * scale);
  }
}

TEST_CASE("rhs structure") {
  SimConfig c = small_config();
  const ProfileSolver solver(c);
  const Grid& g = c.grid;

  SUBCASE("zero state") {
    const auto r = solver.rhs({SpectralField(g), SpectralField(g), 0.5});
    CHECK(max_abs(r.first) == 0.0);
    CHECK(max_abs(r.second) == 0.0);
  }
  SUBCASE("one silent wave") {
    const auto r = solver.rhs({complex_profile(g, 5), SpectralField(g), 0.5});
    CHECK(max_abs(r.first) == 0.0);
    CHECK(max_abs(r.second) == 0.0);
  }
  SUBCASE("bilinear scaling") {
    ProfileState s{complex_profile(g, 5), complex_profile(g, 6), 0.25};
    const auto r1 = solver.rhs(s);
    s.h1 *= 3.0;
    s.h2 *= -2.0;
    const auto r2 = solver.rhs(s);
    CHECK(max_abs(r2.first + 6.0 * r1.first) < 1e-12 * max_abs(r1.first) * 6);
    CHECK(max_abs(r2.second + 6.0 * r1.second) < 1e-12 * max_abs(r1.second) * 6);
  }
  SUBCASE("output lies in the dealias mask and has no mean") {
    const auto r = solver.rhs({complex_profile(g, 7), complex_profile(g, 8), 0.0});
    CHECK(r.first[0] == cplx{0.0, 0.0});
    const auto masked = solver.apply_mask(r.first);
    CHECK(max_abs(masked - r.first) == 0.0);
  }
  SUBCASE("grid mismatch") {
    const Grid other = Grid::cube(8, 16.0);
    CHECK_THROWS_AS(solver.rhs({SpectralField(other), SpectralField(other), 0.0}), UsageError);
  }
}

TEST_CASE("real data stay real") {
  // real u_a means U_a^- carries no new information; check that u stays real by reconstruction
  SimConfig c = small_config();
  c.eps0 = 0.3;
  const ProfileSolver solver(c);
  ProfileState s = initial_state(c);
  for (int i = 0; i < 5; ++i) s = solver.step(s, 0.1);
  for (Wave a : {Wave::first, Wave::second}) {
    const SpectralField U = solver.half_wave(a == Wave::first ? s.h1 : s.h2, a, s.t);
    SpectralField Uz = U;
    Uz[0] = 0.0;
    const WavePair w = half_wave_reconstruct(Uz, a, c.speeds);
    double imag = 0.0, real = 0.0;
    for (const auto& v : to_physical(w.u).values) {
      imag = std::max(imag, std::abs(v.imag()));
      real = std::max(real, std::abs(v.real()));
    }
    CHECK(imag < 1e-12 * real);
  }
}

TEST_CASE("zero nonlinearity keeps the profile fixed") {
  SimConfig c = small_config();
  c.nf = NullFormSpec::custom(0.0, 0.0, {});
  c.eps0 = 0.5;
  c.t_final = 2.0;
  const ProfileState s0 = initial_state(c);
  const RunRecord r = simulate(c, s0);
  CHECK(max_abs(r.final_state.h1 - s0.h1) == 0.0);
  CHECK(max_abs(r.final_state.h2 - s0.h2) == 0.0);
  const ScatteringReport sc = scattering_check(r);
  for (const auto& d : sc.checkpoints) CHECK(d.value == 0.0);
}

TEST_CASE("fourth order in time") {
  SimConfig c = small_config();
  c.eps0 = 0.5;
  const ProfileSolver solver(c);
  const ProfileState s0 = initial_state(c);
  auto run = [&](double dt) {
    ProfileState s = s0;
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < n; ++i) s = solver.step(s, dt);
    return s;
  };
  const ProfileState a = run(0.2), b = run(0.1), d = run(0.05);
  const double e1 = max_abs(a.h1 - b.h1) + max_abs(a.h2 - b.h2);
  const double e2 = max_abs(b.h1 - d.h1) + max_abs(b.h2 - d.h2);
  // the profile must actually move, or the ratio is noise
  CHECK(max_abs(d.h1 - s0.h1) > 1e3 * e2);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("initial data") {
  SimConfig c = small_config();
  SUBCASE("zero amplitude") {
    c.eps0 = 0.0;
    c.compute_z = true;
    c.t_final = 1.0;
    const RunRecord r = simulate(c);
    REQUIRE_FALSE(r.frames.empty());
    for (const auto& f : r.frames) {
      CHECK(f.energy_HN == 0.0);
      CHECK(f.z1 == 0.0);
      CHECK(f.z2 == 0.0);
      CHECK(f.linfxi1 == 0.0);
      CHECK(f.linf_phys2 == 0.0);
      CHECK(f.dhdt_linfxi == 0.0);
    }
  }
  SUBCASE("amplitude normalization") {
    c.eps0 = 0.02;
    for (DataFamily fam : {DataFamily::gaussian, DataFamily::right_moving, DataFamily::random}) {
      c.family = fam;
      const ProfileState s = initial_state(c);
      CHECK(ProfileSolver(c).gradient_sup(s) == doctest::Approx(0.02).epsilon(1e-12));
    }
  }
  SUBCASE("norm normalization") {
    c.normalization = DataNormalization::data_norms;
    c.eps0 = 1e-3;
    const ProfileState s = initial_state(c);
    const double total = data_norm(s.h1, c.sobolev_order, c.alpha) + data_norm(s.h2, c.sobolev_order, c.alpha);
    CHECK(total == doctest::Approx(1e-3).epsilon(1e-12));
  }
  SUBCASE("deterministic random family") {
    c.family = DataFamily::random;
    const ProfileState a = initial_state(c), b = initial_state(c);
    CHECK(max_abs(a.h1 - b.h1) == 0.0);
    c.seed = 2;
    CHECK(max_abs(initial_state(c).h1 - a.h1) > 0.0);
  }
  SUBCASE("invalid configs") {
    c.dealias = 0.0;
    CHECK_THROWS_AS(initial_state(c), UsageError);
    c = small_config();
    c.eps0 = -1.0;
    CHECK_THROWS_AS(initial_state(c), UsageError);
    c = small_config();
    c.grid = Grid({1, 8, 8}, {1.0, 8.0, 8.0});
    CHECK_THROWS_AS(initial_state(c), UsageError);
  }
}

TEST_CASE("large data abort with a record") {
  SimConfig c = small_config();
  c.nf = NullFormSpec::sign_flipped();
  c.eps0 = 50.0;
  c.t_final = 20.0;
  c.max_halvings = 1;
  const RunRecord r = simulate(c);
  CHECK(r.aborted);
  CHECK(r.abort_time > 0.0);
  CHECK(r.abort_time < 20.0);
  CHECK_FALSE(r.abort_reason.empty());
  CHECK(r.dt == doctest::Approx(c.effective_dt() / 2));
}

TEST_CASE("run bookkeeping") {
  SimConfig c = small_config();
  c.eps0 = 0.05;
  c.t_final = 4.0;
  c.frame_interval = 0.5;
  c.checkpoint_levels = 3;
  std::vector<double> seen;
  const RunRecord r = simulate(c, std::nullopt, [&](const DiagnosticsFrame& f) { seen.push_back(f.t); });
  REQUIRE(r.frames.size() == 9);
  CHECK(seen.size() == 9);
  CHECK(r.frames.back().t == 4.0);
  REQUIRE(r.checkpoints.size() == 3);
  CHECK(r.checkpoints[0].t == doctest::Approx(1.0));
  CHECK(r.checkpoints[1].t == doctest::Approx(2.0));
  CHECK(r.checkpoints[2].t == 4.0);
  CHECK(r.drift.front() == 0.0);
  CHECK_THROWS_AS(scattering_check(r), UsageError);
}

TEST_CASE("drift is quadratic in the amplitude") {
  SimConfig c = small_config();
  c.t_final = 2.0;
  c.eps0 = 0.02;
  const RunRecord big = simulate(c);
  c.eps0 = 0.01;
  const RunRecord small = simulate(c);
  // data scale by 1/2, the bilinear correction by 1/4, so the relative drift halves
  const double rel_big = big.drift.back() / linf_xi_norm(big.final_state.h1, 8);
  const double rel_small = small.drift.back() / linf_xi_norm(small.final_state.h1, 8);
  CHECK(rel_big / rel_small >= 1.5);
  CHECK(rel_big / rel_small <= 2.5);
  const double factor = big.drift.back() / small.drift.back();
  CHECK(factor >= 3.0);
  CHECK(factor <= 5.0);
}

TEST_CASE("1D traveling waves see no null interaction") {
  SimConfig c;
  c.grid = Grid({128, 1, 1}, {64.0, 1.0, 1.0});
  c.family = DataFamily::right_moving;
  c.normalization = DataNormalization::amplitude;
  c.sigma = 2.0;
  c.eps0 = 0.1;
  c.t_final = 5.0;
  c.compute_z = false;
  const ProfileState s0 = initial_state(c);
  const RunRecord r = asymptotic_1d_solve(c, s0);
  // the null form cancels exactly for u_t = -u_x
  CHECK(max_abs(r.final_state.h1 - s0.h1) < 1e-14 * max_abs(s0.h1));
  c.nf = NullFormSpec::sign_flipped();
  const RunRecord f = asymptotic_1d_solve(c, s0);
  CHECK(max_abs(f.final_state.h1 - s0.h1) > 1e-3 * max_abs(s0.h1));

  c.grid = Grid::cube(8, 8.0);
  CHECK_THROWS_AS(asymptotic_1d_solve(c), UsageError);
}

TEST_CASE("transverse-independent data reduce to the 1D system") {
  SimConfig c1;
  c1.grid = Grid({64, 1, 1}, {64.0, 1.0, 1.0});
  c1.sigma = 3.0;
  c1.eps0 = 0.05;
  c1.normalization = DataNormalization::amplitude;
  c1.compute_z = false;
  const ProfileState s1 = initial_state(c1);

  SimConfig c3 = c1;
  c3.grid = Grid({64, 4, 4}, {64.0, 5.0, 7.0});
  c3.nf = NullFormSpec::paper_null(sample_q());
  c3.t_final = 10.0;
  const double area = 35.0;
  ProfileState s3{SpectralField(c3.grid), SpectralField(c3.grid), 0.0};
  for (int i = 0; i < 64; ++i) {
    s3.h1[c3.grid.flat(i, 0, 0)] = area * s1.h1[i];
    s3.h2[c3.grid.flat(i, 0, 0)] = area * s1.h2[i];
  }
  const ReductionReport rep = transverse_reduction_compare(c3, s3);
  REQUIRE(rep.times.size() == 11);
  CHECK(rep.times.back() == 10.0);
  CHECK(rep.max_deviation < 1e-8);

  SUBCASE("a different 1D step shows up") {
    const ReductionReport off = transverse_reduction_compare(c3, s3, c3.effective_dt() * 2);
    CHECK(off.max_deviation > 1e-10);
  }
  SUBCASE("transverse dependence is rejected") {
    s3.h1[c3.grid.flat(1, 1, 0)] = 1.0;
    CHECK_THROWS_AS(transverse_reduction_compare(c3, s3), UsageError);
  }
}

TEST_CASE("null versus sign-flipped probe") {
  SimConfig c;
  c.grid = Grid({256, 1, 1}, {64.0, 1.0, 1.0});
  c.family = DataFamily::right_moving;
  c.normalization = DataNormalization::amplitude;
  c.sigma = 2.0;
  c.eps0 = 0.05;
  c.t_final = 200.0;
  c.frame_interval = 5.0;
  const BlowupReport rep = blowup_probe(c);
  REQUIRE(rep.exceed_time.has_value());
  CHECK(*rep.exceed_time < 200.0);
  CHECK(rep.null_growth <= 2.0);
  CHECK(rep.null_sup.front() == doctest::Approx(0.05));
}

TEST_CASE("checkpoint files") {
  const auto dir = std::filesystem::temp_directory_path() / "twave_ckpt_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.ckpt").string();
  const Grid g({8, 4, 6}, {3.0, 5.0, 7.0});
  const ProfileState s{complex_profile(g, 11), complex_profile(g, 12), 1.25};
  const WaveSpeeds sp = WaveSpeeds::make(2.0, 3.0);
  write_checkpoint(path, s, sp);
  const Checkpoint back = read_checkpoint(path);
  CHECK(back.state.h1.grid == g);
  CHECK(back.state.t == 1.25);
  CHECK(back.c1 == 2.0);
  CHECK(back.c2 == 3.0);
  CHECK(max_abs(back.state.h1 - s.h1) == 0.0);
  CHECK(max_abs(back.state.h2 - s.h2) == 0.0);

  SUBCASE("truncated") {
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
    CHECK_THROWS_AS(read_checkpoint(path), DataError);
  }
  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(read_checkpoint(path), DataError);
  }
  SUBCASE("trailing bytes") {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    f.put('x');
    f.close();
    CHECK_THROWS_AS(read_checkpoint(path), DataError);
  }
  SUBCASE("missing") { CHECK_THROWS_AS(read_checkpoint((dir / "nope.ckpt").string()), DataError); }
  std::filesystem::remove_all(dir);
}
