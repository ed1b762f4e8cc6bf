#include "twave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twave/errors.hpp"
#include "twave/fft.hpp"

namespace twave {

Grid::Grid(std::array<int, 3> n, std::array<double, 3> length) : n_(n), length_(length) {
  size_ = 1;
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 1) throw UsageError("grid: every axis needs at least one point");
    if (!(length_[a] > 0.0) || !std::isfinite(length_[a])) throw UsageError("grid: box lengths must be positive");
    size_ *= static_cast<std::size_t>(n_[a]);
    k_[a].resize(n_[a]);
    x_[a].resize(n_[a]);
    const double dk = 2.0 * std::numbers::pi / length_[a];
    const double dx = length_[a] / n_[a];
    for (int i = 0; i < n_[a]; ++i) {
      const int m = (n_[a] == 1) ? 0 : (i < (n_[a] + 1) / 2 ? i : i - n_[a]);
      k_[a][i] = dk * m;
      x_[a][i] = dx * m;
    }
  }
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < 3; ++a)
    if (n_[a] > 1) v *= spacing(a);
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < 3; ++a)
    if (n_[a] > 1) v *= length_[a];
  return v;
}

double Grid::dual_cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < 3; ++a)
    if (n_[a] > 1) v *= 2.0 * std::numbers::pi / length_[a];
  return v;
}

double Grid::nyquist() const {
  double ny = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a)
    if (n_[a] > 1) ny = std::min(ny, std::numbers::pi * n_[a] / length_[a]);
  return ny;
}

double Grid::fundamental() const {
  double f = 0.0;
  for (int a = 0; a < 3; ++a)
    if (n_[a] > 1) f = std::max(f, 2.0 * std::numbers::pi / length_[a]);
  return f;
}

double Grid::max_radius() const {
  double r2 = 0.0;
  for (int a = 0; a < 3; ++a)
    if (n_[a] > 1) r2 += 0.25 * length_[a] * length_[a];
  return std::sqrt(r2);
}

std::size_t Grid::mirror(int i, int j, int k) const {
  auto neg = [](int idx, int n) { return idx == 0 ? 0 : n - idx; };
  return flat(neg(i, n_[0]), neg(j, n_[1]), neg(k, n_[2]));
}

SpectralField::SpectralField(const Grid& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) throw UsageError("spectral field: coefficient count does not match grid");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (grid != o.grid) throw UsageError("spectral field: grid mismatch");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (grid != o.grid) throw UsageError("spectral field: grid mismatch");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (auto& c : coeffs) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

SpectralField to_spectral(const PhysicalField& f) {
  SpectralField out(f.grid, f.values);
  fft::forward(f.grid.dims(), out.coeffs);
  const double dv = f.grid.cell_volume();
  for (auto& c : out.coeffs) c *= dv;
  return out;
}

PhysicalField to_physical(const SpectralField& f) {
  PhysicalField out(f.grid);
  out.values = f.coeffs;
  fft::backward(f.grid.dims(), out.values);
  const double inv = 1.0 / f.grid.volume();
  for (auto& v : out.values) v *= inv;
  return out;
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs) s += std::norm(c);
  return std::sqrt(s / f.grid.volume());
}

double l2_norm(const PhysicalField& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.grid.cell_volume());
}

double sup_norm(const PhysicalField& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

void require_finite(const SpectralField& f, const char* what) {
  for (const auto& c : f.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DataError(std::string(what) + ": non-finite coefficient");
}

}  // namespace twave
