#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "twave/vec3.hpp"

namespace twave {

using cplx = std::complex<double>;

/// Periodic box [-L/2, L/2)^3 sampled with n points per axis, origin at index 0.
///
/// Flat storage is row-major (axis 0 slowest), which is the FFTW layout. Physical
/// coordinates use the minimal-image convention, so index i maps to i*dx for
/// i < n/2 and (i-n)*dx otherwise. Axes with n = 1 are degenerate (coordinate and
/// wavenumber both 0), which is how the 1D and 2D reductions are expressed.
class Grid {
 public:
  Grid() = default;
  Grid(std::array<int, 3> n, std::array<double, 3> length);
  static Grid cube(int n, double length) { return Grid({n, n, n}, {length, length, length}); }

  const std::array<int, 3>& dims() const { return n_; }
  const std::array<double, 3>& lengths() const { return length_; }
  std::size_t size() const { return size_; }

  double spacing(int axis) const { return length_[axis] / n_[axis]; }
  double cell_volume() const;
  double volume() const;
  /// Volume element of the discrete frequency lattice, prod 2*pi/L over non-degenerate axes.
  double dual_cell_volume() const;

  /// Signed wavenumber 2*pi*m/L along an axis; m in [-n/2, n/2).
  double wavenumber(int axis, int idx) const { return k_[axis][idx]; }
  bool is_nyquist(int axis, int idx) const { return n_[axis] % 2 == 0 && n_[axis] > 1 && idx == n_[axis] / 2; }
  double coordinate(int axis, int idx) const { return x_[axis][idx]; }

  /// Smallest Nyquist frequency over the non-degenerate axes.
  double nyquist() const;
  /// Largest fundamental frequency 2*pi/L over the non-degenerate axes.
  double fundamental() const;
  /// Largest |x| over the box (half diagonal).
  double max_radius() const;

  std::size_t flat(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k; }
  /// Index of the mode -xi for the mode at (i, j, k).
  std::size_t mirror(int i, int j, int k) const;

  Vec3 xi(int i, int j, int k) const { return {k_[0][i], k_[1][j], k_[2][k]}; }
  Vec3 x(int i, int j, int k) const { return {x_[0][i], x_[1][j], x_[2][k]}; }

  bool operator==(const Grid& o) const { return n_ == o.n_ && length_ == o.length_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

  /// Calls f(i, j, k, flat) over all points in storage order.
  template <class F>
  void for_each(F&& f) const {
    std::size_t idx = 0;
    for (int i = 0; i < n_[0]; ++i)
      for (int j = 0; j < n_[1]; ++j)
        for (int k = 0; k < n_[2]; ++k) f(i, j, k, idx++);
  }

 private:
  std::array<int, 3> n_{1, 1, 1};
  std::array<double, 3> length_{1.0, 1.0, 1.0};
  std::size_t size_ = 1;
  std::array<std::vector<double>, 3> k_;
  std::array<std::vector<double>, 3> x_;
};

/// Fourier coefficients on a periodic grid, normalized to approximate the
/// continuous transform: f_hat(xi) = sum_x f(x) e^{-i x.xi} dV.
struct SpectralField {
  Grid grid;
  std::vector<cplx> coeffs;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), cplx{0.0, 0.0}) {}
  SpectralField(const Grid& g, std::vector<cplx> c);

  cplx& operator[](std::size_t i) { return coeffs[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs[i]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);

/// Point values of a (generally complex) field on the grid.
struct PhysicalField {
  Grid grid;
  std::vector<cplx> values;

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g) : grid(g), values(g.size(), cplx{0.0, 0.0}) {}
};

SpectralField to_spectral(const PhysicalField& f);
PhysicalField to_physical(const SpectralField& f);

/// L2 norm in physical space, sqrt(sum |f|^2 dV), computed from the coefficients.
double l2_norm(const SpectralField& f);
double l2_norm(const PhysicalField& f);
double sup_norm(const PhysicalField& f);

/// Throws DataError if any coefficient is NaN or infinite.
void require_finite(const SpectralField& f, const char* what);

}  // namespace twave
