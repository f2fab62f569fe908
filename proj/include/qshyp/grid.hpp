#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace qshyp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform periodic grid on the torus of period 2*pi per axis.
///
/// Physical layout: x fastest, then y, then z (index = i + n*(j + n*k)).
/// Node coordinates are 2*pi*i/n; the torus [-pi, pi] is the same set up to
/// the periodic identification. With dims == 2 the z axis is collapsed:
/// fields are constant in z but keep all vector and tensor components.
///
/// Spectral layout (real-to-complex, half spectrum along x): index =
/// ix + (n/2+1)*(iy + n*iz) with ix = kx in [0, n/2] and iy, iz mapped to
/// wavenumbers in (-n/2, n/2].
class Grid {
 public:
  Grid(int n, int dims);

  int n() const noexcept { return n_; }
  int dims() const noexcept { return dims_; }
  int nz() const noexcept { return dims_ == 3 ? n_ : 1; }
  int nx_half() const noexcept { return n_ / 2 + 1; }

  std::size_t points() const noexcept;
  std::size_t modes() const noexcept;

  /// Largest |k_axis| retained by the two-thirds rule.
  int dealias_cutoff() const noexcept { return n_ / 3; }

  /// Torus volume (2*pi)^dims and the quadrature weight (2*pi/n)^dims.
  double volume() const noexcept;
  double cell_volume() const noexcept;

  double coord(int i) const noexcept { return kTwoPi * i / n_; }

  /// Signed wavenumber for an FFT index along y or z.
  int wavenumber(int index) const noexcept { return index <= n_ / 2 ? index : index - n_; }

  std::size_t point_index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(k));
  }

  std::array<double, 3> point(std::size_t idx) const noexcept;

  /// Wavevector of a spectral index.
  std::array<int, 3> mode(std::size_t idx) const noexcept;

  /// Number of times a half-spectrum entry represents itself in the full
  /// spectrum (1 on the kx = 0 and kx = n/2 planes, 2 elsewhere).
  double hermitian_weight(std::size_t idx) const noexcept;

  /// Any |k_axis| == n/2 (the unpaired Nyquist modes).
  bool is_nyquist(const std::array<int, 3>& k) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
  int dims_;
};

using Real = std::vector<double>;
using Spectrum = std::vector<std::complex<double>>;

template <std::size_t C>
using Components = std::array<Real, C>;
template <std::size_t C>
using SpectralComponents = std::array<Spectrum, C>;

using ScalarField = Real;
using VectorField = Components<3>;
using TensorField = Components<5>;
/// Symmetric 3x3 matrix field in the order xx, yy, zz, xy, xz, yz.
using SymMatrixField = Components<6>;

template <std::size_t C>
Components<C> zero_components(const Grid& g) {
  Components<C> r;
  for (auto& c : r) c.assign(g.points(), 0.0);
  return r;
}

template <std::size_t C>
SpectralComponents<C> zero_spectra(const Grid& g) {
  SpectralComponents<C> r;
  for (auto& c : r) c.assign(g.modes(), {0.0, 0.0});
  return r;
}

/// Maps (i, j) of a symmetric matrix to its SymMatrixField slot.
int sym_slot(int i, int j) noexcept;

}  // namespace qshyp
