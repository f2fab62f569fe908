#pragma once

#include <array>
#include <span>
#include <vector>

#include "qshyp/fft.hpp"
#include "qshyp/grid.hpp"

namespace qshyp {

using Point3 = std::array<double, 3>;

/// Spectral calculus on one Grid: transforms, exact derivatives, the
/// two-thirds dealiasing filter, Leray projection, trigonometric point
/// evaluation and grid quadrature.
///
/// Odd derivatives along an axis annihilate that axis' Nyquist mode (a real
/// field cannot carry i*(n/2) there); the Laplacian keeps it. The same
/// Nyquist-free wavevector is used by divergence and Leray projection, so
/// projected fields are discretely divergence free.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);

  const Grid& grid() const noexcept { return fft_.grid(); }

  Spectrum forward(const Real& f) const;
  Real inverse(const Spectrum& f) const;

  template <std::size_t C>
  SpectralComponents<C> forward(const Components<C>& f) const {
    SpectralComponents<C> r;
    for (std::size_t c = 0; c < C; ++c) r[c] = forward(f[c]);
    return r;
  }

  template <std::size_t C>
  Components<C> inverse(const SpectralComponents<C>& f) const {
    Components<C> r;
    for (std::size_t c = 0; c < C; ++c) r[c] = inverse(f[c]);
    return r;
  }

  /// Wavevector used by first derivatives (Nyquist components zeroed).
  std::array<double, 3> derivative_wavevector(std::size_t idx) const noexcept;

  Spectrum derivative(const Spectrum& f, int axis) const;
  Spectrum laplacian(const Spectrum& f) const;
  /// Solves -Delta u = f for zero-mean u (the k = 0 mode of f is ignored).
  Spectrum inverse_negative_laplacian(const Spectrum& f) const;

  SpectralComponents<3> gradient(const Spectrum& f) const;
  Spectrum divergence(const SpectralComponents<3>& v) const;
  SpectralComponents<3> curl(const SpectralComponents<3>& v) const;

  /// Zeroes every mode with some |k_axis| > n/3.
  void dealias(Spectrum& f) const;
  template <std::size_t C>
  void dealias(SpectralComponents<C>& f) const {
    for (auto& c : f) dealias(c);
  }

  /// (I - k k^T/|k|^2) per mode; the k = 0 mode is kept.
  void leray_project(SpectralComponents<3>& v) const;

  /// max_k |k . v(k)| / max_k |v(k)| (0 for the zero field).
  double divergence_ratio(const SpectralComponents<3>& v) const;

  /// Direct trigonometric sum of the interpolant at arbitrary points
  /// (wrapped periodically). Nyquist modes contribute cos(n/2 x), which
  /// agrees with the grid values at the nodes.
  std::vector<double> evaluate_at_points(const Spectrum& f, std::span<const Point3> pts) const;
  /// Several fields at once; result[p][c].
  std::vector<std::vector<double>> evaluate_at_points(std::span<const Spectrum* const> fields,
                                                      std::span<const Point3> pts) const;

  /// Rectangle rule: sum f * (2 pi / n)^dims, pairwise summed.
  double integrate(const Real& f) const;

  /// Grid mean of f*g computed from the spectra (discrete Parseval).
  double mean_product(const Spectrum& f, const Spectrum& g) const;
  /// Grid mean of grad f . grad g from the spectra.
  double mean_gradient_product(const Spectrum& f, const Spectrum& g) const;

 private:
  Fft fft_;
};

/// Copies the modes shared by two grids of equal dims (truncation when
/// going down, zero padding when going up). Modes with |k_axis| >= min(n)/2
/// are dropped on both sides, which makes the down and up maps adjoint.
Spectrum transfer_modes(const Grid& from, const Spectrum& f, const Grid& to);

}  // namespace qshyp
