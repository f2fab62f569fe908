#pragma once

#include <cstdint>
#include <memory>

#include "qshyp/config.hpp"
#include "qshyp/dynamics.hpp"

namespace qshyp {

/// Taylor-Green preset (z-independent in 2D):
///   v = amp_v (sin x cos y, -cos x sin y, 0)            (times cos z in 3D)
///   Q = amp_q (B1 sin x + B3 cos y + B4 sin(x + y))      (+ amp_q B5 sin z in 3D)
///   P = amp_p (B2 cos x + B5 sin y)
SpectralState taylor_green_state(const Grid& grid, const PotentialParams& params, double amp_v, double amp_q,
                                 double amp_p);

/// Random trigonometric polynomials with |k_axis| <= band and spectral decay
/// (1 + |k|^2)^-1 for v and P, (1 + |k|^2)^-3/2 for Q. v is Leray projected,
/// no field has a mean, and each field is scaled to the requested RMS
/// amplitude (sqrt of the mean of the pointwise squared norm). The draws do
/// not depend on n, so grids that resolve the band see the same fields.
SpectralState random_bandlimited_state(const Grid& grid, const PotentialParams& params, double amp_v, double amp_q,
                                       double amp_p, int band, std::uint64_t seed);

/// Closed-form smooth trajectory U*(t) used with the forcing
/// f = dU*/dt - rhs(U*), so that U* solves the forced system exactly:
///   v* = amp_v cos t (sin y, sin x, 0)
///   Q* = amp_q (B1 cos(x - t) + B3 cos x sin(y + t))
///   P* = amp_p (B2 sin(x + t) + B4 cos y cos 2t)
class ManufacturedSolution {
 public:
  ManufacturedSolution(const Grid& grid, const PotentialParams& params, double amp_v, double amp_q, double amp_p,
                       DynamicsOptions options = {});

  SpectralState exact(double t) const;
  SpectralState time_derivative(double t) const;
  /// Forcing for a Dynamics on the same grid with the same options.
  Forcing forcing() const;

 private:
  SpectralState evaluate(double t, bool derivative) const;

  Grid grid_;
  PotentialParams params_;
  double amp_v_, amp_q_, amp_p_;
  std::shared_ptr<const Dynamics> unforced_;
};

struct InitialData {
  SpectralState state;
  Forcing forcing;  ///< non-empty only for the manufactured preset
};

/// Initial state (and forcing, if any) described by a validated config.
InitialData make_initial_data(const RunConfig& cfg);

}  // namespace qshyp
