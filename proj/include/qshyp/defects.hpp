#pragma once

#include <span>
#include <vector>

#include "qshyp/dynamics.hpp"

namespace qshyp {

/// Largest absolute residual of each weak identity over the test family:
/// complex exponentials e^{-ik.x} with |k_axis| <= max_wavenumber (momentum
/// tests projected onto divergence-free directions, tensor tests along the
/// five basis directions), times theta(t) in {1, cos(pi t/T)}, evaluated at
/// every snapshot time with trapezoid quadrature in time.
struct WeakResidualTable {
  double divergence = 0.0;  ///< max |int v . grad phi|
  double momentum = 0.0;
  double q_equation = 0.0;
  double p_equation = 0.0;
  std::size_t tests = 0;

  double worst() const noexcept;
};

/// Requires at least two snapshots on one grid and max_wavenumber >= 1.
WeakResidualTable weak_residuals(std::span<const SpectralState> snapshots, int max_wavenumber = 2);

struct DefectReport {
  std::vector<double> times;
  /// E_G(coarse) - E_G(fine), clamped at zero.
  std::vector<double> dissipation;
  std::vector<double> dissipation_raw;
  /// L1 norms of the differences of v(x)v + grad Q (.) grad Q, and of v(x)P.
  std::vector<double> r1;
  std::vector<double> r2;
  std::vector<double> cumulative_r;  ///< int_0^t (r1 + r2)
  std::vector<double> cumulative_d;  ///< int_0^t dissipation
  /// sup_t cumulative_r / cumulative_d over times where the denominator is
  /// significant; 0 when both vanish and infinity when only the numerator does.
  double ddi_constant = 0.0;
};

/// Compares a coarse run with a finer run started from the same data (the
/// fine initial state restricted to the coarse grid must match the coarse
/// one). Quantities are evaluated on the fine grid after prolongation.
DefectReport defect_estimate(std::span<const SpectralState> coarse, std::span<const SpectralState> fine);

}  // namespace qshyp
