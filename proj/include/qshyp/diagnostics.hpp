#pragma once

#include <limits>
#include <span>
#include <vector>

#include "qshyp/dynamics.hpp"
#include "qshyp/spectral.hpp"

namespace qshyp {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One row of the diagnostics table. Columns that cannot be evaluated at a
/// given time (loop circulation without a loop, vorticity residuals at the
/// end points) hold NaN.
struct DiagnosticsRecord {
  double t = 0.0;
  double E_kin = 0.0;
  double E_P = 0.0;
  double E_elastic = 0.0;
  double E_bulk_F = 0.0;
  double E_bulk_G = 0.0;
  double E_total_F = 0.0;
  double E_total_G = 0.0;
  double balance_residual = 0.0;
  double helicity = 0.0;
  double max_div_v = 0.0;  ///< max|k.v(k)| / max|v(k)|
  double max_trace_Q = 0.0;
  double loop_circulation = kMissing;
  double vort_res_plus = kMissing;
  double vort_res_minus = kMissing;
};

struct EnergyBreakdown {
  double kinetic = 0.0;   ///< 1/2 int |v|^2
  double p_energy = 0.0;  ///< 1/2 int |P|^2
  double elastic = 0.0;   ///< 1/2 int |grad Q|^2
  double bulk_f = 0.0;    ///< int F(Q)
  double bulk_g = 0.0;    ///< int G(Q)

  double total_f() const noexcept { return kinetic + p_energy + elastic + bulk_f; }
  double total_g() const noexcept { return kinetic + p_energy + elastic + bulk_g; }
};

EnergyBreakdown energy_breakdown(const SpectralOps& ops, const SpectralState& state);

/// int Q:P.
double tensor_coupling(const SpectralOps& ops, const SpectralState& state);

/// Pointwise max of |tr Q| and |tr P| of the reconstructed matrices.
double max_trace(const TensorField& f);

/// Trapezoid rule on a possibly non-uniform time grid; result[j] is the
/// integral from times[0] to times[j].
std::vector<double> cumulative_trapezoid(std::span<const double> times, std::span<const double> values);

struct BalanceSeries {
  std::vector<double> times;
  /// E_G(t) - E_G(0) - 2 lambda int_0^t int Q:P
  std::vector<double> residual_g;
  /// E_F(t) - E_F(0)
  std::vector<double> residual_f;
};

/// Throws InvalidInput for fewer than two snapshots.
BalanceSeries energy_balance_residual(const SpectralOps& ops, std::span<const SpectralState> snapshots);

/// C = v + P_ij grad Q_ij with the product truncated to the dealiased band.
SpectralComponents<3> extended_circulation_spectrum(const SpectralOps& ops, const SpectralState& state);
VectorField extended_circulation_field(const SpectralOps& ops, const SpectralState& state);
/// curl C.
SpectralComponents<3> extended_vorticity_spectrum(const SpectralOps& ops, const SpectralState& state);
VectorField extended_vorticity(const SpectralOps& ops, const SpectralState& state);

/// int C . curl C.
double helicity(const SpectralOps& ops, const SpectralState& state);

struct VorticityResidualSeries {
  std::vector<double> times;  ///< interior snapshot times
  std::vector<double> values;
};

/// L2 norm of d_t w + sign curl(v x w) for the extended vorticity w, with
/// the time derivative taken by central differences on a uniform snapshot
/// grid. Requires at least three snapshots; sign must be +1 or -1.
VorticityResidualSeries vorticity_residual(const SpectralOps& ops, std::span<const SpectralState> snapshots, int sign);

/// Closed marker loop; the segment from the last point back to the first
/// closes it. Coordinates are not wrapped so the curve stays continuous.
using Loop = std::vector<Point3>;

/// Circle of given radius around center in the plane normal to axis.
Loop make_circle_loop(const Point3& center, double radius, std::size_t markers, int normal_axis = 2);

/// int C . dl along the loop, trapezoid rule in the marker parameter with a
/// spectral (DFT) tangent.
double loop_circulation(const SpectralOps& ops, const SpectralState& state, const Loop& loop);

/// max segment length over min segment length.
double loop_spacing_ratio(const Loop& loop);

struct LoopAdvection {
  std::vector<Loop> loops;  ///< one per snapshot
  double worst_spacing_ratio = 1.0;
  bool under_resolved = false;  ///< spacing ratio exceeded 50
};

/// Advects markers with dx/dt = v(x, t) by RK4. Between snapshots the
/// velocity is the cubic Hermite interpolant built from v and v_t (the
/// latter from the right-hand side), evaluated by exact trigonometric
/// interpolation. Throws InvalidInput for fewer than 16 markers.
LoopAdvection advect_loop(const Dynamics& dynamics, std::span<const SpectralState> snapshots, const Loop& loop0,
                          std::size_t substeps = 2);

/// Diagnostics table for a trajectory: energies, balance residual, helicity,
/// constraint checks, optional loop circulation and vorticity residuals.
std::vector<DiagnosticsRecord> compute_records(const Dynamics& dynamics, std::span<const SpectralState> snapshots,
                                               const LoopAdvection* loop = nullptr);

}  // namespace qshyp
