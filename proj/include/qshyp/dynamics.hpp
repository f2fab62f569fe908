#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qshyp/grid.hpp"
#include "qshyp/potential.hpp"
#include "qshyp/spectral.hpp"

namespace qshyp {

/// Velocity v, tensor Q and its material rate P on the grid, at time t.
/// Q and P are stored as basis coefficients (5 per point), so they are
/// symmetric and traceless by construction.
struct SpectralState {
  Grid grid;
  double t = 0.0;
  VectorField v;
  TensorField q;
  TensorField p;
  PotentialParams params;

  static SpectralState zero(const Grid& grid, const PotentialParams& params);
};

/// Time derivatives of a state plus the two multiplier fields, reported for
/// inspection: the scalar lambda of the tensor constraint and the pressure.
struct RhsBundle {
  VectorField v_dot;
  TensorField q_dot;
  TensorField p_dot;
  ScalarField multiplier;
  ScalarField pressure;
};

/// Additive forcing in physical space, added to the right-hand sides before
/// projection (used for manufactured-solution tests).
struct ForcingFields {
  VectorField v;
  TensorField q;
  TensorField p;
};
using Forcing = std::function<void(double t, ForcingFields& out)>;

struct DynamicsOptions {
  /// Evaluate the bulk-potential term on a grid padded by 2 (alias free for
  /// the cubic nonlinearity) instead of the native grid.
  bool dealias_potential = false;
  /// Abort once |v|_inf or |grad Q|_inf exceeds this value.
  double blowup_cap = 1e6;
  /// Optional manufactured forcing; empty means none.
  Forcing forcing;
};

/// Right-hand side assembly and explicit time stepping for
///
///   v_t + (v.grad) v + grad Pi = -div(grad Q (.) grad Q),  div v = 0,
///   Q_t + (v.grad) Q = P,
///   P_t + (v.grad) P = -dF(Q) + Delta Q - lambda I.
///
/// Quadratic products are formed pointwise from dealiased fields and the
/// results are truncated to the two-thirds band, so a band-limited state
/// stays band-limited.
class Dynamics {
 public:
  explicit Dynamics(const Grid& grid, DynamicsOptions options = {});
  ~Dynamics();
  Dynamics(Dynamics&&) noexcept;
  Dynamics& operator=(Dynamics&&) noexcept;

  const Grid& grid() const noexcept { return ops_.grid(); }
  const SpectralOps& ops() const noexcept { return ops_; }
  const DynamicsOptions& options() const noexcept { return options_; }

  /// S_ij = d_i Q : d_j Q, from dealiased gradients.
  SymMatrixField stress_tensor(const TensorField& q) const;

  RhsBundle rhs(const SpectralState& state) const;

  /// safety / (k_max (|v|_inf + 1)) with k_max = floor(n/3).
  double cfl_dt(const SpectralState& state, double safety) const;

  /// Classical four-stage Runge-Kutta step. Throws BlowUpError if the result
  /// is non-finite or exceeds the blow-up cap.
  SpectralState step_rk4(const SpectralState& state, double dt) const;

  /// Shape, finiteness and solenoidality checks; throws ContractError.
  void check_state(const SpectralState& state) const;

  double max_velocity(const SpectralState& state) const;
  double max_tensor_gradient(const SpectralState& state) const;

 private:
  /// Spectrum of dF(Q), truncated to the dealiased band.
  SpectralComponents<5> bulk_term(const TensorField& q_band_limited, const SpectralComponents<5>& q_hat,
                                  const PotentialParams& params) const;

  SpectralOps ops_;
  DynamicsOptions options_;
  std::unique_ptr<SpectralOps> padded_;
};

struct IntegrationSettings {
  double t_end = 0.0;
  double snapshot_interval = 0.1;
  double cfl_safety = 0.5;
  /// Fixed step; 0 selects the CFL step. Either way each snapshot interval
  /// is split into equal steps.
  double dt_fixed = 0.0;
};

struct Trajectory {
  std::vector<SpectralState> snapshots;
  std::size_t steps = 0;
  bool blew_up = false;
  double blowup_time = 0.0;
  std::string blowup_message;
};

/// Integrates from state.t to settings.t_end, storing a snapshot at t = 0
/// and every snapshot_interval of simulation time (and at t_end). Stops at
/// the last good snapshot on blow-up.
Trajectory integrate(const Dynamics& dynamics, const SpectralState& initial, const IntegrationSettings& settings);

/// Number of equal steps for one snapshot interval of given length.
std::size_t steps_for_interval(double length, double dt);

// Linear algebra on states (same grid required).
SpectralState axpy(const SpectralState& x, double alpha, const RhsBundle& k);

}  // namespace qshyp
