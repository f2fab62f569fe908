#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qshyp/dynamics.hpp"

namespace qshyp {

/// Relative energy of (v, Q, P) with respect to (v~, Q~, P~):
///
///   1/2 int |v - v~|^2 + |P - P~|^2 + |grad(Q - Q~)|^2
///     + int G(Q) - dG(Q~):(Q - Q~) - G(Q~).
///
/// Both states must share the grid; the result is exactly 0 for equal states.
double relative_energy(const SpectralOps& ops, const SpectralState& s, const SpectralState& tilde);

/// Fraction of the quadratic energy (|v|^2 + |P|^2 + |grad Q|^2) carried by
/// modes with |k| > n/4.
double spectral_tail(const SpectralOps& ops, const SpectralState& s);

/// L(t) = 1 + |grad v~|_inf + |grad P~|_inf + |Delta Q~|_inf + |grad dG(Q~)|_inf,
/// pointwise Frobenius norms.
double stability_rate(const SpectralOps& ops, const SpectralState& tilde);

struct GronwallOptions {
  /// Growth constant; empty means fit the smallest one consistent with the data.
  std::optional<double> c;
  /// Absolute slack, relative to the energy scale of the strong solution.
  double floor_rel = 1e-10;
  /// Resolution requirement on the strong solution (see spectral_tail).
  double tail_limit = 1e-10;
};

struct GronwallResult {
  std::vector<double> times;
  std::vector<double> rel_energy;
  std::vector<double> rate;             ///< L(t)
  std::vector<double> integrated_rate;  ///< int_0^t L
  std::vector<double> envelope;         ///< E_rel(0) exp(c int_0^t L)
  double c_used = 0.0;
  double c_fitted = 0.0;
  double floor = 0.0;
  double worst_tail = 0.0;
  bool pass = false;
};

/// Compares a trajectory against a smooth reference on matching snapshot
/// times. The first trajectory is prolonged onto the reference grid when it
/// is coarser. Throws UnresolvedError when the reference fails the tail test.
GronwallResult gronwall_check(std::span<const SpectralState> weak, std::span<const SpectralState> strong,
                              const GronwallOptions& options = {});

}  // namespace qshyp
