#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qshyp/tensor.hpp"

namespace qshyp {

/// Quartic Landau-de Gennes bulk potential
///
///   F(Q) = a/2 |Q|^2 + b/3 tr(Q^3) + c/4 |Q|^4,   G(Q) = F(Q) + lambda |Q|^2,
///
/// plus the exponent q and constant growth_const used by the growth audit
/// |dF(Q)| <= growth_const (1 + |Q|^q).
struct PotentialParams {
  double a = -0.3;
  double b = -4.0;
  double c = 4.0;
  double lambda = 0.0;
  double q = 3.0;
  double growth_const = 10.0;

  /// Throws InvalidInput unless c > 0, lambda >= 0, q < 5, growth_const > 0.
  void validate() const;

  friend bool operator==(const PotentialParams&, const PotentialParams&) = default;
};

double bulk_value(const TracelessSymTensor& q, const PotentialParams& p);

/// Constrained gradient a Q + b (Q^2 - tr(Q^2)/3 I) + c |Q|^2 Q. The trace
/// projection plays the role of the multiplier lambda*I.
TracelessSymTensor bulk_gradient(const TracelessSymTensor& q, const PotentialParams& p);

/// Scalar multiplier eliminated by the projection: -(b/3) tr(Q^2).
double trace_multiplier(const TracelessSymTensor& q, const PotentialParams& p);

double g_value(const TracelessSymTensor& q, const PotentialParams& p);
TracelessSymTensor g_gradient(const TracelessSymTensor& q, const PotentialParams& p);

/// Second derivative of G in direction (h, h) at q.
double g_hessian(const TracelessSymTensor& q, const TracelessSymTensor& h, const PotentialParams& p);

/// Smallest lambda for which G is convex along every ray through Q = 0
/// (necessary condition): max(0, (-a + b^2/(18 c))/2).
double ray_convexity_threshold(const PotentialParams& p);

/// Sharp threshold: the Hessian of G is positive definite everywhere iff
/// lambda > max(0, (-a + b^2/(6 c))/2). The worst direction h is orthogonal
/// to Q with Q parallel to the deviatoric part of h^2 (e.g. h ~ diag(1,-1,0),
/// Q ~ diag(1,1,-2)), so the bound exceeds the ray value when b != 0.
double global_convexity_threshold(const PotentialParams& p);

/// Smallest eigenvalue of the Hessian of G at q on the 5-dimensional
/// tangent space.
double min_hessian_eigenvalue(const TracelessSymTensor& q, const PotentialParams& p);

/// Default convexity shift for a given audit radius: max(0, -a/2 + |b| radius).
double default_lambda(double a, double b, double radius);

struct AssumptionReport {
  std::size_t samples = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;

  bool isotropy_ok = true;
  double isotropy_worst_gap = 0.0;
  TracelessSymTensor isotropy_witness_q;
  Mat3 isotropy_witness_rotation = Mat3::identity();

  bool convexity_ok = true;
  double convexity_worst_gap = 0.0;  ///< max of G(mid) - (G1+G2)/2, positive means a violation
  TracelessSymTensor convexity_witness_q1;
  TracelessSymTensor convexity_witness_q2;
  double min_g = 0.0;
  TracelessSymTensor min_g_witness;
  double min_curvature = 0.0;  ///< smallest sampled Hessian eigenvalue of G
  double ray_threshold = 0.0;
  double global_threshold = 0.0;

  bool growth_ok = true;
  double growth_worst_ratio = 0.0;  ///< max |dF| / (1 + |Q|^q); the minimal admissible constant
  TracelessSymTensor growth_witness;

  bool all_ok() const noexcept { return isotropy_ok && convexity_ok && growth_ok; }
};

/// Sampling audit of isotropy, lambda-convexity with non-negativity, and
/// polynomial growth over |Q| <= radius. Deterministic for a given seed and
/// independent of the thread count.
AssumptionReport check_assumptions(const PotentialParams& p, std::size_t n_samples, double radius,
                                   std::uint64_t seed);

/// Uniformly distributed element of O(3): a rotation from a normalized
/// Gaussian quaternion, negated (reflected) with probability 1/2.
Mat3 random_orthogonal(std::mt19937_64& rng);

/// Random tensor with |Q| <= radius: Gaussian direction, radius drawn
/// uniformly (not by volume) so small |Q| is sampled as often as large.
TracelessSymTensor random_tensor(std::mt19937_64& rng, double radius);

}  // namespace qshyp
