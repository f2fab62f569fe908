#include "qshyp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qshyp/errors.hpp"

namespace qshyp {

void PotentialParams::validate() const {
  const double all[] = {a, b, c, lambda, q, growth_const};
  for (double x : all)
    if (!std::isfinite(x)) throw InvalidInput("potential parameters must be finite");
  if (!(c > 0.0)) throw InvalidInput("potential: quartic coefficient c must be > 0");
  if (lambda < 0.0) throw InvalidInput("potential: convexity shift lambda must be >= 0");
  if (!(q < 5.0)) throw InvalidInput("potential: growth exponent q must be < 5");
  if (!(growth_const > 0.0)) throw InvalidInput("potential: growth constant must be > 0");
}

double bulk_value(const TracelessSymTensor& q, const PotentialParams& p) {
  const double q2 = frobenius_norm_sq(q);
  return 0.5 * p.a * q2 + p.b / 3.0 * tr_Q3(q) + 0.25 * p.c * q2 * q2;
}

TracelessSymTensor bulk_gradient(const TracelessSymTensor& q, const PotentialParams& p) {
  TracelessSymTensor r = (p.a + p.c * frobenius_norm_sq(q)) * q;
  if (p.b != 0.0) r += p.b * traceless_square(q);
  return r;
}

double trace_multiplier(const TracelessSymTensor& q, const PotentialParams& p) {
  return -(p.b / 3.0) * frobenius_norm_sq(q);
}

double g_value(const TracelessSymTensor& q, const PotentialParams& p) {
  return bulk_value(q, p) + p.lambda * frobenius_norm_sq(q);
}

TracelessSymTensor g_gradient(const TracelessSymTensor& q, const PotentialParams& p) {
  return bulk_gradient(q, p) + (2.0 * p.lambda) * q;
}

double g_hessian(const TracelessSymTensor& q, const TracelessSymTensor& h, const PotentialParams& p) {
  const Mat3 qm = q.to_matrix();
  const Mat3 hm = h.to_matrix();
  const Mat3 qh2 = qm * hm * hm;
  const double h2 = frobenius_norm_sq(h);
  const double qh = frobenius_inner(q, h);
  return (p.a + 2.0 * p.lambda) * h2 + 2.0 * p.b * qh2.trace() +
         p.c * (frobenius_norm_sq(q) * h2 + 2.0 * qh * qh);
}

double ray_convexity_threshold(const PotentialParams& p) {
  return std::max(0.0, 0.5 * (-p.a + p.b * p.b / (18.0 * p.c)));
}

double global_convexity_threshold(const PotentialParams& p) {
  return std::max(0.0, 0.5 * (-p.a + p.b * p.b / (6.0 * p.c)));
}

double min_hessian_eigenvalue(const TracelessSymTensor& q, const PotentialParams& p) {
  Eigen::Matrix<double, 5, 5> h;
  for (int i = 0; i < 5; ++i) {
    const auto ei = TracelessSymTensor::basis(i);
    h(i, i) = g_hessian(q, ei, p);
    for (int j = 0; j < i; ++j) {
      const auto ej = TracelessSymTensor::basis(j);
      // Polarization of the quadratic form.
      const double v = 0.25 * (g_hessian(q, ei + ej, p) - g_hessian(q, ei - ej, p));
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double default_lambda(double a, double b, double radius) { return std::max(0.0, -0.5 * a + std::abs(b) * radius); }

Mat3 random_orthogonal(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
  const double norm = std::sqrt(w * w + x * x + y * y + z * z);
  w /= norm;
  x /= norm;
  y /= norm;
  z /= norm;
  Mat3 r;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - z * w);
  r(0, 2) = 2 * (x * z + y * w);
  r(1, 0) = 2 * (x * y + z * w);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - x * w);
  r(2, 0) = 2 * (x * z - y * w);
  r(2, 1) = 2 * (y * z + x * w);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  std::bernoulli_distribution reflect(0.5);
  if (reflect(rng)) r = -1.0 * r;
  return r;
}

TracelessSymTensor random_tensor(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  TracelessSymTensor t;
  for (double& x : t.c) x = normal(rng);
  const double norm = std::sqrt(frobenius_norm_sq(t));
  if (norm == 0.0) return t;
  return (radius * uniform(rng) / norm) * t;
}

namespace {

struct SampleResult {
  double iso_gap;
  Mat3 rotation;
  TracelessSymTensor q1;
  TracelessSymTensor q2;
  double midpoint_gap;  // G(mid) - avg - tol; > 0 is a violation
  double raw_midpoint_gap;
  double g1;
  double curvature;
  double growth_ratio;
};

SampleResult audit_sample(const PotentialParams& p, double radius, std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  SampleResult r{};
  r.q1 = random_tensor(rng, radius);

  r.rotation = random_orthogonal(rng);
  const double f = bulk_value(r.q1, p);
  r.iso_gap = std::abs(f - bulk_value(conjugate(r.rotation, r.q1), p)) / (1.0 + std::abs(f));

  // Three pair families: independent, antipodal through 0, and nearby.
  switch (index % 3) {
    case 0:
      r.q2 = random_tensor(rng, radius);
      break;
    case 1:
      r.q2 = -1.0 * r.q1;
      break;
    default: {
      const double delta = radius * std::pow(10.0, -3.0 * uniform(rng));
      r.q2 = r.q1 + random_tensor(rng, delta);
      break;
    }
  }
  r.g1 = g_value(r.q1, p);
  const double g2 = g_value(r.q2, p);
  const double gm = g_value(0.5 * (r.q1 + r.q2), p);
  r.raw_midpoint_gap = gm - 0.5 * (r.g1 + g2);
  r.midpoint_gap = r.raw_midpoint_gap - 1e-12 * (1.0 + std::abs(r.g1) + std::abs(g2));

  r.curvature = min_hessian_eigenvalue(r.q1, p);

  const double qn = std::sqrt(frobenius_norm_sq(r.q1));
  const double gn = std::sqrt(frobenius_norm_sq(bulk_gradient(r.q1, p)));
  r.growth_ratio = gn / (1.0 + std::pow(qn, p.q));
  return r;
}

}  // namespace

AssumptionReport check_assumptions(const PotentialParams& p, std::size_t n_samples, double radius,
                                   std::uint64_t seed) {
  p.validate();
  if (n_samples < 1) throw InvalidInput("check_assumptions: n_samples must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("check_assumptions: radius must be > 0");

  std::vector<SampleResult> results(n_samples);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n_samples; ++i) results[i] = audit_sample(p, radius, seed, i);

  AssumptionReport rep;
  rep.samples = n_samples;
  rep.radius = radius;
  rep.seed = seed;
  rep.ray_threshold = ray_convexity_threshold(p);
  rep.global_threshold = global_convexity_threshold(p);
  rep.min_g = results[0].g1;
  rep.min_g_witness = results[0].q1;
  rep.min_curvature = results[0].curvature;
  rep.convexity_worst_gap = results[0].raw_midpoint_gap;
  rep.convexity_witness_q1 = results[0].q1;
  rep.convexity_witness_q2 = results[0].q2;
  double worst_violation = results[0].midpoint_gap;

  for (const SampleResult& r : results) {
    if (r.iso_gap > rep.isotropy_worst_gap) {
      rep.isotropy_worst_gap = r.iso_gap;
      rep.isotropy_witness_q = r.q1;
      rep.isotropy_witness_rotation = r.rotation;
    }
    if (r.midpoint_gap > worst_violation) {
      worst_violation = r.midpoint_gap;
      rep.convexity_worst_gap = r.raw_midpoint_gap;
      rep.convexity_witness_q1 = r.q1;
      rep.convexity_witness_q2 = r.q2;
    }
    if (r.g1 < rep.min_g) {
      rep.min_g = r.g1;
      rep.min_g_witness = r.q1;
    }
    rep.min_curvature = std::min(rep.min_curvature, r.curvature);
    if (r.growth_ratio > rep.growth_worst_ratio) {
      rep.growth_worst_ratio = r.growth_ratio;
      rep.growth_witness = r.q1;
    }
  }

  rep.isotropy_ok = rep.isotropy_worst_gap <= 1e-10;
  rep.convexity_ok = worst_violation <= 0.0 && rep.min_g >= -1e-12 && rep.min_curvature > 0.0 &&
                     p.lambda >= rep.ray_threshold;
  rep.growth_ok = rep.growth_worst_ratio <= p.growth_const;
  return rep;
}

}  // namespace qshyp
