#include <cmath>

#include "doctest.h"
#include "qshyp/defects.hpp"
#include "qshyp/diagnostics.hpp"
#include "qshyp/errors.hpp"
#include "qshyp/relative_energy.hpp"
#include "qshyp/resample.hpp"
#include "support.hpp"

using namespace qshyp;

namespace {

PotentialParams quartic(double a, double b, double c, double lambda) {
  PotentialParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.lambda = lambda;
  return p;
}

SpectralState cellular_flow(const Grid& g) {
  SpectralState s = SpectralState::zero(g, quartic(1.0, 0.0, 1.0, 0.0));
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto x = g.point(i);
    s.v[0][i] = std::sin(x[0]) * std::cos(x[1]);
    s.v[1][i] = -std::cos(x[0]) * std::sin(x[1]);
  }
  return s;
}

// Circulation of the cellular flow around a circle, computed as the flux of
// its vorticity 2 sin x sin y through the disk with Gauss-Legendre in r and
// the trapezoid rule in angle.
double disk_flux(double cx, double cy, double radius) {
  const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                        0.2369268850561891};
  const int panels = 20, angles = 256;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double r0 = radius * p / panels, r1 = radius * (p + 1) / panels;
    for (int j = 0; j < 5; ++j) {
      const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gx[j];
      double ring = 0.0;
      for (int a = 0; a < angles; ++a) {
        const double th = kTwoPi * a / angles;
        ring += 2.0 * std::sin(cx + r * std::cos(th)) * std::sin(cy + r * std::sin(th));
      }
      total += 0.5 * (r1 - r0) * gw[j] * r * ring * kTwoPi / angles;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("energies of simple states") {
  const Grid g(16, 3);
  const SpectralOps ops(g);
  SpectralState s = SpectralState::zero(g, quartic(1.0, 0.0, 1.0, 0.5));
  EnergyBreakdown e = energy_breakdown(ops, s);
  CHECK(e.total_g() == 0.0);
  for (std::size_t i = 0; i < g.points(); ++i) s.v[0][i] = std::sin(g.point(i)[1]);
  e = energy_breakdown(ops, s);
  CHECK(e.kinetic == doctest::Approx(2.0 * std::pow(kPi, 3)).epsilon(1e-13));

  for (std::size_t i = 0; i < g.points(); ++i) s.q[1][i] = 0.2 * std::cos(g.point(i)[2]);
  e = energy_breakdown(ops, s);
  // 1/2 int |d_z Q|^2 = 1/2 0.04 int sin^2 z
  CHECK(e.elastic == doctest::Approx(0.5 * 0.04 * 4.0 * std::pow(kPi, 3)).epsilon(1e-13));
  Real q2(g.points());
  for (std::size_t i = 0; i < g.points(); ++i) q2[i] = s.q[1][i] * s.q[1][i];
  CHECK(e.bulk_g - e.bulk_f == doctest::Approx(0.5 * ops.integrate(q2)).epsilon(1e-13));
}

TEST_CASE("cumulative trapezoid") {
  const std::vector<double> t{0.0, 0.5, 1.5, 2.0};
  const std::vector<double> f{2.0, 2.0, 2.0, 2.0};
  const auto c = cumulative_trapezoid(t, f);
  CHECK(c[0] == 0.0);
  CHECK(c[3] == doctest::Approx(4.0));
  const std::vector<double> lin{0.0, 0.5, 1.5, 2.0};
  CHECK(cumulative_trapezoid(t, lin)[3] == doctest::Approx(2.0));
}

TEST_CASE("energy balance residual needs two snapshots and starts at zero") {
  const Grid g(16, 2);
  const SpectralOps ops(g);
  auto rng = testing::make_rng(501);
  const SpectralState s = testing::random_state(g, rng, 3, 0.1, quartic(1.0, 0.0, 1.0, 1.0));
  std::vector<SpectralState> one{s};
  CHECK_THROWS_AS(energy_balance_residual(ops, one), InvalidInput);
  std::vector<SpectralState> two{s, s};
  two[1].t = 0.1;
  const BalanceSeries b = energy_balance_residual(ops, two);
  CHECK(b.residual_g[0] == 0.0);
  CHECK(b.residual_f[1] == 0.0);
}

TEST_CASE("extended circulation") {
  auto rng = testing::make_rng(502);
  const Grid g(16, 3);
  const SpectralOps ops(g);
  SpectralState s = testing::random_state(g, rng, 4, 0.5);
  // P = 0 gives C = v
  SpectralState s0 = s;
  s0.p = zero_components<5>(g);
  const VectorField c0 = extended_circulation_field(ops, s0);
  for (std::size_t c = 0; c < 3; ++c) CHECK(testing::max_abs_diff(c0[c], s.v[c]) < 1e-14);
  // constant Q gives C = v
  SpectralState s1 = s;
  for (auto& comp : s1.q) std::fill(comp.begin(), comp.end(), 0.7);
  const VectorField c1 = extended_circulation_field(ops, s1);
  for (std::size_t c = 0; c < 3; ++c) CHECK(testing::max_abs_diff(c1[c], s.v[c]) < 1e-14);
  // the vorticity is divergence free
  const auto w = extended_vorticity_spectrum(ops, s);
  double m = 0.0;
  for (const auto& z : ops.divergence(w)) m = std::max(m, std::abs(z));
  CHECK(m < 1e-13);
}

TEST_CASE("helicity of ABC flow and of a shear") {
  const Grid g(16, 3);
  const SpectralOps ops(g);
  SpectralState s = SpectralState::zero(g, {});
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto x = g.point(i);
    s.v[0][i] = std::sin(x[2]) + std::cos(x[1]);
    s.v[1][i] = std::sin(x[0]) + std::cos(x[2]);
    s.v[2][i] = std::sin(x[1]) + std::cos(x[0]);
  }
  CHECK(helicity(ops, s) == doctest::Approx(24.0 * std::pow(kPi, 3)).epsilon(1e-12));
  SpectralState shear = SpectralState::zero(g, {});
  for (std::size_t i = 0; i < g.points(); ++i) shear.v[0][i] = std::sin(g.point(i)[1]);
  CHECK(std::abs(helicity(ops, shear)) < 1e-12);
}

TEST_CASE("vorticity residual") {
  const Grid g(16, 2);
  const SpectralOps ops(g);
  SpectralState s = SpectralState::zero(g, {});
  std::vector<SpectralState> two{s, s};
  two[1].t = 0.1;
  CHECK_THROWS_AS(vorticity_residual(ops, two, -1), InvalidInput);
  std::vector<SpectralState> three{s, s, s};
  three[1].t = 0.1;
  three[2].t = 0.2;
  const auto r = vorticity_residual(ops, three, 1);
  REQUIRE(r.values.size() == 1u);
  CHECK(r.values[0] == 0.0);
  CHECK_THROWS(vorticity_residual(ops, three, 0));
}

TEST_CASE("loop circulation of the cellular flow matches the vorticity flux") {
  const Grid g(32, 2);
  const SpectralOps ops(g);
  const SpectralState s = cellular_flow(g);
  for (double r : {0.3, 0.5, 1.0}) {
    const Loop loop = make_circle_loop({kPi / 2, kPi / 2, 0.0}, r, 128);
    CHECK(loop_circulation(ops, s, loop) == doctest::Approx(disk_flux(kPi / 2, kPi / 2, r)).epsilon(1e-10));
  }
  const Loop off = make_circle_loop({1.0, 2.0, 0.0}, 0.4, 128);
  CHECK(loop_circulation(ops, s, off) == doctest::Approx(disk_flux(1.0, 2.0, 0.4)).epsilon(1e-10));
  CHECK(loop_spacing_ratio(off) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_circle_loop({0, 0, 0}, 0.4, 8), InvalidInput);
}

TEST_CASE("circulation of an advected loop is conserved in a steady flow") {
  const Grid g(32, 2);
  const Dynamics dyn(g);
  const SpectralState s0 = cellular_flow(g);
  const Trajectory tr = integrate(dyn, s0, IntegrationSettings{kTwoPi, 0.05, 0.5, 0.0});
  const Loop loop0 = make_circle_loop({kPi / 2, kPi / 2, 0.0}, 0.5, 128);
  const LoopAdvection adv = advect_loop(dyn, tr.snapshots, loop0, 4);
  REQUIRE(adv.loops.size() == tr.snapshots.size());
  const double c0 = loop_circulation(dyn.ops(), tr.snapshots.front(), adv.loops.front());
  double drift = 0.0;
  for (std::size_t j = 0; j < adv.loops.size(); ++j)
    drift = std::max(drift, std::abs(loop_circulation(dyn.ops(), tr.snapshots[j], adv.loops[j]) - c0));
  MESSAGE("circulation drift over one turnover: ", drift);
  CHECK(drift <= 1e-8);
  CHECK_FALSE(adv.under_resolved);
}

TEST_CASE("a loop in a fluid at rest stays put") {
  const Grid g(16, 2);
  const Dynamics dyn(g);
  const Trajectory tr = integrate(dyn, SpectralState::zero(g, quartic(1.0, 0.0, 1.0, 0.0)),
                                  IntegrationSettings{0.5, 0.1, 0.5, 0.0});
  const Loop loop0 = make_circle_loop({1.0, 1.0, 0.0}, 0.5, 32);
  const LoopAdvection adv = advect_loop(dyn, tr.snapshots, loop0);
  for (std::size_t m = 0; m < loop0.size(); ++m)
    for (std::size_t a = 0; a < 3; ++a) CHECK(adv.loops.back()[m][a] == loop0[m][a]);
}

TEST_CASE("records of a short run") {
  const Grid g(16, 2);
  const Dynamics dyn(g);
  auto rng = testing::make_rng(503);
  const SpectralState s0 = testing::random_state(g, rng, 3, 0.1, quartic(1.0, 0.0, 1.0, 1.0));
  const Trajectory tr = integrate(dyn, s0, IntegrationSettings{0.3, 0.1, 0.5, 0.0});
  const auto recs = compute_records(dyn, tr.snapshots);
  REQUIRE(recs.size() == 4u);
  CHECK(std::isnan(recs[0].loop_circulation));
  CHECK(std::isnan(recs[0].vort_res_plus));
  CHECK(std::isnan(recs[3].vort_res_minus));
  CHECK_FALSE(std::isnan(recs[1].vort_res_minus));
  CHECK(recs[0].balance_residual == 0.0);
  for (const auto& r : recs) {
    CHECK(r.E_total_G == doctest::Approx(r.E_kin + r.E_P + r.E_elastic + r.E_bulk_G));
    CHECK(r.max_trace_Q <= 1e-13);
    CHECK(r.max_div_v <= 1e-11);
  }
}

TEST_CASE("weak residuals") {
  const Grid g(16, 2);
  const Dynamics dyn(g);
  const Trajectory zero = integrate(dyn, SpectralState::zero(g, quartic(1.0, 0.0, 1.0, 0.0)),
                                    IntegrationSettings{0.2, 0.1, 0.5, 0.0});
  const WeakResidualTable w0 = weak_residuals(zero.snapshots, 2);
  CHECK(w0.worst() == 0.0);
  CHECK(w0.tests > 0u);
  CHECK_THROWS_AS(weak_residuals(zero.snapshots, 6), InvalidInput);
  CHECK_THROWS_AS(weak_residuals(zero.snapshots, 0), InvalidInput);

  auto rng = testing::make_rng(504);
  const SpectralState s0 = testing::random_state(g, rng, 3, 0.1, quartic(1.0, 0.0, 1.0, 0.0));
  const WeakResidualTable w1 = weak_residuals(integrate(dyn, s0, IntegrationSettings{0.2, 0.02, 0.5, 0.0}).snapshots, 3);
  const WeakResidualTable w2 = weak_residuals(integrate(dyn, s0, IntegrationSettings{0.2, 0.01, 0.5, 0.0}).snapshots, 3);
  CHECK(w1.divergence < 1e-12);
  // trapezoid quadrature in time: second order in the snapshot spacing
  for (auto [a, b] : {std::pair{w1.momentum, w2.momentum}, std::pair{w1.q_equation, w2.q_equation},
                      std::pair{w1.p_equation, w2.p_equation}}) {
    CHECK(a / b > 3.5);
    CHECK(a / b < 4.5);
  }
}

TEST_CASE("defect estimate of a run against itself is exactly zero") {
  const Grid g(16, 2);
  const Dynamics dyn(g);
  auto rng = testing::make_rng(505);
  const SpectralState s0 = testing::random_state(g, rng, 3, 0.1, quartic(1.0, 0.0, 1.0, 0.0));
  const Trajectory tr = integrate(dyn, s0, IntegrationSettings{0.2, 0.1, 0.5, 0.0});
  const DefectReport d = defect_estimate(tr.snapshots, tr.snapshots);
  for (std::size_t j = 0; j < d.times.size(); ++j) {
    CHECK(d.r1[j] == 0.0);
    CHECK(d.r2[j] == 0.0);
    CHECK(d.dissipation[j] == 0.0);
  }
  CHECK(d.ddi_constant == 0.0);

  std::vector<SpectralState> shorter(tr.snapshots.begin(), tr.snapshots.end() - 1);
  CHECK_THROWS(defect_estimate(shorter, tr.snapshots));
}

TEST_CASE("relative energy") {
  const Grid g(16, 3);
  const SpectralOps ops(g);
  const PotentialParams p = quartic(1.0, 0.0, 1.0, 0.0);
  SpectralState zero = SpectralState::zero(g, p);
  SpectralState s = zero;
  for (std::size_t i = 0; i < g.points(); ++i) s.v[0][i] = std::sin(g.point(i)[1]);
  CHECK(relative_energy(ops, s, zero) == doctest::Approx(2.0 * std::pow(kPi, 3)).epsilon(1e-13));
  CHECK(relative_energy(ops, s, s) == 0.0);

  // Expanded form from separate integrals, and non-negativity for a convex G.
  auto rng = testing::make_rng(506);
  const PotentialParams pc = quartic(-0.3, -4.0, 4.0, 0.5);
  for (int t = 0; t < 20; ++t) {
    const SpectralState a = testing::random_state(g, rng, 3, 0.2, pc);
    const SpectralState b = testing::random_state(g, rng, 3, 0.2, pc);
    const double e = relative_energy(ops, a, b);
    CHECK(e >= 0.0);

    double quad = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const auto av = ops.forward(a.v[c]), bv = ops.forward(b.v[c]);
      quad += 0.5 * (ops.mean_product(av, av) + ops.mean_product(bv, bv)) - ops.mean_product(av, bv);
    }
    for (std::size_t c = 0; c < 5; ++c) {
      const auto ap = ops.forward(a.p[c]), bp = ops.forward(b.p[c]);
      const auto aq = ops.forward(a.q[c]), bq = ops.forward(b.q[c]);
      quad += 0.5 * (ops.mean_product(ap, ap) + ops.mean_product(bp, bp)) - ops.mean_product(ap, bp);
      quad += 0.5 * (ops.mean_gradient_product(aq, aq) + ops.mean_gradient_product(bq, bq)) -
              ops.mean_gradient_product(aq, bq);
    }
    quad *= g.volume();
    Real bulk(g.points());
    for (std::size_t i = 0; i < g.points(); ++i) {
      TracelessSymTensor qa, qb;
      for (std::size_t c = 0; c < 5; ++c) {
        qa.c[c] = a.q[c][i];
        qb.c[c] = b.q[c][i];
      }
      bulk[i] = g_value(qa, pc) - frobenius_inner(g_gradient(qb, pc), qa - qb) - g_value(qb, pc);
    }
    CHECK(e == doctest::Approx(quad + ops.integrate(bulk)).epsilon(1e-10));
  }
}

TEST_CASE("Gronwall check: identical runs and the resolution refusal") {
  const Grid g(32, 2);
  const Dynamics dyn(g);
  auto rng = testing::make_rng(507);
  const SpectralState s0 = testing::random_state(g, rng, 2, 0.05, quartic(1.0, 0.0, 1.0, 0.0));
  const Trajectory tr = integrate(dyn, s0, IntegrationSettings{0.2, 0.1, 0.5, 0.0});
  const GronwallResult r = gronwall_check(tr.snapshots, tr.snapshots);
  CHECK(r.pass);
  for (double e : r.rel_energy) CHECK(e == 0.0);

  const SpectralState rough = testing::random_state(g, rng, 10, 0.1, quartic(1.0, 0.0, 1.0, 0.0));
  std::vector<SpectralState> rough_traj{rough};
  CHECK(spectral_tail(dyn.ops(), rough) > 1e-10);
  CHECK_THROWS_AS(gronwall_check(rough_traj, rough_traj), UnresolvedError);
}
