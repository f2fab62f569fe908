#include <cmath>

#include "doctest.h"
#include "qshyp/grid.hpp"
#include "qshyp/spectral.hpp"
#include "support.hpp"

using namespace qshyp;

namespace {

Real from_function(const Grid& g, auto f) {
  Real r(g.points());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f(g.point(i));
  return r;
}

std::size_t index_of(const Grid& g, const std::array<int, 3>& k) {
  for (std::size_t i = 0; i < g.modes(); ++i)
    if (g.mode(i) == k) return i;
  return g.modes();
}

double max_abs_spec(const Spectrum& s) {
  double m = 0.0;
  for (const auto& z : s) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(16, 3);
  CHECK(g.points() == 16u * 16u * 16u);
  CHECK(g.modes() == 9u * 16u * 16u);
  CHECK(g.dealias_cutoff() == 5);
  CHECK(g.volume() == doctest::Approx(std::pow(kTwoPi, 3)));
  const Grid g2(16, 2);
  CHECK(g2.points() == 256u);
  CHECK(g2.nz() == 1);
  CHECK(g2.volume() == doctest::Approx(kTwoPi * kTwoPi));
}

TEST_CASE("forward transform of sin x has a single coefficient -i/2") {
  const Grid g(16, 2);
  const SpectralOps ops(g);
  const Spectrum s = ops.forward(from_function(g, [](auto x) { return std::sin(x[0]); }));
  const std::size_t k1 = index_of(g, {1, 0, 0});
  CHECK(std::abs(s[k1] - std::complex<double>(0.0, -0.5)) < 1e-15);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != k1) CHECK(std::abs(s[i]) < 1e-15);
}

TEST_CASE("forward transform agrees with a direct DFT") {
  auto rng = testing::make_rng(201);
  for (int dims : {2, 3}) {
    const Grid g(8, dims);
    const SpectralOps ops(g);
    Real f(g.points());
    for (double& x : f) x = testing::uniform(rng);
    const Spectrum s = ops.forward(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.modes(); ++i)
      worst = std::max(worst, std::abs(s[i] - testing::naive_coefficient(g, f, g.mode(i))));
    CHECK(worst < 1e-14);
  }
}

TEST_CASE("round trip and Parseval on random band-limited fields") {
  auto rng = testing::make_rng(202);
  for (int dims : {2, 3}) {
    const Grid g(16, dims);
    const SpectralOps ops(g);
    for (int trial = 0; trial < 5; ++trial) {
      const Real f = testing::sample(g, testing::random_trig_poly(rng, 5, dims));
      const Real h = testing::sample(g, testing::random_trig_poly(rng, 5, dims));
      CHECK(testing::max_abs_diff(ops.inverse(ops.forward(f)), f) < 1e-12);
      Real prod(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * h[i];
      const double mean = ops.integrate(prod) / g.volume();
      CHECK(ops.mean_product(ops.forward(f), ops.forward(h)) == doctest::Approx(mean).epsilon(1e-12));
    }
  }
}

TEST_CASE("derivatives and Laplacian match analytic values") {
  auto rng = testing::make_rng(203);
  for (int dims : {2, 3}) {
    const Grid g(16, dims);
    const SpectralOps ops(g);
    const testing::TrigPoly p = testing::random_trig_poly(rng, 5, dims);
    const Spectrum s = ops.forward(testing::sample(g, p));
    for (int axis = 0; axis < 3; ++axis) {
      const Real d = ops.inverse(ops.derivative(s, axis));
      const Real expect = from_function(g, [&](auto x) { return p.derivative(x, axis); });
      CHECK(testing::max_abs_diff(d, expect) < 1e-12);
    }
    if (dims == 2) {
      CHECK(max_abs_spec(ops.derivative(s, 2)) == 0.0);
    }
  }
  const Grid g(16, 2);
  const SpectralOps ops(g);
  const Real f = from_function(g, [](auto x) { return std::sin(x[0]) * std::sin(x[1]); });
  const Real lap = ops.inverse(ops.laplacian(ops.forward(f)));
  Real expect = f;
  for (double& x : expect) x *= -2.0;
  CHECK(testing::max_abs_diff(lap, expect) < 1e-13);
  const Real back = ops.inverse(ops.inverse_negative_laplacian(ops.forward(f)));
  Real half = f;
  for (double& x : half) x *= 0.5;
  CHECK(testing::max_abs_diff(back, half) < 1e-14);
}

TEST_CASE("dealiasing keeps low modes, removes high ones, and is idempotent") {
  const Grid g(12, 2);
  const SpectralOps ops(g);
  Spectrum s = ops.forward(from_function(g, [](auto x) { return std::cos(x[0] + x[1]) + std::cos(6.0 * x[0]) + std::sin(5.0 * x[1]); }));
  ops.dealias(s);
  const Real kept = ops.inverse(s);
  CHECK(testing::max_abs_diff(kept, from_function(g, [](auto x) { return std::cos(x[0] + x[1]); })) < 1e-14);
  Spectrum s2 = s;
  ops.dealias(s2);
  CHECK(s2 == s);
}

TEST_CASE("Leray projection") {
  auto rng = testing::make_rng(204);
  for (int dims : {2, 3}) {
    const Grid g(16, dims);
    const SpectralOps ops(g);
    // gradients are annihilated
    const Spectrum phi = ops.forward(testing::sample(g, testing::random_trig_poly(rng, 5, dims)));
    auto grad = ops.gradient(phi);
    ops.leray_project(grad);
    for (const auto& c : grad) CHECK(max_abs_spec(c) < 1e-13);

    // solenoidal fields are kept
    const VectorField sol = testing::random_solenoidal(g, rng, 5);
    auto sh = ops.forward(sol);
    auto sh2 = sh;
    ops.leray_project(sh2);
    for (std::size_t c = 0; c < 3; ++c) CHECK(testing::max_abs_diff(ops.inverse(sh2[c]), sol[c]) < 1e-12);

    // general field: Pythagoras, idempotence, zero divergence
    auto f = ops.forward(testing::random_components<3>(g, rng, 5));
    auto pf = f;
    ops.leray_project(pf);
    double nf = 0.0, np = 0.0, nr = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      Spectrum r = f[c];
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= pf[c][i];
      nf += ops.mean_product(f[c], f[c]);
      np += ops.mean_product(pf[c], pf[c]);
      nr += ops.mean_product(r, r);
    }
    CHECK(nf == doctest::Approx(np + nr).epsilon(1e-12));
    CHECK(ops.divergence_ratio(pf) < 1e-14);
    auto ppf = pf;
    ops.leray_project(ppf);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < pf[c].size(); ++i) CHECK(std::abs(ppf[c][i] - pf[c][i]) < 1e-15);
  }
}

TEST_CASE("divergence of a curl vanishes") {
  auto rng = testing::make_rng(205);
  const Grid g(16, 3);
  const SpectralOps ops(g);
  const auto a = ops.forward(testing::random_components<3>(g, rng, 7));
  CHECK(max_abs_spec(ops.divergence(ops.curl(a))) < 1e-13);
}

TEST_CASE("point evaluation") {
  const Grid g(16, 2);
  const SpectralOps ops(g);
  const Spectrum s = ops.forward(from_function(g, [](auto x) { return std::sin(x[0]); }));
  const std::vector<Point3> pts{{kPi / 3.0, 0.7, 0.0}, {-kPi / 3.0, 2.0, 0.0}, {kTwoPi + 1.0, 0.0, 0.0}};
  const auto vals = ops.evaluate_at_points(s, pts);
  CHECK(vals[0] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(vals[1] == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(vals[2] == doctest::Approx(std::sin(1.0)).epsilon(1e-14));

  // at grid nodes the interpolant reproduces arbitrary grid data
  auto rng = testing::make_rng(206);
  Real f(g.points());
  for (double& x : f) x = testing::uniform(rng);
  const Spectrum fs = ops.forward(f);
  std::vector<Point3> nodes;
  std::vector<double> expect;
  for (int t = 0; t < 20; ++t) {
    const std::size_t idx = static_cast<std::size_t>(rng() % g.points());
    nodes.push_back(g.point(idx));
    expect.push_back(f[idx]);
  }
  const auto at_nodes = ops.evaluate_at_points(fs, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(at_nodes[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("point evaluation agrees with an 8x finer grid at its nodes") {
  auto rng = testing::make_rng(207);
  for (int dims : {2, 3}) {
    const Grid g(8, dims);
    const Grid fine(64, dims);
    const SpectralOps ops(g), fops(fine);
    const Real f = testing::sample(g, testing::random_trig_poly(rng, 3, dims));
    const Spectrum fs = ops.forward(f);
    const Real ff = fops.inverse(transfer_modes(g, fs, fine));
    std::vector<Point3> pts;
    std::vector<double> expect;
    for (int t = 0; t < 50; ++t) {
      const std::size_t idx = static_cast<std::size_t>(rng() % fine.points());
      pts.push_back(fine.point(idx));
      expect.push_back(ff[idx]);
    }
    const auto vals = ops.evaluate_at_points(fs, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(vals[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  }
}

TEST_CASE("quadrature") {
  const Grid g(16, 3);
  const SpectralOps ops(g);
  const double v = ops.integrate(from_function(g, [](auto x) { return std::sin(x[0]) * std::sin(x[0]); }));
  CHECK(v == doctest::Approx(g.volume() / 2.0).epsilon(1e-14));
  CHECK(ops.integrate(Real(g.points(), 1.0)) == doctest::Approx(g.volume()).epsilon(1e-14));
}

TEST_CASE("mode transfer: up then down is the identity, and the maps are adjoint") {
  auto rng = testing::make_rng(208);
  for (int dims : {2, 3}) {
    const Grid c(12, dims), f(20, dims);
    const SpectralOps cops(c), fops(f);
    const Spectrum a = cops.forward(testing::sample(c, testing::random_trig_poly(rng, 4, dims)));
    const Spectrum up = transfer_modes(c, a, f);
    const Spectrum back = transfer_modes(f, up, c);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(back[i] - a[i]) < 1e-15);

    Real fr(f.points());
    for (double& x : fr) x = testing::uniform(rng);
    Real cr(c.points());
    for (double& x : cr) x = testing::uniform(rng);
    const Spectrum fs = fops.forward(fr);
    const Spectrum cs = cops.forward(cr);
    const double lhs = fops.mean_product(transfer_modes(c, cs, f), fs);
    const double rhs = cops.mean_product(cs, transfer_modes(f, fs, c));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
}

TEST_CASE("differentiation commutes with dealiasing") {
  auto rng = testing::make_rng(209);
  const Grid g(12, 2);
  const SpectralOps ops(g);
  Real f(g.points());
  for (double& x : f) x = testing::uniform(rng);
  const Spectrum s = ops.forward(f);
  for (int axis = 0; axis < 2; ++axis) {
    Spectrum a = ops.derivative(s, axis);
    ops.dealias(a);
    Spectrum b = s;
    ops.dealias(b);
    b = ops.derivative(b, axis);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-14);
  }
}
