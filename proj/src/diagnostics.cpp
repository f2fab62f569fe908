#include "qshyp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "field_util.hpp"
#include "qshyp/errors.hpp"
#include "qshyp/summation.hpp"

namespace qshyp {

namespace {

using cplx = std::complex<double>;
using detail::tensor_at;

template <typename Fn>
double integrate_pointwise(const SpectralOps& ops, Fn&& fn) {
  const std::size_t np = ops.grid().points();
  Real vals(np);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) vals[i] = fn(i);
  return ops.integrate(vals);
}

void require_snapshots(std::span<const SpectralState> s, std::size_t min, const char* who) {
  if (s.size() < min)
    throw InvalidInput(std::string(who) + ": needs at least " + std::to_string(min) + " snapshots");
  for (const auto& st : s)
    if (!(st.grid == s[0].grid)) throw InvalidInput(std::string(who) + ": snapshots on different grids");
}

// Tangent dx/ds of a closed curve sampled at s_j = 2 pi j / m, by DFT.
std::vector<Point3> spectral_tangent(const Loop& loop) {
  const std::size_t m = loop.size();
  std::vector<Point3> tan(m, Point3{0.0, 0.0, 0.0});
  const int half = static_cast<int>(m / 2);
  for (int axis = 0; axis < 3; ++axis) {
    const auto ua = static_cast<std::size_t>(axis);
    std::vector<cplx> coef(m);
    for (std::size_t k = 0; k < m; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < m; ++j) {
        const double ang = -kTwoPi * static_cast<double>((k * j) % m) / static_cast<double>(m);
        acc += loop[j][ua] * cplx{std::cos(ang), std::sin(ang)};
      }
      coef[k] = acc / static_cast<double>(m);
    }
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        int kk = static_cast<int>(k);
        if (kk > half) kk -= static_cast<int>(m);
        if (m % 2 == 0 && kk == half) continue;
        const double ang = kTwoPi * static_cast<double>((k * j) % m) / static_cast<double>(m);
        acc += (cplx{0.0, static_cast<double>(kk)} * coef[k] * cplx{std::cos(ang), std::sin(ang)}).real();
      }
      tan[j][ua] = acc;
    }
  }
  return tan;
}

}  // namespace

EnergyBreakdown energy_breakdown(const SpectralOps& ops, const SpectralState& s) {
  const Grid& g = ops.grid();
  if (!(s.grid == g)) throw InvalidInput("energy_breakdown: state grid differs");
  EnergyBreakdown e;
  e.kinetic = 0.5 * integrate_pointwise(ops, [&](std::size_t i) {
                return s.v[0][i] * s.v[0][i] + s.v[1][i] * s.v[1][i] + s.v[2][i] * s.v[2][i];
              });
  e.p_energy = 0.5 * integrate_pointwise(ops, [&](std::size_t i) { return frobenius_norm_sq(tensor_at(s.p, i)); });
  const auto qh = ops.forward(s.q);
  double grad = 0.0;
  for (const auto& c : qh) grad += ops.mean_gradient_product(c, c);
  e.elastic = 0.5 * g.volume() * grad;
  e.bulk_f = integrate_pointwise(ops, [&](std::size_t i) { return bulk_value(tensor_at(s.q, i), s.params); });
  e.bulk_g = integrate_pointwise(ops, [&](std::size_t i) { return g_value(tensor_at(s.q, i), s.params); });
  return e;
}

double tensor_coupling(const SpectralOps& ops, const SpectralState& s) {
  return integrate_pointwise(ops, [&](std::size_t i) { return frobenius_inner(tensor_at(s.q, i), tensor_at(s.p, i)); });
}

double max_trace(const TensorField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f[0].size(); ++i) m = std::max(m, std::abs(tensor_at(f, i).to_matrix().trace()));
  return m;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw InvalidInput("cumulative_trapezoid: length mismatch");
  std::vector<double> r(t.size(), 0.0);
  for (std::size_t j = 1; j < t.size(); ++j) r[j] = r[j - 1] + 0.5 * (t[j] - t[j - 1]) * (f[j] + f[j - 1]);
  return r;
}

BalanceSeries energy_balance_residual(const SpectralOps& ops, std::span<const SpectralState> snaps) {
  require_snapshots(snaps, 2, "energy_balance_residual");
  const std::size_t m = snaps.size();
  BalanceSeries b;
  std::vector<double> eg(m), ef(m), qp(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto e = energy_breakdown(ops, snaps[j]);
    b.times.push_back(snaps[j].t);
    eg[j] = e.total_g();
    ef[j] = e.total_f();
    qp[j] = tensor_coupling(ops, snaps[j]);
  }
  const auto work = cumulative_trapezoid(b.times, qp);
  const double lambda = snaps[0].params.lambda;
  for (std::size_t j = 0; j < m; ++j) {
    b.residual_g.push_back(eg[j] - eg[0] - 2.0 * lambda * work[j]);
    b.residual_f.push_back(ef[j] - ef[0]);
  }
  return b;
}

SpectralComponents<3> extended_circulation_spectrum(const SpectralOps& ops, const SpectralState& s) {
  const Grid& g = ops.grid();
  if (!(s.grid == g)) throw InvalidInput("extended_circulation: state grid differs");
  const auto qh = detail::dealiased(ops, s.q);
  const auto ph = detail::dealiased(ops, s.p);
  const auto vh = detail::dealiased(ops, s.v);
  const auto p = ops.inverse(ph);
  const auto dq = detail::gradients(ops, qh);
  auto prod = zero_components<3>(g);
  const std::size_t np = g.points();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t a = 0; a < 3; ++a) {
      double acc = 0.0;
      for (std::size_t c = 0; c < 5; ++c) acc += p[c][i] * dq[c][a][i];
      prod[a][i] = acc;
    }
  auto r = ops.forward(prod);
  ops.dealias(r);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t m = 0; m < r[a].size(); ++m) r[a][m] += vh[a][m];
  return r;
}

VectorField extended_circulation_field(const SpectralOps& ops, const SpectralState& s) {
  return ops.inverse(extended_circulation_spectrum(ops, s));
}

SpectralComponents<3> extended_vorticity_spectrum(const SpectralOps& ops, const SpectralState& s) {
  return ops.curl(extended_circulation_spectrum(ops, s));
}

VectorField extended_vorticity(const SpectralOps& ops, const SpectralState& s) {
  return ops.inverse(extended_vorticity_spectrum(ops, s));
}

double helicity(const SpectralOps& ops, const SpectralState& s) {
  const auto c = extended_circulation_spectrum(ops, s);
  const auto w = ops.curl(c);
  double acc = 0.0;
  for (std::size_t a = 0; a < 3; ++a) acc += ops.mean_product(c[a], w[a]);
  return ops.grid().volume() * acc;
}

VorticityResidualSeries vorticity_residual(const SpectralOps& ops, std::span<const SpectralState> snaps, int sign) {
  if (sign != 1 && sign != -1) throw InvalidInput("vorticity_residual: sign must be +1 or -1");
  require_snapshots(snaps, 3, "vorticity_residual");
  const std::size_t m = snaps.size();
  const double h = snaps[1].t - snaps[0].t;
  for (std::size_t j = 1; j < m; ++j)
    if (std::abs(snaps[j].t - snaps[j - 1].t - h) > 1e-9 * h)
      throw InvalidInput("vorticity_residual: snapshots must be uniformly spaced");

  const Grid& g = ops.grid();
  std::vector<SpectralComponents<3>> w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = extended_vorticity_spectrum(ops, snaps[j]);

  VorticityResidualSeries out;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const auto v = ops.inverse(detail::dealiased(ops, snaps[j].v));
    const auto wp = ops.inverse(w[j]);
    auto cross = zero_components<3>(g);
    for (std::size_t i = 0; i < g.points(); ++i) {
      cross[0][i] = v[1][i] * wp[2][i] - v[2][i] * wp[1][i];
      cross[1][i] = v[2][i] * wp[0][i] - v[0][i] * wp[2][i];
      cross[2][i] = v[0][i] * wp[1][i] - v[1][i] * wp[0][i];
    }
    auto ch = ops.forward(cross);
    ops.dealias(ch);
    const auto nl = ops.curl(ch);
    SpectralComponents<3> r;
    for (std::size_t a = 0; a < 3; ++a) {
      r[a].resize(g.modes());
      for (std::size_t k = 0; k < g.modes(); ++k)
        r[a][k] = (w[j + 1][a][k] - w[j - 1][a][k]) / (2.0 * h) + static_cast<double>(sign) * nl[a][k];
    }
    out.times.push_back(snaps[j].t);
    out.values.push_back(std::sqrt(detail::spectral_norm_sq(ops, r)));
  }
  return out;
}

Loop make_circle_loop(const Point3& center, double radius, std::size_t markers, int normal_axis) {
  if (markers < 16) throw InvalidInput("loop needs at least 16 markers");
  if (!(radius > 0.0)) throw InvalidInput("loop radius must be positive");
  if (normal_axis < 0 || normal_axis > 2) throw InvalidInput("loop normal axis must be 0, 1 or 2");
  const auto u = static_cast<std::size_t>((normal_axis + 1) % 3);
  const auto w = static_cast<std::size_t>((normal_axis + 2) % 3);
  Loop l(markers, center);
  for (std::size_t j = 0; j < markers; ++j) {
    const double s = kTwoPi * static_cast<double>(j) / static_cast<double>(markers);
    l[j][u] += radius * std::cos(s);
    l[j][w] += radius * std::sin(s);
  }
  return l;
}

double loop_circulation(const SpectralOps& ops, const SpectralState& s, const Loop& loop) {
  if (loop.size() < 16) throw InvalidInput("loop_circulation: loop needs at least 16 markers");
  const auto c = extended_circulation_spectrum(ops, s);
  const Spectrum* fields[] = {&c[0], &c[1], &c[2]};
  const auto vals = ops.evaluate_at_points(std::span<const Spectrum* const>(fields), loop);
  const auto tan = spectral_tangent(loop);
  std::vector<double> terms(loop.size());
  for (std::size_t j = 0; j < loop.size(); ++j)
    terms[j] = vals[j][0] * tan[j][0] + vals[j][1] * tan[j][1] + vals[j][2] * tan[j][2];
  return kTwoPi / static_cast<double>(loop.size()) * pairwise_sum(terms);
}

double loop_spacing_ratio(const Loop& loop) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 0; j < loop.size(); ++j) {
    const auto& a = loop[j];
    const auto& b = loop[(j + 1) % loop.size()];
    const double d = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

LoopAdvection advect_loop(const Dynamics& dyn, std::span<const SpectralState> snaps, const Loop& loop0,
                          std::size_t substeps) {
  if (loop0.size() < 16) throw InvalidInput("advect_loop: loop needs at least 16 markers");
  if (substeps == 0) throw InvalidInput("advect_loop: substeps must be positive");
  require_snapshots(snaps, 1, "advect_loop");
  const SpectralOps& ops = dyn.ops();
  const std::size_t nm = ops.grid().modes();

  std::vector<SpectralComponents<3>> vh(snaps.size()), vdot(snaps.size());
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    vh[j] = detail::dealiased(ops, snaps[j].v);
    vdot[j] = ops.forward(dyn.rhs(snaps[j]).v_dot);
  }

  LoopAdvection out;
  out.loops.push_back(loop0);
  out.worst_spacing_ratio = loop_spacing_ratio(loop0);
  Loop x = loop0;

  for (std::size_t j = 0; j + 1 < snaps.size(); ++j) {
    const double h = snaps[j + 1].t - snaps[j].t;
    // Hermite interpolant of the velocity spectrum at fraction th of the interval.
    auto velocity_at = [&](double th, const Loop& pts) {
      const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
      const double h10 = th * (1.0 - th) * (1.0 - th);
      const double h01 = th * th * (3.0 - 2.0 * th);
      const double h11 = th * th * (th - 1.0);
      SpectralComponents<3> blend;
      for (std::size_t a = 0; a < 3; ++a) {
        blend[a].resize(nm);
        for (std::size_t k = 0; k < nm; ++k)
          blend[a][k] = h00 * vh[j][a][k] + h10 * h * vdot[j][a][k] + h01 * vh[j + 1][a][k] + h11 * h * vdot[j + 1][a][k];
      }
      const Spectrum* fields[] = {&blend[0], &blend[1], &blend[2]};
      return ops.evaluate_at_points(std::span<const Spectrum* const>(fields), pts);
    };
    const double dt = h / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double th0 = static_cast<double>(s) / static_cast<double>(substeps);
      const double thm = (static_cast<double>(s) + 0.5) / static_cast<double>(substeps);
      const double th1 = static_cast<double>(s + 1) / static_cast<double>(substeps);
      auto shifted = [&](const std::vector<std::vector<double>>& k, double f) {
        Loop y = x;
        for (std::size_t p = 0; p < y.size(); ++p)
          for (std::size_t a = 0; a < 3; ++a) y[p][a] += f * k[p][a];
        return y;
      };
      const auto k1 = velocity_at(th0, x);
      const auto k2 = velocity_at(thm, shifted(k1, 0.5 * dt));
      const auto k3 = velocity_at(thm, shifted(k2, 0.5 * dt));
      const auto k4 = velocity_at(th1, shifted(k3, dt));
      for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t a = 0; a < 3; ++a) x[p][a] += dt / 6.0 * (k1[p][a] + 2.0 * k2[p][a] + 2.0 * k3[p][a] + k4[p][a]);
    }
    out.loops.push_back(x);
    out.worst_spacing_ratio = std::max(out.worst_spacing_ratio, loop_spacing_ratio(x));
  }
  out.under_resolved = out.worst_spacing_ratio > 50.0;
  return out;
}

std::vector<DiagnosticsRecord> compute_records(const Dynamics& dyn, std::span<const SpectralState> snaps,
                                               const LoopAdvection* loop) {
  require_snapshots(snaps, 1, "compute_records");
  if (loop && loop->loops.size() != snaps.size())
    throw InvalidInput("compute_records: loop history does not match the snapshots");
  const SpectralOps& ops = dyn.ops();
  const std::size_t m = snaps.size();

  std::vector<DiagnosticsRecord> rows(m);
  std::vector<double> times(m), qp(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& s = snaps[j];
    auto& r = rows[j];
    const auto e = energy_breakdown(ops, s);
    r.t = s.t;
    r.E_kin = e.kinetic;
    r.E_P = e.p_energy;
    r.E_elastic = e.elastic;
    r.E_bulk_F = e.bulk_f;
    r.E_bulk_G = e.bulk_g;
    r.E_total_F = e.total_f();
    r.E_total_G = e.total_g();
    r.helicity = helicity(ops, s);
    r.max_div_v = ops.divergence_ratio(ops.forward(s.v));
    r.max_trace_Q = max_trace(s.q);
    if (loop) r.loop_circulation = loop_circulation(ops, s, loop->loops[j]);
    times[j] = s.t;
    qp[j] = tensor_coupling(ops, s);
  }
  const auto work = cumulative_trapezoid(times, qp);
  const double lambda = snaps[0].params.lambda;
  for (std::size_t j = 0; j < m; ++j)
    rows[j].balance_residual = rows[j].E_total_G - rows[0].E_total_G - 2.0 * lambda * work[j];

  bool uniform = m >= 3;
  for (std::size_t j = 1; uniform && j < m; ++j)
    uniform = std::abs((times[j] - times[j - 1]) - (times[1] - times[0])) <= 1e-9 * (times[1] - times[0]);
  if (uniform) {
    const auto plus = vorticity_residual(ops, snaps, +1);
    const auto minus = vorticity_residual(ops, snaps, -1);
    for (std::size_t j = 1; j + 1 < m; ++j) {
      rows[j].vort_res_plus = plus.values[j - 1];
      rows[j].vort_res_minus = minus.values[j - 1];
    }
  }
  return rows;
}

}  // namespace qshyp
