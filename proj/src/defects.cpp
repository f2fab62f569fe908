#include "qshyp/defects.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "field_util.hpp"
#include "qshyp/diagnostics.hpp"
#include "qshyp/resample.hpp"

namespace qshyp {

namespace {

using cplx = std::complex<double>;
using detail::tensor_at;

// Spectral coefficients of the integrands entering the weak identities, at the
// test modes only.
struct WeakSample {
  std::vector<std::array<cplx, 3>> v;
  std::vector<std::array<cplx, 5>> q, p, bulk;
  std::vector<std::array<std::array<cplx, 3>, 3>> flux;     // v_i v_j + S_ij
  std::vector<std::array<std::array<cplx, 3>, 5>> q_flux;   // v_k Q_c
  std::vector<std::array<std::array<cplx, 3>, 5>> p_flux;   // v_k P_c
};

WeakSample weak_sample(const SpectralOps& ops, const SpectralState& s, const std::vector<std::size_t>& modes) {
  const Grid& g = ops.grid();
  const std::size_t np = g.points();
  const auto vh = detail::dealiased(ops, s.v);
  const auto qh = detail::dealiased(ops, s.q);
  const auto ph = detail::dealiased(ops, s.p);
  const auto v = ops.inverse(vh);
  const auto q = ops.inverse(qh);
  const auto p = ops.inverse(ph);
  const auto dq = detail::gradients(ops, qh);

  Components<9> flux = zero_components<9>(g);
  Components<15> qf = zero_components<15>(g);
  Components<15> pf = zero_components<15>(g);
  TensorField bulk = zero_components<5>(g);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        double st = 0.0;
        for (std::size_t c = 0; c < 5; ++c) st += dq[c][a][i] * dq[c][b][i];
        flux[3 * a + b][i] = v[a][i] * v[b][i] + st;
      }
    for (std::size_t c = 0; c < 5; ++c)
      for (std::size_t k = 0; k < 3; ++k) {
        qf[3 * c + k][i] = v[k][i] * q[c][i];
        pf[3 * c + k][i] = v[k][i] * p[c][i];
      }
    const auto d = bulk_gradient(tensor_at(q, i), s.params);
    for (std::size_t c = 0; c < 5; ++c) bulk[c][i] = d.c[c];
  }
  const auto fh = ops.forward(flux);
  const auto qfh = ops.forward(qf);
  const auto pfh = ops.forward(pf);
  const auto bh = ops.forward(bulk);

  WeakSample w;
  for (std::size_t m : modes) {
    std::array<cplx, 3> vv{};
    std::array<cplx, 5> qq{}, pp{}, bb{};
    std::array<std::array<cplx, 3>, 3> ff{};
    std::array<std::array<cplx, 3>, 5> qff{}, pff{};
    for (std::size_t a = 0; a < 3; ++a) {
      vv[a] = vh[a][m];
      for (std::size_t b = 0; b < 3; ++b) ff[a][b] = fh[3 * a + b][m];
    }
    for (std::size_t c = 0; c < 5; ++c) {
      qq[c] = qh[c][m];
      pp[c] = ph[c][m];
      bb[c] = bh[c][m];
      for (std::size_t k = 0; k < 3; ++k) {
        qff[c][k] = qfh[3 * c + k][m];
        pff[c][k] = pfh[3 * c + k][m];
      }
    }
    w.v.push_back(vv);
    w.q.push_back(qq);
    w.p.push_back(pp);
    w.bulk.push_back(bb);
    w.flux.push_back(ff);
    w.q_flux.push_back(qff);
    w.p_flux.push_back(pff);
  }
  return w;
}

// max_tau |lhs(tau) - int_0^tau rhs| for one test.
double identity_residual(std::span<const double> t, const std::vector<cplx>& lhs, const std::vector<cplx>& rhs) {
  double worst = 0.0;
  cplx acc{0.0, 0.0};
  for (std::size_t j = 1; j < t.size(); ++j) {
    acc += 0.5 * (t[j] - t[j - 1]) * (rhs[j] + rhs[j - 1]);
    worst = std::max(worst, std::abs(lhs[j] - lhs[0] - acc));
  }
  return worst;
}

}  // namespace

double WeakResidualTable::worst() const noexcept {
  return std::max(std::max(divergence, momentum), std::max(q_equation, p_equation));
}

WeakResidualTable weak_residuals(std::span<const SpectralState> snaps, int kmax) {
  if (snaps.size() < 2) throw InvalidInput("weak_residuals: needs at least two snapshots");
  if (kmax < 1) throw InvalidInput("weak_residuals: max wavenumber must be >= 1");
  const Grid& g = snaps[0].grid;
  for (const auto& s : snaps)
    if (!(s.grid == g)) throw InvalidInput("weak_residuals: snapshots on different grids");
  if (kmax > g.dealias_cutoff()) throw InvalidInput("weak_residuals: max wavenumber exceeds the resolved band");
  const SpectralOps ops(g);

  std::vector<std::size_t> modes;
  for (std::size_t m = 0; m < g.modes(); ++m) {
    const auto k = g.mode(m);
    if (std::abs(k[0]) <= kmax && std::abs(k[1]) <= kmax && std::abs(k[2]) <= kmax) modes.push_back(m);
  }
  std::vector<WeakSample> samples;
  std::vector<double> t;
  for (const auto& s : snaps) {
    samples.push_back(weak_sample(ops, s, modes));
    t.push_back(s.t);
  }
  const std::size_t nt = snaps.size();
  const double t0 = t.front();
  const double span = t.back() - t0;
  const double vol = g.volume();
  const cplx mi{0.0, -1.0};

  WeakResidualTable out;
  std::vector<cplx> lhs(nt), rhs(nt);
  for (int variant = 0; variant < 2; ++variant) {
    auto theta = [&](double s) { return variant == 0 ? 1.0 : std::cos(kPi * (s - t0) / span); };
    auto dtheta = [&](double s) { return variant == 0 ? 0.0 : -kPi / span * std::sin(kPi * (s - t0) / span); };

    for (std::size_t mi_idx = 0; mi_idx < modes.size(); ++mi_idx) {
      const auto kint = g.mode(modes[mi_idx]);
      const std::array<double, 3> k{double(kint[0]), double(kint[1]), double(kint[2])};
      const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];

      if (variant == 0) {
        for (std::size_t j = 0; j < nt; ++j) {
          const auto& v = samples[j].v[mi_idx];
          out.divergence = std::max(out.divergence, vol * std::abs(mi * (k[0] * v[0] + k[1] * v[1] + k[2] * v[2])));
        }
        ++out.tests;
      }

      if (k2 > 0.0) {
        for (std::size_t e = 0; e < 3; ++e) {
          std::array<double, 3> w{};
          w[e] = 1.0;
          for (std::size_t a = 0; a < 3; ++a) w[a] -= k[a] * k[e] / k2;
          if (w[0] * w[0] + w[1] * w[1] + w[2] * w[2] < 1e-12) continue;
          for (std::size_t j = 0; j < nt; ++j) {
            const auto& sm = samples[j];
            cplx vw{0.0, 0.0}, fl{0.0, 0.0};
            for (std::size_t a = 0; a < 3; ++a) {
              vw += w[a] * sm.v[mi_idx][a];
              for (std::size_t b = 0; b < 3; ++b) fl += w[a] * k[b] * sm.flux[mi_idx][a][b];
            }
            lhs[j] = vol * theta(t[j]) * vw;
            rhs[j] = vol * (dtheta(t[j]) * vw + theta(t[j]) * mi * fl);
          }
          out.momentum = std::max(out.momentum, identity_residual(t, lhs, rhs));
          ++out.tests;
        }
      }

      for (std::size_t c = 0; c < 5; ++c) {
        for (std::size_t j = 0; j < nt; ++j) {
          const auto& sm = samples[j];
          cplx adv{0.0, 0.0};
          for (std::size_t a = 0; a < 3; ++a) adv += k[a] * sm.q_flux[mi_idx][c][a];
          lhs[j] = vol * theta(t[j]) * sm.q[mi_idx][c];
          rhs[j] = vol * (dtheta(t[j]) * sm.q[mi_idx][c] + theta(t[j]) * (mi * adv + sm.p[mi_idx][c]));
        }
        out.q_equation = std::max(out.q_equation, identity_residual(t, lhs, rhs));
        for (std::size_t j = 0; j < nt; ++j) {
          const auto& sm = samples[j];
          cplx adv{0.0, 0.0};
          for (std::size_t a = 0; a < 3; ++a) adv += k[a] * sm.p_flux[mi_idx][c][a];
          lhs[j] = vol * theta(t[j]) * sm.p[mi_idx][c];
          rhs[j] = vol * (dtheta(t[j]) * sm.p[mi_idx][c] +
                          theta(t[j]) * (mi * adv - sm.bulk[mi_idx][c] - k2 * sm.q[mi_idx][c]));
        }
        out.p_equation = std::max(out.p_equation, identity_residual(t, lhs, rhs));
        out.tests += 2;
      }
    }
  }
  return out;
}

DefectReport defect_estimate(std::span<const SpectralState> coarse, std::span<const SpectralState> fine) {
  if (coarse.empty()) throw InvalidInput("defect_estimate: empty trajectory");
  detail::require_times(coarse, fine, "defect_estimate");
  const Grid& gc = coarse[0].grid;
  const Grid& gf = fine[0].grid;
  if (gc.dims() != gf.dims() || gc.n() > gf.n())
    throw InvalidInput("defect_estimate: the fine run must live on a grid at least as fine");

  {
    const SpectralState r = resample_state(fine[0], gc);
    double diff = 0.0, scale = 0.0;
    auto cmp = [&](const Real& a, const Real& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
      }
    };
    for (std::size_t c = 0; c < 3; ++c) cmp(r.v[c], coarse[0].v[c]);
    for (std::size_t c = 0; c < 5; ++c) {
      cmp(r.q[c], coarse[0].q[c]);
      cmp(r.p[c], coarse[0].p[c]);
    }
    if (diff > 1e-10 * (1.0 + scale))
      throw InvalidInput("defect_estimate: the runs do not start from the same data");
  }

  const SpectralOps ops(gf);
  const std::size_t np = gf.points();
  DefectReport rep;
  double energy_scale = 0.0;
  for (std::size_t j = 0; j < fine.size(); ++j) {
    const SpectralState a = resample_state(coarse[j], gf);
    const SpectralState& b = fine[j];
    const auto ea = energy_breakdown(ops, a);
    const auto eb = energy_breakdown(ops, b);
    if (j == 0) energy_scale = eb.kinetic + eb.p_energy + eb.elastic + std::abs(eb.bulk_g);
    const double d = ea.total_g() - eb.total_g();
    rep.times.push_back(b.t);
    rep.dissipation_raw.push_back(d);
    rep.dissipation.push_back(std::max(d, 0.0));

    const auto dqa = detail::gradients(ops, ops.forward(a.q));
    const auto dqb = detail::gradients(ops, ops.forward(b.q));
    Real f1(np), f2(np);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < np; ++i) {
      const Mat3 pa = tensor_at(a.p, i).to_matrix();
      const Mat3 pb = tensor_at(b.p, i).to_matrix();
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
          double sa = 0.0, sb = 0.0;
          for (std::size_t c = 0; c < 5; ++c) {
            sa += dqa[c][x][i] * dqa[c][y][i];
            sb += dqb[c][x][i] * dqb[c][y][i];
          }
          s1 += std::abs(a.v[x][i] * a.v[y][i] - b.v[x][i] * b.v[y][i]) + std::abs(sa - sb);
          for (int z = 0; z < 3; ++z)
            s2 += std::abs(a.v[x][i] * pa(static_cast<int>(y), z) - b.v[x][i] * pb(static_cast<int>(y), z));
        }
      f1[i] = s1;
      f2[i] = s2;
    }
    rep.r1.push_back(ops.integrate(f1));
    rep.r2.push_back(ops.integrate(f2));
  }
  std::vector<double> rsum(rep.r1.size());
  for (std::size_t j = 0; j < rsum.size(); ++j) rsum[j] = rep.r1[j] + rep.r2[j];
  rep.cumulative_r = cumulative_trapezoid(rep.times, rsum);
  rep.cumulative_d = cumulative_trapezoid(rep.times, rep.dissipation);

  const double tiny = 1e-14 * std::max(energy_scale, std::numeric_limits<double>::min());
  bool any = false;
  double sup = 0.0;
  for (std::size_t j = 1; j < rep.times.size(); ++j) {
    if (rep.cumulative_d[j] > tiny * (rep.times[j] - rep.times[0])) {
      any = true;
      sup = std::max(sup, rep.cumulative_r[j] / rep.cumulative_d[j]);
    }
  }
  if (any)
    rep.ddi_constant = sup;
  else
    rep.ddi_constant = rep.cumulative_r.back() > tiny ? std::numeric_limits<double>::infinity() : 0.0;
  return rep;
}

}  // namespace qshyp
