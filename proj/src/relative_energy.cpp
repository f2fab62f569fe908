#include "qshyp/relative_energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "field_util.hpp"
#include "qshyp/diagnostics.hpp"
#include "qshyp/resample.hpp"

namespace qshyp {

namespace {

using detail::tensor_at;

template <std::size_t C>
double max_gradient_norm(const SpectralOps& ops, const SpectralComponents<C>& f) {
  const auto d = detail::gradients(ops, f);
  double m = 0.0;
  for (std::size_t i = 0; i < ops.grid().points(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t a = 0; a < 3; ++a) acc += d[c][a][i] * d[c][a][i];
    m = std::max(m, std::sqrt(acc));
  }
  return m;
}

}  // namespace

double relative_energy(const SpectralOps& ops, const SpectralState& s, const SpectralState& t) {
  detail::require_same_grid(s, t, "relative_energy");
  if (!(s.grid == ops.grid())) throw InvalidInput("relative_energy: state grid differs");
  if (!(s.params == t.params)) throw InvalidInput("relative_energy: potential parameters differ");
  const Grid& g = ops.grid();
  const std::size_t np = g.points();

  Real kin(np);
  Real bulk(np);
  TensorField dq;
  for (std::size_t c = 0; c < 5; ++c) {
    dq[c].resize(np);
    for (std::size_t i = 0; i < np; ++i) dq[c][i] = s.q[c][i] - t.q[c][i];
  }
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < 3; ++a) acc += (s.v[a][i] - t.v[a][i]) * (s.v[a][i] - t.v[a][i]);
    for (std::size_t c = 0; c < 5; ++c) acc += (s.p[c][i] - t.p[c][i]) * (s.p[c][i] - t.p[c][i]);
    kin[i] = acc;
    const auto q = tensor_at(s.q, i);
    const auto qt = tensor_at(t.q, i);
    bulk[i] = g_value(q, s.params) - frobenius_inner(g_gradient(qt, s.params), q - qt) - g_value(qt, s.params);
  }
  const auto dqh = ops.forward(dq);
  double grad = 0.0;
  for (const auto& c : dqh) grad += ops.mean_gradient_product(c, c);
  return 0.5 * ops.integrate(kin) + 0.5 * g.volume() * grad + ops.integrate(bulk);
}

double spectral_tail(const SpectralOps& ops, const SpectralState& s) {
  const Grid& g = ops.grid();
  const auto vh = ops.forward(s.v);
  const auto qh = ops.forward(s.q);
  const auto ph = ops.forward(s.p);
  const double cut = g.n() / 4.0;
  std::vector<double> all(g.modes()), tail(g.modes(), 0.0);
  for (std::size_t m = 0; m < g.modes(); ++m) {
    const auto k = g.mode(m);
    const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    double e = 0.0;
    for (const auto& c : vh) e += std::norm(c[m]);
    for (const auto& c : ph) e += std::norm(c[m]);
    for (const auto& c : qh) e += k2 * std::norm(c[m]);
    all[m] = g.hermitian_weight(m) * e;
    if (std::sqrt(k2) > cut) tail[m] = all[m];
  }
  const double total = pairwise_sum(all);
  return total > 0.0 ? pairwise_sum(tail) / total : 0.0;
}

double stability_rate(const SpectralOps& ops, const SpectralState& t) {
  const Grid& g = ops.grid();
  const auto vh = ops.forward(t.v);
  const auto ph = ops.forward(t.p);
  const auto qh = ops.forward(t.q);
  double lap_max = 0.0;
  {
    SpectralComponents<5> lap;
    for (std::size_t c = 0; c < 5; ++c) lap[c] = ops.laplacian(qh[c]);
    const auto l = ops.inverse(lap);
    for (std::size_t i = 0; i < g.points(); ++i) lap_max = std::max(lap_max, std::sqrt(frobenius_norm_sq(tensor_at(l, i))));
  }
  auto dg = zero_components<5>(g);
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto d = g_gradient(tensor_at(t.q, i), t.params);
    for (std::size_t c = 0; c < 5; ++c) dg[c][i] = d.c[c];
  }
  return 1.0 + max_gradient_norm(ops, vh) + max_gradient_norm(ops, ph) + lap_max +
         max_gradient_norm(ops, ops.forward(dg));
}

GronwallResult gronwall_check(std::span<const SpectralState> weak, std::span<const SpectralState> strong,
                              const GronwallOptions& opt) {
  if (strong.empty()) throw InvalidInput("gronwall_check: empty trajectory");
  detail::require_times(weak, strong, "gronwall_check");
  if (opt.c && !(*opt.c >= 0.0)) throw InvalidInput("gronwall_check: c must be >= 0");
  const Grid& g = strong[0].grid;
  if (weak[0].grid.dims() != g.dims() || weak[0].grid.n() > g.n())
    throw InvalidInput("gronwall_check: the reference must live on a grid at least as fine");
  const SpectralOps ops(g);

  GronwallResult r;
  for (const auto& s : strong) r.worst_tail = std::max(r.worst_tail, spectral_tail(ops, s));
  if (r.worst_tail >= opt.tail_limit) {
    std::ostringstream msg;
    msg << "reference solution is under-resolved: spectral tail " << r.worst_tail << " >= " << opt.tail_limit;
    throw UnresolvedError(r.worst_tail, msg.str());
  }

  for (std::size_t j = 0; j < strong.size(); ++j) {
    const SpectralState w = resample_state(weak[j], g);
    r.times.push_back(strong[j].t);
    r.rel_energy.push_back(relative_energy(ops, w, strong[j]));
    r.rate.push_back(stability_rate(ops, strong[j]));
  }
  r.integrated_rate = cumulative_trapezoid(r.times, r.rate);

  const auto e0 = energy_breakdown(ops, strong[0]);
  r.floor = opt.floor_rel * (e0.kinetic + e0.p_energy + e0.elastic + std::abs(e0.bulk_g));
  const double base = r.rel_energy[0];
  r.c_fitted = 0.0;
  if (base > r.floor) {
    for (std::size_t j = 1; j < r.times.size(); ++j)
      if (r.integrated_rate[j] > 0.0 && r.rel_energy[j] > base)
        r.c_fitted = std::max(r.c_fitted, std::log(r.rel_energy[j] / base) / r.integrated_rate[j]);
  }
  r.c_used = opt.c.value_or(r.c_fitted);
  r.pass = true;
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    r.envelope.push_back(std::max(base, 0.0) * std::exp(r.c_used * r.integrated_rate[j]));
    if (!(r.rel_energy[j] <= r.envelope[j] * (1.0 + 1e-12) + r.floor)) r.pass = false;
  }
  return r;
}

}  // namespace qshyp
