#include "qshyp/initial_data.hpp"

#include <cmath>
#include <random>

#include "field_util.hpp"
#include "qshyp/checkpoint.hpp"
#include "qshyp/errors.hpp"

namespace qshyp {

namespace {

using cplx = std::complex<double>;

void add_tensor(TensorField& f, std::size_t i, int basis_index, double value) {
  f[static_cast<std::size_t>(basis_index)][i] += value;
}

std::size_t spectral_index(const Grid& g, int kx, int ky, int kz) {
  const int iy = ky < 0 ? ky + g.n() : ky;
  const int iz = g.dims() == 3 ? (kz < 0 ? kz + g.n() : kz) : 0;
  return static_cast<std::size_t>(kx) +
         static_cast<std::size_t>(g.nx_half()) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(g.n()) * static_cast<std::size_t>(iz));
}

// One independent random field with C components, drawn mode by mode in an
// order that depends only on the band.
template <std::size_t C>
SpectralComponents<C> random_spectrum(const Grid& g, int band, std::uint64_t seed, std::uint64_t tag, double exponent) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto r = zero_spectra<C>(g);
  const int zb = g.dims() == 3 ? band : 0;
  for (int kz = -zb; kz <= zb; ++kz)
    for (int ky = -band; ky <= band; ++ky)
      for (int kx = 0; kx <= band; ++kx) {
        const bool upper = kx > 0 || (kx == 0 && (ky > 0 || (ky == 0 && kz > 0)));
        if (!upper) continue;
        const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double decay = std::pow(1.0 + k2, -exponent);
        for (std::size_t c = 0; c < C; ++c) {
          const double re = normal(rng);
          const double im = normal(rng);
          const cplx z = decay * cplx{re, im};
          r[c][spectral_index(g, kx, ky, kz)] = z;
          if (kx == 0) r[c][spectral_index(g, 0, -ky, -kz)] = std::conj(z);
        }
      }
  return r;
}

template <std::size_t C>
void scale_to_rms(const SpectralOps& ops, Components<C>& f, double amp) {
  const auto h = ops.forward(f);
  double ms = 0.0;
  for (const auto& c : h) ms += ops.mean_product(c, c);
  const double s = ms > 0.0 ? amp / std::sqrt(ms) : 0.0;
  for (auto& c : f)
    for (double& x : c) x *= s;
}

}  // namespace

SpectralState taylor_green_state(const Grid& g, const PotentialParams& params, double av, double aq, double ap) {
  SpectralState s = SpectralState::zero(g, params);
  const bool three = g.dims() == 3;
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto x = g.point(i);
    const double cz = three ? std::cos(x[2]) : 1.0;
    s.v[0][i] = av * std::sin(x[0]) * std::cos(x[1]) * cz;
    s.v[1][i] = -av * std::cos(x[0]) * std::sin(x[1]) * cz;
    add_tensor(s.q, i, 0, aq * std::sin(x[0]));
    add_tensor(s.q, i, 2, aq * std::cos(x[1]));
    add_tensor(s.q, i, 3, aq * std::sin(x[0] + x[1]));
    if (three) add_tensor(s.q, i, 4, aq * std::sin(x[2]));
    add_tensor(s.p, i, 1, ap * std::cos(x[0]));
    add_tensor(s.p, i, 4, ap * std::sin(x[1]));
  }
  return s;
}

SpectralState random_bandlimited_state(const Grid& g, const PotentialParams& params, double av, double aq, double ap,
                                       int band, std::uint64_t seed) {
  if (band < 1 || band > g.dealias_cutoff()) throw InvalidInput("random_bandlimited: band must lie in [1, n/3]");
  const SpectralOps ops(g);
  auto vh = random_spectrum<3>(g, band, seed, 0, 1.0);
  ops.leray_project(vh);
  const auto qh = random_spectrum<5>(g, band, seed, 1, 1.5);
  const auto ph = random_spectrum<5>(g, band, seed, 2, 1.0);
  SpectralState s{g, 0.0, ops.inverse(vh), ops.inverse(qh), ops.inverse(ph), params};
  scale_to_rms(ops, s.v, av);
  scale_to_rms(ops, s.q, aq);
  scale_to_rms(ops, s.p, ap);
  return s;
}

ManufacturedSolution::ManufacturedSolution(const Grid& grid, const PotentialParams& params, double av, double aq,
                                           double ap, DynamicsOptions options)
    : grid_(grid), params_(params), amp_v_(av), amp_q_(aq), amp_p_(ap) {
  options.forcing = nullptr;
  unforced_ = std::make_shared<const Dynamics>(grid, std::move(options));
}

SpectralState ManufacturedSolution::evaluate(double t, bool d) const {
  SpectralState s = SpectralState::zero(grid_, params_);
  s.t = t;
  const double ct = d ? -std::sin(t) : std::cos(t);
  for (std::size_t i = 0; i < grid_.points(); ++i) {
    const auto p = grid_.point(i);
    const double x = p[0], y = p[1];
    s.v[0][i] = amp_v_ * ct * std::sin(y);
    s.v[1][i] = amp_v_ * ct * std::sin(x);
    if (!d) {
      add_tensor(s.q, i, 0, amp_q_ * std::cos(x - t));
      add_tensor(s.q, i, 2, amp_q_ * std::cos(x) * std::sin(y + t));
      add_tensor(s.p, i, 1, amp_p_ * std::sin(x + t));
      add_tensor(s.p, i, 3, amp_p_ * std::cos(y) * std::cos(2.0 * t));
    } else {
      add_tensor(s.q, i, 0, amp_q_ * std::sin(x - t));
      add_tensor(s.q, i, 2, amp_q_ * std::cos(x) * std::cos(y + t));
      add_tensor(s.p, i, 1, amp_p_ * std::cos(x + t));
      add_tensor(s.p, i, 3, -2.0 * amp_p_ * std::cos(y) * std::sin(2.0 * t));
    }
  }
  return s;
}

SpectralState ManufacturedSolution::exact(double t) const { return evaluate(t, false); }
SpectralState ManufacturedSolution::time_derivative(double t) const { return evaluate(t, true); }

Forcing ManufacturedSolution::forcing() const {
  auto self = std::make_shared<const ManufacturedSolution>(*this);
  return [self](double t, ForcingFields& out) {
    const SpectralState u = self->exact(t);
    const SpectralState du = self->time_derivative(t);
    const RhsBundle r = self->unforced_->rhs(u);
    const std::size_t np = self->grid_.points();
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < np; ++i) out.v[c][i] = du.v[c][i] - r.v_dot[c][i];
    for (std::size_t c = 0; c < 5; ++c)
      for (std::size_t i = 0; i < np; ++i) {
        out.q[c][i] = du.q[c][i] - r.q_dot[c][i];
        out.p[c][i] = du.p[c][i] - r.p_dot[c][i];
      }
  };
}

InitialData make_initial_data(const RunConfig& cfg) {
  validate_config(cfg);
  const Grid g = cfg.grid();
  const auto& in = cfg.initial;
  if (in.kind == "taylor_green") return {taylor_green_state(g, cfg.potential, in.amp_v, in.amp_q, in.amp_p), {}};
  if (in.kind == "random_bandlimited")
    return {random_bandlimited_state(g, cfg.potential, in.amp_v, in.amp_q, in.amp_p, in.band, in.seed), {}};
  if (in.kind == "manufactured") {
    const ManufacturedSolution m(g, cfg.potential, in.amp_v, in.amp_q, in.amp_p, cfg.dynamics_options());
    return {m.exact(0.0), m.forcing()};
  }
  SpectralState s = checkpoint_load(in.checkpoint);
  if (!(s.grid == g))
    throw InvalidInput("checkpoint grid (n = " + std::to_string(s.grid.n()) + ", dims = " +
                       std::to_string(s.grid.dims()) + ") differs from the configured grid");
  s.params = cfg.potential;
  return {std::move(s), {}};
}

}  // namespace qshyp
