#include "qshyp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qshyp/errors.hpp"

namespace qshyp {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// Solenoidality tolerance for states handed to the right-hand side; stage
// states are linear combinations of projected fields, so anything above
// roundoff means the caller broke the invariant.
constexpr double kDivergenceTolerance = 1e-9;

template <std::size_t C>
void require_shape(const Components<C>& f, const Grid& g, const char* name) {
  for (const auto& c : f)
    if (c.size() != g.points())
      throw ContractError(std::string("state field '") + name + "' does not match the grid size");
}

template <std::size_t C>
bool all_finite(const Components<C>& f) {
  for (const auto& c : f)
    for (double x : c)
      if (!std::isfinite(x)) return false;
  return true;
}

TracelessSymTensor tensor_at(const TensorField& f, std::size_t i) {
  TracelessSymTensor t;
  for (std::size_t c = 0; c < 5; ++c) t.c[c] = f[c][i];
  return t;
}

// Gradient of each component: result[c][axis]; the z entries stay empty in 2D.
template <std::size_t C>
std::array<std::array<Real, 3>, C> component_gradients(const SpectralOps& ops, const SpectralComponents<C>& f) {
  const int axes = ops.grid().dims();
  std::array<std::array<Real, 3>, C> r;
  for (std::size_t c = 0; c < C; ++c)
    for (int a = 0; a < axes; ++a) r[c][static_cast<std::size_t>(a)] = ops.inverse(ops.derivative(f[c], a));
  return r;
}

}  // namespace

SpectralState SpectralState::zero(const Grid& grid, const PotentialParams& params) {
  return SpectralState{grid, 0.0, zero_components<3>(grid), zero_components<5>(grid), zero_components<5>(grid),
                       params};
}

Dynamics::Dynamics(const Grid& grid, DynamicsOptions options) : ops_(grid), options_(std::move(options)) {
  if (!(options_.blowup_cap > 0.0)) throw InvalidInput("blow-up cap must be positive");
  if (options_.dealias_potential) padded_ = std::make_unique<SpectralOps>(Grid(2 * grid.n(), grid.dims()));
}

Dynamics::~Dynamics() = default;
Dynamics::Dynamics(Dynamics&&) noexcept = default;
Dynamics& Dynamics::operator=(Dynamics&&) noexcept = default;

void Dynamics::check_state(const SpectralState& s) const {
  if (!(s.grid == grid())) throw ContractError("state grid differs from the dynamics grid");
  require_shape(s.v, grid(), "v");
  require_shape(s.q, grid(), "Q");
  require_shape(s.p, grid(), "P");
  if (!all_finite(s.v) || !all_finite(s.q) || !all_finite(s.p))
    throw ContractError("state contains non-finite values");
  const auto vh = ops_.forward(s.v);
  const double ratio = ops_.divergence_ratio(vh);
  if (ratio > kDivergenceTolerance) {
    std::ostringstream msg;
    msg << "velocity is not solenoidal (max|k.v|/max|v| = " << ratio << ")";
    throw ContractError(msg.str());
  }
}

SymMatrixField Dynamics::stress_tensor(const TensorField& q) const {
  require_shape(q, grid(), "Q");
  auto qh = ops_.forward(q);
  ops_.dealias(qh);
  const auto dq = component_gradients(ops_, qh);
  const int axes = grid().dims();
  auto s = zero_components<6>(grid());
  const std::size_t np = grid().points();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) {
    for (int a = 0; a < axes; ++a)
      for (int b = a; b < axes; ++b) {
        double acc = 0.0;
        for (std::size_t c = 0; c < 5; ++c) acc += dq[c][static_cast<std::size_t>(a)][i] * dq[c][static_cast<std::size_t>(b)][i];
        s[static_cast<std::size_t>(sym_slot(a, b))][i] = acc;
      }
  }
  return s;
}

SpectralComponents<5> Dynamics::bulk_term(const TensorField& q, const SpectralComponents<5>& q_hat,
                                          const PotentialParams& params) const {
  const SpectralOps& work = padded_ ? *padded_ : ops_;
  TensorField q_work;
  if (padded_) {
    for (std::size_t c = 0; c < 5; ++c) q_work[c] = work.inverse(transfer_modes(grid(), q_hat[c], work.grid()));
  }
  const TensorField& src = padded_ ? q_work : q;
  auto out = zero_components<5>(work.grid());
  const std::size_t np = work.grid().points();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) {
    const auto g = bulk_gradient(tensor_at(src, i), params);
    for (std::size_t c = 0; c < 5; ++c) out[c][i] = g.c[c];
  }
  SpectralComponents<5> r = work.forward(out);
  if (padded_)
    for (auto& c : r) c = transfer_modes(work.grid(), c, grid());
  ops_.dealias(r);
  return r;
}

RhsBundle Dynamics::rhs(const SpectralState& s) const {
  const Grid& g = grid();
  if (!(s.grid == g)) throw ContractError("state grid differs from the dynamics grid");
  require_shape(s.v, g, "v");
  require_shape(s.q, g, "Q");
  require_shape(s.p, g, "P");

  auto vh = ops_.forward(s.v);
  auto qh = ops_.forward(s.q);
  auto ph = ops_.forward(s.p);
  ops_.dealias(vh);
  ops_.dealias(qh);
  ops_.dealias(ph);
  if (const double ratio = ops_.divergence_ratio(vh); ratio > kDivergenceTolerance) {
    std::ostringstream msg;
    msg << "rhs: velocity is not solenoidal (max|k.v|/max|v| = " << ratio << ")";
    throw ContractError(msg.str());
  }

  const auto v = ops_.inverse(vh);
  const auto q = ops_.inverse(qh);
  const auto dv = component_gradients(ops_, vh);
  const auto dq = component_gradients(ops_, qh);
  const auto dp = component_gradients(ops_, ph);

  const int axes = g.dims();
  const std::size_t np = g.points();
  auto adv_v = zero_components<3>(g);
  auto adv_q = zero_components<5>(g);
  auto adv_p = zero_components<5>(g);
  auto stress = zero_components<6>(g);
  ScalarField multiplier(np);

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) {
    for (int a = 0; a < axes; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const double va = v[ua][i];
      for (std::size_t c = 0; c < 3; ++c) adv_v[c][i] += va * dv[c][ua][i];
      for (std::size_t c = 0; c < 5; ++c) {
        adv_q[c][i] += va * dq[c][ua][i];
        adv_p[c][i] += va * dp[c][ua][i];
      }
      for (int b = a; b < axes; ++b) {
        double acc = 0.0;
        for (std::size_t c = 0; c < 5; ++c) acc += dq[c][ua][i] * dq[c][static_cast<std::size_t>(b)][i];
        stress[static_cast<std::size_t>(sym_slot(a, b))][i] = acc;
      }
    }
    multiplier[i] = trace_multiplier(tensor_at(q, i), s.params);
  }

  auto adv_v_h = ops_.forward(adv_v);
  auto adv_q_h = ops_.forward(adv_q);
  auto adv_p_h = ops_.forward(adv_p);
  auto stress_h = ops_.forward(stress);
  ops_.dealias(adv_v_h);
  ops_.dealias(adv_q_h);
  ops_.dealias(adv_p_h);
  ops_.dealias(stress_h);
  const auto bulk_h = bulk_term(q, qh, s.params);

  std::optional<ForcingFields> forcing;
  if (options_.forcing) {
    forcing = ForcingFields{zero_components<3>(g), zero_components<5>(g), zero_components<5>(g)};
    options_.forcing(s.t, *forcing);
  }

  // Momentum: g = (v.grad)v + div S, v_dot = Leray(-g + f).
  auto momentum = zero_spectra<3>(g);
  const std::size_t nm = g.modes();
#pragma omp parallel for schedule(static)
  for (std::size_t m = 0; m < nm; ++m) {
    const auto k = ops_.derivative_wavevector(m);
    for (int i = 0; i < 3; ++i) {
      cplx div_s{0.0, 0.0};
      for (int j = 0; j < 3; ++j) div_s += kI * k[static_cast<std::size_t>(j)] * stress_h[static_cast<std::size_t>(sym_slot(i, j))][m];
      momentum[static_cast<std::size_t>(i)][m] = adv_v_h[static_cast<std::size_t>(i)][m] + div_s;
    }
  }
  ScalarField pressure = ops_.inverse(ops_.inverse_negative_laplacian(ops_.divergence(momentum)));

  SpectralComponents<3> v_dot_h;
  for (std::size_t c = 0; c < 3; ++c) {
    v_dot_h[c].resize(nm);
    for (std::size_t m = 0; m < nm; ++m) v_dot_h[c][m] = -momentum[c][m];
  }
  if (forcing) {
    auto fv = ops_.forward(forcing->v);
    ops_.dealias(fv);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t m = 0; m < nm; ++m) v_dot_h[c][m] += fv[c][m];
  }
  ops_.leray_project(v_dot_h);

  SpectralComponents<5> q_dot_h;
  SpectralComponents<5> p_dot_h;
  for (std::size_t c = 0; c < 5; ++c) {
    const Spectrum lap = ops_.laplacian(qh[c]);
    q_dot_h[c].resize(nm);
    p_dot_h[c].resize(nm);
    for (std::size_t m = 0; m < nm; ++m) {
      q_dot_h[c][m] = -adv_q_h[c][m] + ph[c][m];
      p_dot_h[c][m] = -adv_p_h[c][m] - bulk_h[c][m] + lap[m];
    }
  }
  if (forcing) {
    auto fq = ops_.forward(forcing->q);
    auto fp = ops_.forward(forcing->p);
    ops_.dealias(fq);
    ops_.dealias(fp);
    for (std::size_t c = 0; c < 5; ++c)
      for (std::size_t m = 0; m < nm; ++m) {
        q_dot_h[c][m] += fq[c][m];
        p_dot_h[c][m] += fp[c][m];
      }
  }

  return RhsBundle{ops_.inverse(v_dot_h), ops_.inverse(q_dot_h), ops_.inverse(p_dot_h), std::move(multiplier),
                   std::move(pressure)};
}

double Dynamics::max_velocity(const SpectralState& s) const {
  double m = 0.0;
  for (std::size_t i = 0; i < grid().points(); ++i)
    m = std::max(m, std::sqrt(s.v[0][i] * s.v[0][i] + s.v[1][i] * s.v[1][i] + s.v[2][i] * s.v[2][i]));
  return m;
}

double Dynamics::max_tensor_gradient(const SpectralState& s) const {
  const auto qh = ops_.forward(s.q);
  const auto dq = component_gradients(ops_, qh);
  const int axes = grid().dims();
  double m = 0.0;
  for (std::size_t i = 0; i < grid().points(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < 5; ++c)
      for (int a = 0; a < axes; ++a) acc += dq[c][static_cast<std::size_t>(a)][i] * dq[c][static_cast<std::size_t>(a)][i];
    m = std::max(m, std::sqrt(acc));
  }
  return m;
}

double Dynamics::cfl_dt(const SpectralState& s, double safety) const {
  if (!(safety > 0.0 && safety <= 1.0)) throw InvalidInput("cfl safety must lie in (0, 1]");
  return safety / (grid().dealias_cutoff() * (max_velocity(s) + 1.0));
}

SpectralState axpy(const SpectralState& x, double alpha, const RhsBundle& k) {
  SpectralState r = x;
  r.t = x.t + alpha;
  const std::size_t np = x.grid.points();
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < np; ++i) r.v[c][i] += alpha * k.v_dot[c][i];
  for (std::size_t c = 0; c < 5; ++c)
    for (std::size_t i = 0; i < np; ++i) {
      r.q[c][i] += alpha * k.q_dot[c][i];
      r.p[c][i] += alpha * k.p_dot[c][i];
    }
  return r;
}

SpectralState Dynamics::step_rk4(const SpectralState& s, double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("step_rk4: dt must be positive");
  const RhsBundle k1 = rhs(s);
  const RhsBundle k2 = rhs(axpy(s, 0.5 * dt, k1));
  const RhsBundle k3 = rhs(axpy(s, 0.5 * dt, k2));
  const RhsBundle k4 = rhs(axpy(s, dt, k3));

  SpectralState r = s;
  r.t = s.t + dt;
  const double w = dt / 6.0;
  const std::size_t np = grid().points();
  auto combine = [&](Real& out, const Real& a, const Real& b, const Real& c, const Real& d) {
    for (std::size_t i = 0; i < np; ++i) out[i] += w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  };
  for (std::size_t c = 0; c < 3; ++c) combine(r.v[c], k1.v_dot[c], k2.v_dot[c], k3.v_dot[c], k4.v_dot[c]);
  for (std::size_t c = 0; c < 5; ++c) {
    combine(r.q[c], k1.q_dot[c], k2.q_dot[c], k3.q_dot[c], k4.q_dot[c]);
    combine(r.p[c], k1.p_dot[c], k2.p_dot[c], k3.p_dot[c], k4.p_dot[c]);
  }

  if (!all_finite(r.v) || !all_finite(r.q) || !all_finite(r.p)) {
    std::ostringstream msg;
    msg << "non-finite values at t = " << r.t;
    throw BlowUpError(r.t, msg.str());
  }
  const double vmax = max_velocity(r);
  const double gmax = max_tensor_gradient(r);
  if (vmax > options_.blowup_cap || gmax > options_.blowup_cap) {
    std::ostringstream msg;
    msg << "blow-up cap " << options_.blowup_cap << " exceeded at t = " << r.t << " (|v|_inf = " << vmax
        << ", |grad Q|_inf = " << gmax << ")";
    throw BlowUpError(r.t, msg.str());
  }
  return r;
}

std::size_t steps_for_interval(double length, double dt) {
  if (!(length > 0.0)) return 0;
  if (!(dt > 0.0)) throw InvalidInput("steps_for_interval: dt must be positive");
  const double ratio = length / dt;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio)));
}

Trajectory integrate(const Dynamics& dynamics, const SpectralState& initial, const IntegrationSettings& settings) {
  if (!(settings.snapshot_interval > 0.0)) throw InvalidInput("snapshot interval must be positive");
  if (settings.dt_fixed < 0.0) throw InvalidInput("fixed dt must be >= 0");
  dynamics.check_state(initial);

  Trajectory tr;
  tr.snapshots.push_back(initial);
  const double t0 = initial.t;
  if (!(settings.t_end > t0)) return tr;

  const auto intervals = static_cast<std::size_t>(
      std::max(1.0, std::ceil((settings.t_end - t0) / settings.snapshot_interval - 1e-9)));
  SpectralState state = initial;
  try {
    for (std::size_t k = 1; k <= intervals; ++k) {
      const double target = k == intervals ? settings.t_end : t0 + static_cast<double>(k) * settings.snapshot_interval;
      const double dt = settings.dt_fixed > 0.0 ? settings.dt_fixed : dynamics.cfl_dt(state, settings.cfl_safety);
      const std::size_t m = steps_for_interval(target - state.t, dt);
      const double h = (target - state.t) / static_cast<double>(m);
      for (std::size_t s = 0; s < m; ++s) {
        state = dynamics.step_rk4(state, h);
        ++tr.steps;
      }
      state.t = target;
      tr.snapshots.push_back(state);
    }
  } catch (const BlowUpError& e) {
    tr.blew_up = true;
    tr.blowup_time = e.time();
    tr.blowup_message = e.what();
  }
  return tr;
}

}  // namespace qshyp
