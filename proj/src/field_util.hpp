#pragma once

// Internal helpers shared by the diagnostic sources.

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "qshyp/dynamics.hpp"
#include "qshyp/errors.hpp"
#include "qshyp/spectral.hpp"
#include "qshyp/summation.hpp"
#include "qshyp/tensor.hpp"

namespace qshyp::detail {

inline TracelessSymTensor tensor_at(const TensorField& f, std::size_t i) {
  TracelessSymTensor t;
  for (std::size_t c = 0; c < 5; ++c) t.c[c] = f[c][i];
  return t;
}

/// Physical gradients of each component, result[c][axis]; the z entries are
/// zero fields in 2D.
template <std::size_t C>
std::array<std::array<Real, 3>, C> gradients(const SpectralOps& ops, const SpectralComponents<C>& f) {
  std::array<std::array<Real, 3>, C> r;
  for (std::size_t c = 0; c < C; ++c)
    for (int a = 0; a < 3; ++a)
      r[c][static_cast<std::size_t>(a)] = a < ops.grid().dims() ? ops.inverse(ops.derivative(f[c], a))
                                                                 : Real(ops.grid().points(), 0.0);
  return r;
}

template <std::size_t C>
SpectralComponents<C> dealiased(const SpectralOps& ops, const Components<C>& f) {
  auto h = ops.forward(f);
  ops.dealias(h);
  return h;
}

/// Integral of sum_c |f_c|^2 from the spectra.
template <std::size_t C>
double spectral_norm_sq(const SpectralOps& ops, const SpectralComponents<C>& f) {
  double s = 0.0;
  for (const auto& c : f) s += ops.mean_product(c, c);
  return ops.grid().volume() * s;
}

inline void require_same_grid(const SpectralState& a, const SpectralState& b, const char* who) {
  if (!(a.grid == b.grid)) throw InvalidInput(std::string(who) + ": states live on different grids");
}

inline void require_times(std::span<const SpectralState> a, std::span<const SpectralState> b, const char* who) {
  if (a.size() != b.size()) throw InvalidInput(std::string(who) + ": trajectories have different snapshot counts");
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a[j].t - b[j].t) > 1e-12 * (1.0 + std::abs(a[j].t)))
      throw InvalidInput(std::string(who) + ": snapshot times differ");
}

}  // namespace qshyp::detail
