#pragma once

// Seeded generators and independent oracles shared by the unit tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qshyp/dynamics.hpp"
#include "qshyp/grid.hpp"
#include "qshyp/tensor.hpp"

namespace testing {

using qshyp::Grid;
using qshyp::Mat3;
using qshyp::Real;
using qshyp::TracelessSymTensor;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Mat3 random_mat3(std::mt19937_64& rng) {
  Mat3 m;
  for (double& x : m.m) x = uniform(rng);
  return m;
}

inline TracelessSymTensor random_coeffs(std::mt19937_64& rng, double scale = 1.0) {
  TracelessSymTensor t;
  for (double& x : t.c) x = scale * uniform(rng);
  return t;
}

inline double max_abs_diff(const Real& a, const Real& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const Real& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

/// Wavevectors with |k_axis| <= band in one half space (no k = 0).
inline std::vector<std::array<int, 3>> half_space_modes(int band, int dims) {
  std::vector<std::array<int, 3>> ks;
  const int zb = dims == 3 ? band : 0;
  for (int kz = -zb; kz <= zb; ++kz)
    for (int ky = -band; ky <= band; ++ky)
      for (int kx = 0; kx <= band; ++kx)
        if (kx > 0 || (kx == 0 && (ky > 0 || (ky == 0 && kz > 0)))) ks.push_back({kx, ky, kz});
  return ks;
}

/// Random trigonometric polynomial with |k_axis| <= band, summed directly in
/// physical space (no FFT involved).
struct TrigPoly {
  std::vector<std::array<int, 3>> k;
  std::vector<double> a, b;  // a cos(k.x) + b sin(k.x)
  double mean = 0.0;

  double operator()(const std::array<double, 3>& x) const {
    double s = mean;
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double ph = k[j][0] * x[0] + k[j][1] * x[1] + k[j][2] * x[2];
      s += a[j] * std::cos(ph) + b[j] * std::sin(ph);
    }
    return s;
  }
  double derivative(const std::array<double, 3>& x, int axis) const {
    double s = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double ph = k[j][0] * x[0] + k[j][1] * x[1] + k[j][2] * x[2];
      s += k[j][static_cast<std::size_t>(axis)] * (-a[j] * std::sin(ph) + b[j] * std::cos(ph));
    }
    return s;
  }
};

inline TrigPoly random_trig_poly(std::mt19937_64& rng, int band, int dims, bool with_mean = true) {
  TrigPoly p;
  p.k = half_space_modes(band, dims);
  // normalized so the RMS value is about 1/sqrt(3) per unit of scale
  const double w = 1.0 / std::sqrt(static_cast<double>(p.k.size()));
  for (std::size_t j = 0; j < p.k.size(); ++j) {
    p.a.push_back(w * uniform(rng));
    p.b.push_back(w * uniform(rng));
  }
  if (with_mean) p.mean = uniform(rng);
  return p;
}

inline Real sample(const Grid& g, const TrigPoly& p) {
  Real f(g.points());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = p(g.point(i));
  return f;
}

/// Solenoidal field v = curl A for a random trigonometric vector potential,
/// differentiated analytically.
inline qshyp::VectorField random_solenoidal(const Grid& g, std::mt19937_64& rng, int band, double scale = 1.0) {
  const TrigPoly a0 = random_trig_poly(rng, band, g.dims(), false);
  const TrigPoly a1 = random_trig_poly(rng, band, g.dims(), false);
  const TrigPoly a2 = random_trig_poly(rng, band, g.dims(), false);
  qshyp::VectorField v;
  for (auto& c : v) c.resize(g.points());
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto x = g.point(i);
    v[0][i] = scale * (a2.derivative(x, 1) - a1.derivative(x, 2));
    v[1][i] = scale * (a0.derivative(x, 2) - a2.derivative(x, 0));
    v[2][i] = scale * (a1.derivative(x, 0) - a0.derivative(x, 1));
  }
  return v;
}

template <std::size_t C>
qshyp::Components<C> random_components(const Grid& g, std::mt19937_64& rng, int band, double scale = 1.0) {
  qshyp::Components<C> f;
  for (auto& c : f) {
    c = sample(g, random_trig_poly(rng, band, g.dims()));
    for (double& x : c) x *= scale;
  }
  return f;
}

/// Random smooth state with band-limited fields and a solenoidal velocity.
inline qshyp::SpectralState random_state(const Grid& g, std::mt19937_64& rng, int band, double scale,
                                         const qshyp::PotentialParams& params = {}) {
  qshyp::SpectralState s = qshyp::SpectralState::zero(g, params);
  s.v = random_solenoidal(g, rng, band, scale);
  s.q = random_components<5>(g, rng, band, scale);
  s.p = random_components<5>(g, rng, band, scale);
  return s;
}

/// Direct DFT coefficient mean(f e^{-ik.x}).
inline std::complex<double> naive_coefficient(const Grid& g, const Real& f, const std::array<int, 3>& k) {
  std::complex<double> s{0.0, 0.0};
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto x = g.point(i);
    const double ph = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
    s += f[i] * std::complex<double>(std::cos(ph), -std::sin(ph));
  }
  return s / static_cast<double>(g.points());
}

}  // namespace testing
