#include "qshyp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qshyp/errors.hpp"
#include "qshyp/summation.hpp"

namespace qshyp {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
// Relative size below which a projected mode is treated as roundoff.
constexpr double kCancellation = 64.0 * 2.220446049250313e-16;

// Basis factors e^{i k x} along one axis for every FFT index; the Nyquist
// index gets cos(n/2 x).
std::vector<cplx> axis_factors(int n, int count, double x, bool half) {
  std::vector<cplx> e(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int k = half ? i : (i <= n / 2 ? i : i - n);
    if (k == n / 2 || k == -n / 2)
      e[static_cast<std::size_t>(i)] = {std::cos(k * x), 0.0};
    else
      e[static_cast<std::size_t>(i)] = {std::cos(k * x), std::sin(k * x)};
  }
  return e;
}

}  // namespace

SpectralOps::SpectralOps(const Grid& grid) : fft_(grid) {}

Spectrum SpectralOps::forward(const Real& f) const {
  Spectrum r(grid().modes());
  fft_.forward(f, r);
  return r;
}

Real SpectralOps::inverse(const Spectrum& f) const {
  Real r(grid().points());
  fft_.inverse(f, r);
  return r;
}

std::array<double, 3> SpectralOps::derivative_wavevector(std::size_t idx) const noexcept {
  const Grid& g = grid();
  auto k = g.mode(idx);
  std::array<double, 3> r{};
  for (int a = 0; a < 3; ++a) {
    const int ka = k[static_cast<std::size_t>(a)];
    r[static_cast<std::size_t>(a)] = (std::abs(ka) == g.n() / 2) ? 0.0 : static_cast<double>(ka);
  }
  return r;
}

Spectrum SpectralOps::derivative(const Spectrum& f, int axis) const {
  if (axis < 0 || axis > 2) throw InvalidInput("derivative: axis must be 0, 1 or 2");
  if (f.size() != grid().modes()) throw InvalidInput("derivative: size mismatch");
  Spectrum r(f.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = derivative_wavevector(i)[static_cast<std::size_t>(axis)];
    r[i] = kI * k * f[i];
  }
  return r;
}

Spectrum SpectralOps::laplacian(const Spectrum& f) const {
  if (f.size() != grid().modes()) throw InvalidInput("laplacian: size mismatch");
  Spectrum r(f.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = grid().mode(i);
    const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    r[i] = -k2 * f[i];
  }
  return r;
}

Spectrum SpectralOps::inverse_negative_laplacian(const Spectrum& f) const {
  if (f.size() != grid().modes()) throw InvalidInput("inverse_negative_laplacian: size mismatch");
  Spectrum r(f.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = grid().mode(i);
    const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    r[i] = k2 > 0.0 ? f[i] / k2 : cplx{0.0, 0.0};
  }
  return r;
}

SpectralComponents<3> SpectralOps::gradient(const Spectrum& f) const {
  return {derivative(f, 0), derivative(f, 1), derivative(f, 2)};
}

Spectrum SpectralOps::divergence(const SpectralComponents<3>& v) const {
  Spectrum r(grid().modes());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto k = derivative_wavevector(i);
    r[i] = kI * (k[0] * v[0][i] + k[1] * v[1][i] + k[2] * v[2][i]);
  }
  return r;
}

SpectralComponents<3> SpectralOps::curl(const SpectralComponents<3>& v) const {
  auto r = zero_spectra<3>(grid());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < r[0].size(); ++i) {
    const auto k = derivative_wavevector(i);
    r[0][i] = kI * (k[1] * v[2][i] - k[2] * v[1][i]);
    r[1][i] = kI * (k[2] * v[0][i] - k[0] * v[2][i]);
    r[2][i] = kI * (k[0] * v[1][i] - k[1] * v[0][i]);
  }
  return r;
}

void SpectralOps::dealias(Spectrum& f) const {
  const int cut = grid().dealias_cutoff();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = grid().mode(i);
    if (std::abs(k[0]) > cut || std::abs(k[1]) > cut || std::abs(k[2]) > cut) f[i] = {0.0, 0.0};
  }
}

void SpectralOps::leray_project(SpectralComponents<3>& v) const {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < v[0].size(); ++i) {
    const auto k = derivative_wavevector(i);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) continue;
    const cplx kv = (k[0] * v[0][i] + k[1] * v[1][i] + k[2] * v[2][i]) / k2;
    double in2 = 0.0, out2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      auto& c = v[static_cast<std::size_t>(a)][i];
      in2 += std::norm(c);
      c -= k[static_cast<std::size_t>(a)] * kv;
      out2 += std::norm(c);
    }
    // A mode that was (numerically) a pure gradient leaves cancellation noise
    // with no solenoidal meaning; drop it.
    if (out2 <= kCancellation * kCancellation * in2)
      for (auto& c : v) c[i] = 0.0;
  }
}

double SpectralOps::divergence_ratio(const SpectralComponents<3>& v) const {
  double max_div = 0.0;
  double max_amp = 0.0;
  for (std::size_t i = 0; i < v[0].size(); ++i) {
    const auto k = derivative_wavevector(i);
    max_div = std::max(max_div, std::abs(k[0] * v[0][i] + k[1] * v[1][i] + k[2] * v[2][i]));
    for (const auto& c : v) max_amp = std::max(max_amp, std::abs(c[i]));
  }
  return max_amp > 0.0 ? max_div / max_amp : 0.0;
}

std::vector<double> SpectralOps::evaluate_at_points(const Spectrum& f, std::span<const Point3> pts) const {
  const Spectrum* one[] = {&f};
  auto many = evaluate_at_points(std::span<const Spectrum* const>(one), pts);
  std::vector<double> r(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) r[p] = many[p][0];
  return r;
}

std::vector<std::vector<double>> SpectralOps::evaluate_at_points(std::span<const Spectrum* const> fields,
                                                                 std::span<const Point3> pts) const {
  const Grid& g = grid();
  for (const Spectrum* f : fields)
    if (f->size() != g.modes()) throw InvalidInput("evaluate_at_points: size mismatch");
  const int n = g.n();
  const int nh = g.nx_half();
  const int nz = g.nz();
  std::vector<std::vector<double>> out(pts.size(), std::vector<double>(fields.size(), 0.0));

#pragma omp parallel for schedule(dynamic)
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const auto ex = axis_factors(n, nh, pts[p][0], true);
    const auto ey = axis_factors(n, n, pts[p][1], false);
    const auto ez = g.dims() == 3 ? axis_factors(n, n, pts[p][2], false) : std::vector<cplx>{cplx{1.0, 0.0}};
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const Spectrum& f = *fields[c];
      cplx total{0.0, 0.0};
      for (int iz = 0; iz < nz; ++iz) {
        cplx plane{0.0, 0.0};
        for (int iy = 0; iy < n; ++iy) {
          const std::size_t row = static_cast<std::size_t>(nh) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(n) * iz);
          cplx line = f[row] * ex[0];
          for (int ix = 1; ix < nh - 1; ++ix) line += 2.0 * f[row + static_cast<std::size_t>(ix)] * ex[static_cast<std::size_t>(ix)];
          line += f[row + static_cast<std::size_t>(nh - 1)] * ex[static_cast<std::size_t>(nh - 1)];
          plane += line * ey[static_cast<std::size_t>(iy)];
        }
        total += plane * ez[static_cast<std::size_t>(iz)];
      }
      out[p][c] = total.real();
    }
  }
  return out;
}

double SpectralOps::integrate(const Real& f) const {
  if (f.size() != grid().points()) throw InvalidInput("integrate: size mismatch");
  return grid().cell_volume() * pairwise_sum(f);
}

double SpectralOps::mean_product(const Spectrum& f, const Spectrum& g) const {
  const Grid& gr = grid();
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    terms[i] = gr.hermitian_weight(i) * (f[i].real() * g[i].real() + f[i].imag() * g[i].imag());
  return pairwise_sum(terms);
}

double SpectralOps::mean_gradient_product(const Spectrum& f, const Spectrum& g) const {
  const Grid& gr = grid();
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = derivative_wavevector(i);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    terms[i] = gr.hermitian_weight(i) * k2 * (f[i].real() * g[i].real() + f[i].imag() * g[i].imag());
  }
  return pairwise_sum(terms);
}

Spectrum transfer_modes(const Grid& from, const Spectrum& f, const Grid& to) {
  if (from.dims() != to.dims()) throw InvalidInput("transfer_modes: grids differ in dims");
  if (f.size() != from.modes()) throw InvalidInput("transfer_modes: size mismatch");
  const int keep = std::min(from.n(), to.n()) / 2;  // strict bound |k| < keep
  Spectrum r(to.modes(), cplx{0.0, 0.0});
  const int nz = to.nz();
  for (int iz = 0; iz < nz; ++iz) {
    const int kz = to.dims() == 3 ? to.wavenumber(iz) : 0;
    if (std::abs(kz) >= keep) continue;
    const int fz = kz < 0 ? kz + from.n() : kz;
    for (int iy = 0; iy < to.n(); ++iy) {
      const int ky = to.wavenumber(iy);
      if (std::abs(ky) >= keep) continue;
      const int fy = ky < 0 ? ky + from.n() : ky;
      for (int kx = 0; kx < keep; ++kx) {
        const std::size_t dst = static_cast<std::size_t>(kx) +
                                static_cast<std::size_t>(to.nx_half()) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(to.n()) * iz);
        const std::size_t src = static_cast<std::size_t>(kx) +
                                static_cast<std::size_t>(from.nx_half()) * (static_cast<std::size_t>(fy) + static_cast<std::size_t>(from.n()) * fz);
        r[dst] = f[src];
      }
    }
  }
  return r;
}

}  // namespace qshyp
