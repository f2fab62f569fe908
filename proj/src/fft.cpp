#include "qshyp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "qshyp/errors.hpp"

namespace qshyp {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
  }
};

Fft::Fft(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  std::lock_guard lock(planner_mutex());
  plans_->real = fftw_alloc_real(grid_.points());
  plans_->spec = fftw_alloc_complex(grid_.modes());
  const int n = grid_.n();
  if (grid_.dims() == 3) {
    plans_->r2c = fftw_plan_dft_r2c_3d(n, n, n, plans_->real, plans_->spec, FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r_3d(n, n, n, plans_->spec, plans_->real, FFTW_ESTIMATE);
  } else {
    plans_->r2c = fftw_plan_dft_r2c_2d(n, n, plans_->real, plans_->spec, FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r_2d(n, n, plans_->spec, plans_->real, FFTW_ESTIMATE);
  }
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != grid_.points() || out.size() != grid_.modes())
    throw InvalidInput("Fft::forward: size mismatch with grid");
  std::copy(in.begin(), in.end(), plans_->real);
  fftw_execute(plans_->r2c);
  const double scale = 1.0 / static_cast<double>(grid_.points());
  auto* s = reinterpret_cast<const std::complex<double>*>(plans_->spec);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = s[k] * scale;
}

void Fft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != grid_.modes() || out.size() != grid_.points())
    throw InvalidInput("Fft::inverse: size mismatch with grid");
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(plans_->spec));
  fftw_execute(plans_->c2r);
  std::copy(plans_->real, plans_->real + out.size(), out.begin());
}

}  // namespace qshyp
