#pragma once

#include <complex>
#include <memory>
#include <span>

#include "qshyp/grid.hpp"

namespace qshyp {

/// Real-to-complex FFT pair on a Grid.
///
/// forward divides by the number of points, so the k = 0 coefficient is the
/// grid mean and inverse(forward(f)) == f. Plans are built once with
/// FFTW_ESTIMATE (deterministic planning) on internally owned aligned
/// buffers; calls copy through those buffers, so one Fft must not be used
/// from several threads at once.
class Fft {
 public:
  explicit Fft(const Grid& grid);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace qshyp
