#include "qshyp/grid.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qshyp/errors.hpp"

namespace qshyp {

Grid::Grid(int n, int dims) : n_(n), dims_(dims) {
  if (n < 8 || n % 2 != 0)
    throw InvalidInput("grid resolution must be even and >= 8, got " + std::to_string(n));
  if (dims != 2 && dims != 3)
    throw InvalidInput("grid dims must be 2 or 3, got " + std::to_string(dims));
}

std::size_t Grid::points() const noexcept {
  return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(nz());
}

std::size_t Grid::modes() const noexcept {
  return static_cast<std::size_t>(nx_half()) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(nz());
}

double Grid::volume() const noexcept { return std::pow(kTwoPi, dims_); }

double Grid::cell_volume() const noexcept { return std::pow(kTwoPi / n_, dims_); }

std::array<double, 3> Grid::point(std::size_t idx) const noexcept {
  const auto nn = static_cast<std::size_t>(n_);
  const int i = static_cast<int>(idx % nn);
  const int j = static_cast<int>((idx / nn) % nn);
  const int k = static_cast<int>(idx / (nn * nn));
  return {coord(i), coord(j), coord(k)};
}

std::array<int, 3> Grid::mode(std::size_t idx) const noexcept {
  const auto nh = static_cast<std::size_t>(nx_half());
  const auto nn = static_cast<std::size_t>(n_);
  const int kx = static_cast<int>(idx % nh);
  const int iy = static_cast<int>((idx / nh) % nn);
  const int iz = static_cast<int>(idx / (nh * nn));
  return {kx, wavenumber(iy), dims_ == 3 ? wavenumber(iz) : 0};
}

double Grid::hermitian_weight(std::size_t idx) const noexcept {
  const int kx = static_cast<int>(idx % static_cast<std::size_t>(nx_half()));
  return (kx == 0 || kx == n_ / 2) ? 1.0 : 2.0;
}

bool Grid::is_nyquist(const std::array<int, 3>& k) const noexcept {
  const int h = n_ / 2;
  return std::abs(k[0]) == h || std::abs(k[1]) == h || (dims_ == 3 && std::abs(k[2]) == h);
}

int sym_slot(int i, int j) noexcept {
  if (i == j) return i;
  if (i > j) std::swap(i, j);
  if (i == 0) return j == 1 ? 3 : 4;
  return 5;
}

}  // namespace qshyp
