#include "qshyp/resample.hpp"

#include "qshyp/errors.hpp"

namespace qshyp {

namespace {

template <std::size_t C>
Components<C> transfer(const SpectralOps& from, const Components<C>& f, const SpectralOps& to) {
  Components<C> r;
  for (std::size_t c = 0; c < C; ++c)
    r[c] = to.inverse(transfer_modes(from.grid(), from.forward(f[c]), to.grid()));
  return r;
}

}  // namespace

SpectralState resample_state(const SpectralState& s, const Grid& to) {
  if (s.grid.dims() != to.dims()) throw InvalidInput("resample: grids differ in dims");
  if (s.grid == to) return s;
  const SpectralOps from_ops(s.grid);
  const SpectralOps to_ops(to);
  SpectralState r{to, s.t, transfer(from_ops, s.v, to_ops), transfer(from_ops, s.q, to_ops),
                  transfer(from_ops, s.p, to_ops), s.params};
  return r;
}

SpectralState restrict_state(const SpectralState& s, const Grid& coarse) {
  if (!(coarse.n() < s.grid.n())) throw InvalidInput("restrict: target grid is not coarser");
  return resample_state(s, coarse);
}

SpectralState prolong_state(const SpectralState& s, const Grid& fine) {
  if (!(fine.n() > s.grid.n())) throw InvalidInput("prolong: target grid is not finer");
  return resample_state(s, fine);
}

}  // namespace qshyp
