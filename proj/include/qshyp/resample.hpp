#pragma once

#include "qshyp/dynamics.hpp"

namespace qshyp {

/// Spectral truncation of a state onto a coarser grid of the same dims.
/// Throws InvalidInput if the target is not coarser.
SpectralState restrict_state(const SpectralState& s, const Grid& coarse);

/// Zero padding of a state onto a finer grid of the same dims. Throws
/// InvalidInput if the target is not finer.
SpectralState prolong_state(const SpectralState& s, const Grid& fine);

/// Either of the above, or a copy when the grids agree. Modes with
/// |k_axis| >= min(n)/2 are dropped, so prolongation followed by restriction
/// is the identity on band-limited data and solenoidal fields stay solenoidal.
SpectralState resample_state(const SpectralState& s, const Grid& to);

}  // namespace qshyp
