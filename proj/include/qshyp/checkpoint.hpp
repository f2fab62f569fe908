#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qshyp/dynamics.hpp"

namespace qshyp {

/// Binary state file, all little-endian:
///
///   "QSHYP1"                    6 bytes
///   version                     uint32 (= 1)
///   n, dims                     uint32 each
///   t                           float64
///   a, b, c, lambda, q, C       float64 each
///   basis id                    uint32 (= kBasisId)
///   payload                     13 * n^dims float64: v (3), Q (5), P (5),
///                               each component x-fastest
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 6 + 4 + 4 + 4 + 8 + 6 * 8 + 4;

std::vector<unsigned char> checkpoint_encode(const SpectralState& s);
/// Throws CheckpointError on any inconsistency; never returns partial state.
SpectralState checkpoint_decode(const std::vector<unsigned char>& bytes, const std::string& source = "<memory>");

/// Written to a temporary file in the same directory, then renamed.
void checkpoint_save(const SpectralState& s, const std::string& path);
SpectralState checkpoint_load(const std::string& path);

/// Writes bytes to path atomically (temporary file, then rename).
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace qshyp
