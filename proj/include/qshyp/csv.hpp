#pragma once

#include <span>
#include <string>

#include "qshyp/diagnostics.hpp"

namespace qshyp {

/// Header line of the diagnostics table (without the newline).
std::string diagnostics_header();

/// Header plus one row per record, 17 significant digits, LF endings.
/// Throws InvalidInput for an empty record list.
std::string format_diagnostics(std::span<const DiagnosticsRecord> records);

/// format_diagnostics written atomically to path.
void write_diagnostics(std::span<const DiagnosticsRecord> records, const std::string& path);

}  // namespace qshyp
