#pragma once

#include <string>

#include "qshyp/defects.hpp"
#include "qshyp/potential.hpp"
#include "qshyp/relative_energy.hpp"

namespace qshyp {

/// "key: value" lines, witnesses included for every failed check.
std::string format_assumption_report(const AssumptionReport& r, const PotentialParams& p);

/// Table of t, relative energy, envelope and rate, then a summary.
std::string format_gronwall(const GronwallResult& g);

std::string format_defect_report(const DefectReport& d);

std::string format_weak_residuals(const WeakResidualTable& w, int cutoff);

}  // namespace qshyp
