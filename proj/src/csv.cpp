#include "qshyp/csv.hpp"

#include "qshyp/checkpoint.hpp"
#include "qshyp/config.hpp"
#include "qshyp/errors.hpp"

namespace qshyp {

std::string diagnostics_header() {
  return "t,E_kin,E_P,E_elastic,E_bulk_F,E_bulk_G,E_total_F,E_total_G,balance_residual,helicity,max_div_v,"
         "max_trace_Q,loop_circulation,vort_res_plus,vort_res_minus";
}

std::string format_diagnostics(std::span<const DiagnosticsRecord> records) {
  if (records.empty()) throw InvalidInput("refusing to write a diagnostics table without records");
  std::string out = diagnostics_header() + "\n";
  for (const auto& r : records) {
    const double cols[] = {r.t,         r.E_kin,         r.E_P,          r.E_elastic,      r.E_bulk_F,
                           r.E_bulk_G,  r.E_total_F,     r.E_total_G,    r.balance_residual, r.helicity,
                           r.max_div_v, r.max_trace_Q,   r.loop_circulation, r.vort_res_plus, r.vort_res_minus};
    bool first = true;
    for (double x : cols) {
      if (!first) out += ',';
      out += format_double(x);
      first = false;
    }
    out += '\n';
  }
  return out;
}

void write_diagnostics(std::span<const DiagnosticsRecord> records, const std::string& path) {
  write_file_atomic(path, format_diagnostics(records));
}

}  // namespace qshyp
