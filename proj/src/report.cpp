#include "qshyp/report.hpp"

#include <sstream>

#include "qshyp/config.hpp"

namespace qshyp {

namespace {

std::string tensor_str(const TracelessSymTensor& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.c.size(); ++i) s += (i ? ", " : "") + format_double(t.c[i]);
  return s + "]";
}

std::string matrix_str(const Mat3& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < 9; ++i) s += (i ? (i % 3 == 0 ? "; " : ", ") : "") + format_double(m.m[i]);
  return s + "]";
}

const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace

std::string format_assumption_report(const AssumptionReport& r, const PotentialParams& p) {
  std::ostringstream o;
  o << "samples: " << r.samples << '\n'
    << "radius: " << format_double(r.radius) << '\n'
    << "seed: " << r.seed << '\n'
    << "params: a=" << format_double(p.a) << " b=" << format_double(p.b) << " c=" << format_double(p.c)
    << " lambda=" << format_double(p.lambda) << " q=" << format_double(p.q)
    << " growth_const=" << format_double(p.growth_const) << '\n'
    << "isotropy: " << verdict(r.isotropy_ok) << '\n'
    << "isotropy_worst_gap: " << format_double(r.isotropy_worst_gap) << '\n';
  if (!r.isotropy_ok)
    o << "isotropy_witness_q: " << tensor_str(r.isotropy_witness_q) << '\n'
      << "isotropy_witness_rotation: " << matrix_str(r.isotropy_witness_rotation) << '\n';
  o << "convexity: " << verdict(r.convexity_ok) << '\n'
    << "convexity_worst_gap: " << format_double(r.convexity_worst_gap) << '\n'
    << "min_G: " << format_double(r.min_g) << '\n'
    << "min_hessian_eigenvalue: " << format_double(r.min_curvature) << '\n'
    << "lambda_ray_threshold: " << format_double(r.ray_threshold) << '\n'
    << "lambda_global_threshold: " << format_double(r.global_threshold) << '\n';
  if (!r.convexity_ok)
    o << "convexity_witness_q1: " << tensor_str(r.convexity_witness_q1) << '\n'
      << "convexity_witness_q2: " << tensor_str(r.convexity_witness_q2) << '\n'
      << "min_G_witness: " << tensor_str(r.min_g_witness) << '\n';
  o << "growth: " << verdict(r.growth_ok) << '\n'
    << "growth_worst_ratio: " << format_double(r.growth_worst_ratio) << '\n';
  if (!r.growth_ok) o << "growth_witness: " << tensor_str(r.growth_witness) << '\n';
  o << "overall: " << verdict(r.all_ok()) << '\n';
  return o.str();
}

std::string format_gronwall(const GronwallResult& g) {
  std::ostringstream o;
  o << "t,rel_energy,envelope,rate,integrated_rate\n";
  for (std::size_t j = 0; j < g.times.size(); ++j)
    o << format_double(g.times[j]) << ',' << format_double(g.rel_energy[j]) << ',' << format_double(g.envelope[j])
      << ',' << format_double(g.rate[j]) << ',' << format_double(g.integrated_rate[j]) << '\n';
  o << "gronwall_c_fitted: " << format_double(g.c_fitted) << '\n'
    << "gronwall_c_used: " << format_double(g.c_used) << '\n'
    << "gronwall_floor: " << format_double(g.floor) << '\n'
    << "reference_spectral_tail: " << format_double(g.worst_tail) << '\n'
    << "gronwall: " << verdict(g.pass) << '\n';
  return o.str();
}

std::string format_defect_report(const DefectReport& d) {
  std::ostringstream o;
  o << "t,R1,R2,D,D_raw\n";
  for (std::size_t j = 0; j < d.times.size(); ++j)
    o << format_double(d.times[j]) << ',' << format_double(d.r1[j]) << ',' << format_double(d.r2[j]) << ','
      << format_double(d.dissipation[j]) << ',' << format_double(d.dissipation_raw[j]) << '\n';
  o << "ddi_constant: " << format_double(d.ddi_constant) << '\n';
  return o.str();
}

std::string format_weak_residuals(const WeakResidualTable& w, int cutoff) {
  std::ostringstream o;
  o << "weak_cutoff: " << cutoff << '\n'
    << "weak_tests: " << w.tests << '\n'
    << "weak_divergence: " << format_double(w.divergence) << '\n'
    << "weak_momentum: " << format_double(w.momentum) << '\n'
    << "weak_q_equation: " << format_double(w.q_equation) << '\n'
    << "weak_p_equation: " << format_double(w.p_equation) << '\n';
  return o.str();
}

}  // namespace qshyp
