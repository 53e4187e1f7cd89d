#include "cacc/csvio.hpp"

#include <cstdio>

namespace cacc {

std::string fmt_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "step,vehicle,position,velocity,u,e,mode,alpha,beta\n";
  for (const TraceRow& row : trace.rows) {
    out << row.step << ',' << row.vehicle << ',' << fmt_float(row.position)
        << ',' << fmt_float(row.velocity) << ',' << fmt_float(row.u) << ','
        << fmt_float(row.e) << ',' << trace_mode_name(row.mode) << ','
        << (row.alpha ? 1 : 0) << ',' << (row.beta ? 1 : 0) << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const RunMetrics& metrics) {
  out << "vehicle,max_abs_e,std_e,std_speed_err,std_speed\n";
  for (std::size_t i = 0; i < metrics.per_vehicle.size(); ++i) {
    const VehicleMetrics& m = metrics.per_vehicle[i];
    out << i << ',' << fmt_float(m.max_abs_e) << ',' << fmt_float(m.std_e)
        << ',' << fmt_float(m.std_speed_err) << ',' << fmt_float(m.std_speed)
        << '\n';
  }
}

void write_compare_csv(std::ostream& out, const ComparisonTable& table) {
  out << "vehicle,scheme,std_e,std_speed_err,std_speed\n";
  for (int i = 0; i < table.n_vehicles; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    out << i << ",dift," << fmt_float(table.dift.std_e[idx]) << ','
        << fmt_float(table.dift.std_speed_err[idx]) << ','
        << fmt_float(table.dift.std_speed[idx]) << '\n';
    out << i << ",fift," << fmt_float(table.fift.std_e[idx]) << ','
        << fmt_float(table.fift.std_speed_err[idx]) << ','
        << fmt_float(table.fift.std_speed[idx]) << '\n';
  }
}

void write_stability_csv(std::ostream& out,
                         const std::vector<StabilityRow>& rows) {
  out << "mode,omega_k,h_d,hinf_norm,argmax_omega,closed_form_stable,"
         "sweep_stable\n";
  for (const StabilityRow& row : rows) {
    out << mode_name(row.mode) << ',' << fmt_float(row.omega_k) << ','
        << fmt_float(row.h_d) << ',' << fmt_float(row.hinf.norm) << ','
        << fmt_float(row.hinf.argmax_omega) << ','
        << (row.closed_form_stable ? "true" : "false") << ','
        << (row.hinf.string_stable ? "true" : "false") << '\n';
  }
}

void write_bode_csv(std::ostream& out, const std::vector<double>& omegas,
                    const std::vector<double>& magnitudes) {
  out << "omega,magnitude\n";
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    out << fmt_float(omegas[i]) << ',' << fmt_float(magnitudes[i]) << '\n';
  }
}

}  // namespace cacc
