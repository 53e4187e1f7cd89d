#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cacc/sim.hpp"
#include "cacc/stability.hpp"

namespace cacc {

// Shortest decimal form at 9 significant digits ("%.9g").
std::string fmt_float(double value);

void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_metrics_csv(std::ostream& out, const RunMetrics& metrics);
void write_compare_csv(std::ostream& out, const ComparisonTable& table);

struct StabilityRow {
  Mode mode = Mode::Cacc1;
  double omega_k = 0.0;
  double h_d = 0.0;
  HInfResult hinf;
  bool closed_form_stable = false;
};

void write_stability_csv(std::ostream& out,
                         const std::vector<StabilityRow>& rows);
void write_bode_csv(std::ostream& out, const std::vector<double>& omegas,
                    const std::vector<double>& magnitudes);

}  // namespace cacc
