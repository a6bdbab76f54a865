#pragma once

#include <string>
#include <vector>

#include "borromean/gate.hpp"

namespace borromean {

struct OptimizerConfig {
  double r_um = 12.5;
  // step I
  double b_min = 0.0, b_max = 6.0, b_step = 0.5;
  double scan_tau_us = 1.8;
  double scan_step_v_cm = 4e-5;
  double scan_below_v_cm = 0.001;  // window around the two-body peak
  double scan_above_v_cm = 0.006;
  double separation_widths = 3.0;
  // steps II-IV
  double tau_min_us = 0.2;
  double tau_max_us = 5.0;  // lifetime guard
  double tau_grid_us = 0.005;
  double e_window_v_cm = 0.0015;
  double e_grid_v_cm = 2e-5;
  double b_grid_g = 0.05;
  int max_iterations = 20;
  double phase_tolerance = 0.05;
  int workers = 1;
};

struct IterationLog {
  int iteration;
  std::string step;
  OperatingPoint op;
  double residual_exchange;   // (-, r', r'') phase
  double residual_two_body;   // (r, -, r'') phase - pi
  double residual_three_body; // (r, r', r'') phase
  double fidelity;            // NaN when not evaluated
};

struct OptimizerResult {
  bool converged = false;
  OperatingPoint op;
  double two_body_peak_v_cm = 0.0;
  double three_body_peak_v_cm = 0.0;
  double three_body_width_v_cm = 0.0;
  double fidelity = 0.0;
  std::vector<IterationLog> log;
  std::string message;
};

// Steps (I)-(IV): magnetic field separating the resonances, exchange-phase
// interaction time, two-body pi phase via E, three-body zero phase via B.
OptimizerResult optimize_operating_point(const GateModel& model, const OptimizerConfig& cfg);

struct PeakInfo {
  double center = 0.0;
  double height = 0.0;
  double fwhm = 0.0;
};

// Largest local maximum of y(x) with half-maximum width by linear interpolation.
PeakInfo find_peak(const std::vector<double>& x, const std::vector<double>& y);

// Fraction of population in states where every atom has left its initial level.
double three_body_transfer(const Eigen::VectorXcd& psi, const CollectiveBasis& basis);

}  // namespace borromean
