#pragma once

#include <span>
#include <vector>

namespace thzdoa::harness {

/// sqrt(mean over trials of (1/L) sum_l (x_l - xhat_l)^2). Row t holds trial
/// t's L angles in degrees. Throws std::invalid_argument on empty or ragged input.
double rmse(const std::vector<std::vector<double>>& truth,
            const std::vector<std::vector<double>>& estimates);

struct RmseRow {
  double snr_db = 0.0;
  double rmse_theta_uav_deg = 0.0;
  double rmse_phi_uav_deg = 0.0;
  double rmse_theta_sat_deg = 0.0;
  double rmse_phi_sat_deg = 0.0;
  double crlb_theta_deg = 0.0;  // UAV side
  double crlb_phi_deg = 0.0;
  int trials = 0;
  double flagged_fraction = 0.0;
  double crlb_theta_sat_deg = 0.0;
  double crlb_phi_sat_deg = 0.0;
};

using RmseCurve = std::vector<RmseRow>;

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two samples.
double stddev(std::span<const double> x);
/// t statistic of the mean of x against zero.
double t_statistic(std::span<const double> x);

}  // namespace thzdoa::harness
