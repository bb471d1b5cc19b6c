#include "thzdoa/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace thzdoa::harness {

namespace {

bool within(PhysicalAngles a, double limit) {
  return std::abs(a.theta_deg) <= limit && std::abs(a.phi_deg) <= limit;
}

}  // namespace

PhysicalAngles direction_angles(double dx, double dy, double dz) {
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  const double u_h = dx / r;
  const double u_v = dy / r;
  const double phi = std::asin(u_v);
  const double theta = std::asin(std::clamp(u_h / std::cos(phi), -1.0, 1.0));
  return {rad2deg(theta), rad2deg(phi)};
}

Scenario draw_scenario(const SimConfig& cfg, std::uint64_t trial_seed) {
  std::mt19937_64 rng(trial_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-cfg.prior_offset_deg, cfg.prior_offset_deg);
  std::uniform_real_distribution<double> delay(0.0, cfg.tau_max_s());
  std::normal_distribution<double> gauss(0.0, std::sqrt(cfg.alpha_variance / 2.0));
  const double doppler = cfg.radial_velocity_mps * cfg.carrier_hz / kSpeedOfLight;

  Scenario s;
  for (int l = 0; l < cfg.num_uavs; ++l) {
    PhysicalAngles uav, sat;
    do {
      const double rho = cfg.radius_m * std::sqrt(unit(rng));
      const double az = 2.0 * kPi * unit(rng);
      const double x = rho * std::cos(az);
      const double y = rho * std::sin(az);
      uav = direction_angles(-x, -y, cfg.vertical_distance_m);
      sat = direction_angles(x, y, cfg.vertical_distance_m);
    } while (!within(uav, cfg.angle_limit_deg) || !within(sat, cfg.angle_limit_deg));

    LinkState link;
    link.large_scale_gain = 1.0;
    const double re = gauss(rng);
    const double im = gauss(rng);
    link.alpha = {re, im};
    link.path_delay_s = delay(rng);
    link.doppler_hz = doppler;
    link.doppler_comp_hz = doppler * (1.0 - cfg.doppler_residual_ratio);
    link.uav_true = physical_to_virtual(uav);
    link.sat_true = physical_to_virtual(sat);
    const double ut = offset(rng), up = offset(rng), st = offset(rng), sp = offset(rng);
    link.uav_prior = physical_to_virtual(uav.theta_deg + ut, uav.phi_deg + up);
    link.sat_prior = physical_to_virtual(sat.theta_deg + st, sat.phi_deg + sp);
    s.links.push_back(link);
    s.uav_deg.push_back(uav);
    s.sat_deg.push_back(sat);
  }
  return s;
}

}  // namespace thzdoa::harness
