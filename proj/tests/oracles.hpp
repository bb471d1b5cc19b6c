#pragma once

#include <cmath>

#include "thzdoa/channel.hpp"

namespace oracle {

using namespace thzdoa;

// Element (p, q) of a half-wavelength UPA facing (theta, phi): propagation delay
// relative to element (0, 0), in seconds.
inline double element_delay(PhysicalAngles a, int p, int q, double f_z) {
  const double d = kSpeedOfLight / f_z / 2.0;
  const double th = deg2rad(a.theta_deg);
  const double ph = deg2rad(a.phi_deg);
  return (p * d * std::sin(th) * std::cos(ph) + q * d * std::sin(ph)) / kSpeedOfLight;
}

// Delay programmed into the TTDU feeding element (p, q): the element delay at
// the rough angles, evaluated at the centre of the element's group.
inline double ttdu_delay(const CompensationPlan& plan, int p, int q, double f_z) {
  if (plan.mode == CompensationMode::none) return 0.0;
  const double cp = (p / plan.group_h) * plan.group_h + 0.5 * (plan.group_h - 1);
  const double cq = (q / plan.group_v) * plan.group_v + 0.5 * (plan.group_v - 1);
  const double d = kSpeedOfLight / f_z / 2.0;
  const double u = plan.rough.mu / kPi;
  const double v = plan.rough.nu / kPi;
  return (cp * d * u + cq * d * v) / kSpeedOfLight;
}

// Response of one side at subcarrier frequency f_k: the array phase is carried
// at f_k, and the TTDU removes its delay only at the baseband offset f_k - f_z.
inline cd side_entry(VirtualAngles truth, const CompensationPlan& plan, int p, int q, double f_k,
                     double f_z) {
  const PhysicalAngles a = virtual_to_physical(truth);
  const double phase = 2.0 * kPi * f_k * element_delay(a, p, q, f_z);
  const double comp = -2.0 * kPi * (f_k - f_z) * ttdu_delay(plan, p, q, f_z);
  return std::polar(1.0, phase + comp);
}

// Dense DL channel H[k] (UAV rows, satellite columns) evaluated entry by entry.
inline CMat dense_dl(const LinkState& link, int k, int m, const SubcarrierGrid& grid,
                     const ArrayPair& arrays, const LinkCompensation& comp) {
  const double f_off = ((k - 1.0) / grid.num_subcarriers() - 0.5) * grid.bandwidth_hz();
  const double f_k = grid.carrier_hz() + f_off;
  const double psi = link.doppler_hz - link.doppler_comp_hz;
  const cd coeff = std::sqrt(link.large_scale_gain) * link.alpha *
                   std::polar(1.0, 2.0 * kPi * psi * (m - 1) * grid.symbol_duration()) *
                   std::polar(1.0, -2.0 * kPi * f_off * link.path_delay_s);
  CMat h(arrays.uav.total(), arrays.sat.total());
  for (int qu = 0; qu < arrays.uav.n_v(); ++qu)
    for (int pu = 0; pu < arrays.uav.n_h(); ++pu) {
      const cd u = side_entry(link.uav_true, comp.uav, pu, qu, f_k, grid.carrier_hz());
      for (int qs = 0; qs < arrays.sat.n_v(); ++qs)
        for (int ps = 0; ps < arrays.sat.n_h(); ++ps) {
          const cd s = side_entry(link.sat_true, comp.sat, ps, qs, f_k, grid.carrier_hz());
          h(arrays.uav.index(pu, qu), arrays.sat.index(ps, qs)) = coeff * u * std::conj(s);
        }
    }
  return h;
}

}  // namespace oracle
