#pragma once

#include <cstdint>
#include <vector>

#include "thzdoa/channel.hpp"
#include "thzdoa/harness/config.hpp"

namespace thzdoa::harness {

/// One trial's ground truth. Physical angles are kept alongside the virtual
/// ones in `links` so errors can be measured in degrees without a round trip.
struct Scenario {
  std::vector<LinkState> links;
  std::vector<PhysicalAngles> uav_deg;
  std::vector<PhysicalAngles> sat_deg;
};

/// Both arrays lie in horizontal planes with boresight along the vertical; the
/// satellite hovers vertical_distance_m above the centre of the disc the UAVs
/// are dropped in. Direction cosines along the array axes give (mu, nu).
PhysicalAngles direction_angles(double dx, double dy, double dz);

Scenario draw_scenario(const SimConfig& cfg, std::uint64_t trial_seed);

}  // namespace thzdoa::harness
