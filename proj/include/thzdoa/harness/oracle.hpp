#pragma once

#include "thzdoa/esprit.hpp"

namespace thzdoa::harness {

struct OracleResult {
  VirtualAngles angles;
  double final_resolution = 0.0;
  double peak_to_mean = 0.0;  // over the coarse grid
  bool low_confidence = false;
};

/// Brute-force maximizer of ||abar(mu, nu)^H Y||_2. A coarse grid of step
/// `resolution` over [-pi, pi)^2 is followed by three rounds of local grids, each
/// ten times finer and spanning one step of the previous round either side.
OracleResult grid_oracle(const SnapshotMatrix& y, double resolution, double min_peak_ratio = 3.0);

}  // namespace thzdoa::harness
