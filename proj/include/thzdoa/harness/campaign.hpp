#pragma once

#include <cstdint>
#include <vector>

#include "thzdoa/harness/config.hpp"
#include "thzdoa/harness/metrics.hpp"

namespace thzdoa::harness {

struct LinkRecord {
  PhysicalAngles uav_true;
  PhysicalAngles sat_true;
  std::vector<AngleEstimate> uav_iterations;
  std::vector<AngleEstimate> sat_iterations;
  bool uav_failed = false;
  bool sat_failed = false;
  cd uav_gain{};  // effective beam-aligned gain of the DL observation
  cd sat_gain{};  // same for the UL observation
  // Per-link CRLB in deg^2; NaN when the bound is undefined for this draw.
  double crlb_theta_uav = 0.0;
  double crlb_phi_uav = 0.0;
  double crlb_theta_sat = 0.0;
  double crlb_phi_sat = 0.0;
};

struct TrialRecord {
  int trial = 0;
  std::vector<LinkRecord> links;
  bool flagged = false;
  bool failed = false;
};

struct SnrBlock {
  double snr_db = 0.0;
  std::vector<TrialRecord> trials;  // ordered by trial index
};

struct CampaignResult {
  RmseCurve curve;
  std::vector<SnrBlock> blocks;
  double failure_fraction = 0.0;  // trials with an ESPRIT failure in any stage
};

/// Seed of trial `trial`'s scenario; shared by every SNR point so the sweep
/// compares noise levels on identical geometry.
std::uint64_t scenario_seed(std::uint64_t master, int trial);
/// Seed of the estimation noise and pilots for (snr point, trial).
std::uint64_t noise_seed(std::uint64_t master, int snr_index, int trial);

TrialRecord run_trial(const SimConfig& cfg, double snr_db, int snr_index, int trial);

/// Aggregates one SNR point; `which` selects the iteration (1-based, 0 = final).
RmseRow aggregate(const SimConfig& cfg, const SnrBlock& block, int which = 0);

/// Deterministic in (cfg, cfg.seed) for any worker count.
CampaignResult run_campaign(const SimConfig& cfg, int workers = 1);

}  // namespace thzdoa::harness
