#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "thzdoa/estimator.hpp"

namespace thzdoa::harness {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  // Arrays. The satellite array is sat_tiles_h x sat_tiles_v subarrays of
  // sat_tile_h x sat_tile_v antennas, one per UAV.
  int uav_h = 64;
  int uav_v = 64;
  int sat_tile_h = 64;
  int sat_tile_v = 64;
  int sat_tiles_h = 1;
  int sat_tiles_v = 2;
  // Virtual arrays formed by subarray selection.
  int uav_virtual_h = 5;
  int uav_virtual_v = 5;
  int sat_virtual_h = 5;
  int sat_virtual_v = 5;
  // Antennas per grouped true-time-delay unit.
  int uav_group_h = 4;
  int uav_group_v = 4;
  int sat_group_h = 4;
  int sat_group_v = 4;
  // OFDM.
  double carrier_hz = 0.1e12;
  double bandwidth_hz = 1e9;
  int num_subcarriers = 256;
  int cyclic_prefix = 16;
  double symbol_duration_s = 0.0;  // <= 0: (K + N_cp) / f_s
  int num_uavs = 2;
  // Scenario.
  double angle_limit_deg = 60.0;
  double prior_offset_deg = 5.0;
  double max_delay_s = 0.0;  // <= 0: N_cp / f_s
  double alpha_variance = 1.0;
  double vertical_distance_m = 200e3;
  double radius_m = 50e3;
  double radial_velocity_mps = 200.0;
  double doppler_residual_ratio = 0.0;
  // Campaign.
  double snr_min_db = 10.0;
  double snr_max_db = 30.0;
  double snr_step_db = 5.0;
  int trials = 500;
  int i_max_uav = 2;
  int i_max_sat = 2;
  EstimationMode mode = EstimationMode::proposed;
  std::uint64_t seed = 1;
  double esprit_min_eigen_ratio = 1.0;
  double oracle_peak_ratio = 3.0;
  double max_failure_fraction = 0.5;

  /// Throws ConfigError describing the first inconsistency.
  void validate() const;

  std::vector<double> snr_points_db() const;
  SubcarrierGrid grid() const;
  double tau_max_s() const;
  double noise_sigma(double snr_db) const;
  /// Estimator configuration at one SNR point.
  SystemConfig system(double snr_db) const;
};

SimConfig preset(const std::string& name);
std::vector<std::string> preset_names();

std::string mode_name(EstimationMode m);
EstimationMode parse_mode(const std::string& s);

/// Overlays a JSON document on `base`. The document must carry
/// "schema_version"; an optional "preset" key selects the base instead.
SimConfig load_config(const std::string& json_text, const SimConfig& base);
SimConfig load_config_file(const std::string& path, const SimConfig& base);
std::string to_json(const SimConfig& cfg);

/// Sets one field from its JSON spelling, e.g. ("trials", "200").
void set_field(SimConfig& cfg, const std::string& key, const std::string& value);

}  // namespace thzdoa::harness
