#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thzdoa/channel.hpp"
#include "thzdoa/esprit.hpp"

namespace thzdoa {

struct AngleEstimate {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  int iteration = 0;
  bool flagged = false;  // clamped onto the physical region, or a fallback

  VirtualAngles angles() const { return {mu, nu}; }
  /// Clamps non-physical pairs onto the physical disc and flags them.
  static AngleEstimate from_virtual(VirtualAngles v, int iteration);
};

struct IterationTrace {
  std::vector<AngleEstimate> iterations;
  cd gamma_hat{};  // from the last successful ESPRIT call; diagnostic only

  const AngleEstimate& final() const { return iterations.back(); }
};

class IterationError : public std::runtime_error {
 public:
  IterationError(int iteration, const EspritError& cause)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " + cause.what()),
        iteration_(iteration),
        kind_(cause.kind()) {}
  int iteration() const { return iteration_; }
  EspritError::Kind kind() const { return kind_; }

 private:
  int iteration_;
  EspritError::Kind kind_;
};

/// Column for subcarrier k: conj(abar(prior, xi_k)) o abar(last, xi_k) on the
/// i_h x i_v virtual array.
CMat compensation_matrix(VirtualAngles prior, VirtualAngles last, int i_h, int i_v,
                         const SubcarrierGrid& grid, std::span<const int> subcarriers);

/// Prior-aided iterative angle estimation. Iteration 1 runs ESPRIT on `y`;
/// iteration i >= 2 re-compensates the original `y` with the residual squint
/// predicted from iteration i - 1 and runs ESPRIT again.
IterationTrace iterate_angles(const SnapshotMatrix& y, VirtualAngles prior, int i_max,
                              const SubcarrierGrid& grid, std::span<const int> subcarriers,
                              const EspritOptions& opts = {});

enum class EstimationMode { proposed, no_ttdu, ideal_ttdu };

/// Everything the two-stage pipeline needs besides the per-link ground truth.
struct SystemConfig {
  UpaGeometry uav_array{64, 64};
  UpaGeometry sat_tile{64, 64};  // subarray serving one UAV
  int sat_tiles_h = 1;
  int sat_tiles_v = 2;
  int uav_virtual_h = 5;
  int uav_virtual_v = 5;
  int sat_virtual_h = 5;
  int sat_virtual_v = 5;
  int uav_group_h = 4;
  int uav_group_v = 4;
  int sat_group_h = 4;
  int sat_group_v = 4;
  SubcarrierGrid grid{256, 0.1e12, 1e9, 16};
  int num_uavs = 2;
  int i_max_uav = 2;
  int i_max_sat = 2;
  EstimationMode mode = EstimationMode::proposed;
  double tx_power = 1.0;
  double noise_sigma = 0.0;
  bool doppler_compensated = true;
  EspritOptions esprit{};

  UpaGeometry sat_array() const {
    return {sat_tile.n_h() * sat_tiles_h, sat_tile.n_v() * sat_tiles_v};
  }
  ArrayPair arrays() const { return {uav_array, sat_array()}; }
  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

/// Per-UAV result of one stage. A failed estimation keeps a full-length trace
/// whose entries fall back to the previous estimate (or the prior) and are flagged.
struct StageOutcome {
  IterationTrace trace;
  bool failed = false;
  std::string failure;
  /// Noiseless beam-aligned gain sqrt(P G) alpha (w1^H a_rx)(a_tx^H f) at the
  /// carrier; the amplitude the CRLB is evaluated with.
  cd effective_gain{};
  int snapshots = 0;
};

/// De-rotated virtual-array observation of one link, ready for iterate_angles.
struct LinkObservation {
  SnapshotMatrix snapshots;
  std::vector<int> subcarriers;
  VirtualAngles prior;
  int i_max = 1;
  cd effective_gain{};
};

LinkObservation observe_uav_link(const LinkState& link, int l, const SystemConfig& cfg,
                                 std::uint64_t link_seed);
LinkObservation observe_sat_link(const LinkState& link, VirtualAngles refined_uav, int l,
                                 const SystemConfig& cfg, std::uint64_t link_seed);

/// DL stage for a single UAV on its own comb; estimate_uav_stage runs this for
/// every UAV with seeds keyed by l.
StageOutcome estimate_uav_link(const LinkState& link, int l, const SystemConfig& cfg,
                               std::uint64_t link_seed);
StageOutcome estimate_sat_link(const LinkState& link, VirtualAngles refined_uav, int l,
                               const SystemConfig& cfg, std::uint64_t link_seed);

std::vector<StageOutcome> estimate_uav_stage(std::span<const LinkState> links,
                                             const SystemConfig& cfg, std::uint64_t seed);
std::vector<StageOutcome> estimate_sat_stage(std::span<const LinkState> links,
                                             std::span<const VirtualAngles> refined_uav,
                                             const SystemConfig& cfg, std::uint64_t seed);

}  // namespace thzdoa
