#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thzdoa/geometry.hpp"
#include "thzdoa/rf_frontend.hpp"

namespace thzdoa {

/// Ground truth for one UAV <-> satellite line-of-sight link.
struct LinkState {
  double large_scale_gain = 1.0;
  cd alpha{1.0, 0.0};
  double doppler_hz = 0.0;
  /// Receiver-side Doppler estimate; the residual doppler_hz - doppler_comp_hz
  /// survives compensation.
  double doppler_comp_hz = 0.0;
  double path_delay_s = 0.0;
  VirtualAngles uav_true{};
  VirtualAngles sat_true{};
  VirtualAngles uav_prior{};
  VirtualAngles sat_prior{};
};

struct ArrayPair {
  UpaGeometry uav;
  UpaGeometry sat;
};

struct LinkCompensation {
  CompensationPlan uav;
  CompensationPlan sat;
};

enum class LinkDirection { downlink, uplink };

/// Rank-1 channel H[k] = coeff * rx * tx^H, kept in separable form.
///
/// Downlink: rx is the UAV side, tx the satellite side. Uplink swaps them.
/// Each side is a(true) o abar(true, xi_k) o g[k], with g the TTDU compensation.
struct FactoredChannel {
  cd coeff;
  KronVector rx;
  KronVector tx;

  CMat dense() const;
};

FactoredChannel dl_channel_factors(const LinkState& link, int k, int m, const SubcarrierGrid& grid,
                                   const ArrayPair& arrays, const LinkCompensation& comp,
                                   bool doppler_compensated = true);

FactoredChannel ul_channel_factors(const LinkState& link, int k, int n, const SubcarrierGrid& grid,
                                   const ArrayPair& arrays, const LinkCompensation& comp,
                                   bool doppler_compensated = true);

/// coeff * (q^H rx) * (tx^H p)
cd apply_beamformers(const KronVector& q, const KronVector& p, const FactoredChannel& h);
cd apply_beamformers(const CVec& q, const CVec& p, const FactoredChannel& h);

/// Alternating equal-interval OFDMA comb {l, l + L, l + 2L, ...} for UAV l
/// (1-based). Requires L to divide K.
std::vector<int> allocate_subcarriers(int num_subcarriers, int num_uavs, int l);

/// Unit-modulus QPSK symbols exp(j(pi/4 + n pi/2)).
std::vector<cd> qpsk_pilots(std::size_t n, std::uint64_t seed);

struct BeamPlan {
  std::vector<KronVector> combiners;  // one per OFDM symbol
  KronVector precoder;
};

struct ObservationRequest {
  LinkState link;
  ArrayPair arrays;
  LinkCompensation compensation;
  SubcarrierGrid grid;
  std::vector<int> subcarriers;  // 1-based, ordered
  BeamPlan beams;
  std::vector<cd> pilots;  // one per entry of `subcarriers`
  double tx_power = 1.0;
  double noise_sigma = 0.0;  // E|n|^2 = noise_sigma^2
  bool doppler_compensated = true;
};

/// Rows are OFDM symbols (one per combiner), columns the requested subcarriers.
/// Deterministic in `seed`.
CMat synthesize_dl_observation(const ObservationRequest& req, std::uint64_t seed);
CMat synthesize_ul_observation(const ObservationRequest& req, std::uint64_t seed);

}  // namespace thzdoa
