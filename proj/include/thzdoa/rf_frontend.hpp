#pragma once

#include <utility>
#include <vector>

#include "thzdoa/geometry.hpp"

namespace thzdoa {

enum class CompensationMode { none, ideal_ttdu, gttdu };

/// True-time-delay compensation driven by rough angle priors.
///
/// In gttdu mode one delay unit serves a group_h x group_v block of antennas and
/// is tuned for the block's geometric centre. ideal_ttdu is the 1 x 1 special case.
struct CompensationPlan {
  CompensationMode mode = CompensationMode::none;
  int group_h = 1;
  int group_v = 1;
  VirtualAngles rough{};

  static CompensationPlan none() { return {}; }
  static CompensationPlan ideal(VirtualAngles rough) {
    return {CompensationMode::ideal_ttdu, 1, 1, rough};
  }
  static CompensationPlan grouped(VirtualAngles rough, int group_h, int group_v) {
    return {CompensationMode::gttdu, group_h, group_v, rough};
  }

  /// Throws std::invalid_argument if the groups do not tile `geom` exactly.
  void validate(const UpaGeometry& geom) const;
};

/// Unit-modulus compensation applied at subcarrier offset xi (all-ones for mode none).
KronVector gttdu_factors(const CompensationPlan& plan, const UpaGeometry& geom, double xi);
CVec gttdu_vector(const CompensationPlan& plan, const UpaGeometry& geom, double xi);

/// Axis-aligned antenna block inside a parent array, 0-based origin.
struct ArrayBlock {
  int h0 = 0;
  int v0 = 0;
  int size_h = 1;
  int size_v = 1;

  int total() const { return size_h * size_v; }
  bool overlaps(const ArrayBlock& o) const;
};

/// The L satellite subarrays of a sub-connected array, tiled tiles_h x tiles_v in
/// raster order (horizontal fastest); UAV l (1-based) owns tile l.
std::vector<ArrayBlock> tile_assignments(const UpaGeometry& sat, const UpaGeometry& tile);

/// Rejects blocks that leave the array or overlap each other.
void validate_assignments(const std::vector<ArrayBlock>& blocks, const UpaGeometry& parent);

/// Subarray-selection schedule over a block of a parent array.
///
/// i_h x i_v shifted copies of a (size_h - i_h + 1) x (size_v - i_v + 1) window are
/// switched in over successive OFDM symbols. Pattern m (1-based) decomposes as
/// m = (iv' - 1) i_h + ih' and is offset by (ih' - 1, iv' - 1) from pattern 1.
class SubarrayPattern {
 public:
  SubarrayPattern(UpaGeometry parent, int i_h, int i_v);
  SubarrayPattern(UpaGeometry parent, ArrayBlock block, int i_h, int i_v);

  const UpaGeometry& parent() const { return parent_; }
  const ArrayBlock& block() const { return block_; }
  int i_h() const { return i_h_; }
  int i_v() const { return i_v_; }
  int count() const { return i_h_ * i_v_; }
  int sub_h() const { return block_.size_h - i_h_ + 1; }
  int sub_v() const { return block_.size_v - i_v_ + 1; }
  int sub_total() const { return sub_h() * sub_v(); }
  UpaGeometry virtual_geometry() const { return {i_h_, i_v_}; }

  /// (horizontal, vertical) shift of pattern m relative to pattern 1.
  std::pair<int, int> shift(int m) const;
  ArrayBlock window(int m) const;

 private:
  UpaGeometry parent_;
  ArrayBlock block_;
  int i_h_;
  int i_v_;
};

/// 0-based antenna indices selected by pattern m, in geometry index order.
std::vector<int> subarray_index_set(const SubarrayPattern& pat, int m);

/// Satellite precoder: (1/sqrt(M_S)) a_S(rough) on the UAV's block, zero elsewhere.
KronVector build_sat_precoder(VirtualAngles rough, const UpaGeometry& sat_geom,
                              const ArrayBlock& assignment);

/// Combiner schedule: vector m carries a(rough) sampled on pattern 1's indices,
/// placed on pattern m's indices, scaled to unit norm.
std::vector<KronVector> build_shifted_combiners(VirtualAngles rough, const SubarrayPattern& pat);

inline std::vector<KronVector> build_uav_combiners(VirtualAngles rough, const SubarrayPattern& pat) {
  return build_shifted_combiners(rough, pat);
}
inline std::vector<KronVector> build_sat_combiners(VirtualAngles rough, const SubarrayPattern& pat) {
  return build_shifted_combiners(rough, pat);
}

/// Full-aperture UAV transmit beam toward the refined angles, unit norm.
KronVector build_uav_ul_precoder(VirtualAngles refined, const UpaGeometry& uav_geom);

}  // namespace thzdoa
