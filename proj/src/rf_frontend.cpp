#include "thzdoa/rf_frontend.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thzdoa {

namespace {

// Conjugate squint along one axis, with each antenna's delay referenced to the
// centre coordinate of its group.
CVec grouped_axis(double angle, int n, int group, double xi) {
  CVec out(n);
  for (int p = 0; p < n; ++p) {
    const int start = (p / group) * group;
    const double centre = start + 0.5 * (group - 1);
    out[p] = expj(-centre * angle * xi);
  }
  return out;
}

// Unit-norm steering samples of `angle` over [from, from + len) placed at
// [to, to + len) of an n-element axis.
CVec placed_axis(double angle, int n, int from, int to, int len) {
  CVec out = CVec::Zero(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(len));
  for (int i = 0; i < len; ++i) out[to + i] = scale * expj((from + i) * angle);
  return out;
}

}  // namespace

void CompensationPlan::validate(const UpaGeometry& geom) const {
  if (mode == CompensationMode::none) return;
  if (group_h < 1 || group_v < 1) throw std::invalid_argument("TTDU group sizes must be >= 1");
  if (group_h > geom.n_h() || group_v > geom.n_v())
    throw std::invalid_argument("TTDU group larger than the array");
  if (geom.n_h() % group_h != 0 || geom.n_v() % group_v != 0)
    throw std::invalid_argument("TTDU groups of " + std::to_string(group_h) + "x" +
                                std::to_string(group_v) + " do not tile a " +
                                std::to_string(geom.n_h()) + "x" + std::to_string(geom.n_v()) +
                                " array");
  if (mode == CompensationMode::ideal_ttdu && (group_h != 1 || group_v != 1))
    throw std::invalid_argument("ideal TTDU implies 1x1 groups");
}

KronVector gttdu_factors(const CompensationPlan& plan, const UpaGeometry& geom, double xi) {
  plan.validate(geom);
  if (plan.mode == CompensationMode::none)
    return {CVec::Ones(geom.n_v()), CVec::Ones(geom.n_h())};
  return {grouped_axis(plan.rough.nu, geom.n_v(), plan.group_v, xi),
          grouped_axis(plan.rough.mu, geom.n_h(), plan.group_h, xi)};
}

CVec gttdu_vector(const CompensationPlan& plan, const UpaGeometry& geom, double xi) {
  return gttdu_factors(plan, geom, xi).dense();
}

bool ArrayBlock::overlaps(const ArrayBlock& o) const {
  const bool h = h0 < o.h0 + o.size_h && o.h0 < h0 + size_h;
  const bool v = v0 < o.v0 + o.size_v && o.v0 < v0 + size_v;
  return h && v;
}

std::vector<ArrayBlock> tile_assignments(const UpaGeometry& sat, const UpaGeometry& tile) {
  if (sat.n_h() % tile.n_h() != 0 || sat.n_v() % tile.n_v() != 0)
    throw std::invalid_argument("satellite subarrays do not tile the satellite array");
  std::vector<ArrayBlock> blocks;
  const int tiles_h = sat.n_h() / tile.n_h();
  const int tiles_v = sat.n_v() / tile.n_v();
  for (int tv = 0; tv < tiles_v; ++tv)
    for (int th = 0; th < tiles_h; ++th)
      blocks.push_back({th * tile.n_h(), tv * tile.n_v(), tile.n_h(), tile.n_v()});
  return blocks;
}

void validate_assignments(const std::vector<ArrayBlock>& blocks, const UpaGeometry& parent) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.size_h < 1 || b.size_v < 1 || b.h0 < 0 || b.v0 < 0 || b.h0 + b.size_h > parent.n_h() ||
        b.v0 + b.size_v > parent.n_v())
      throw std::invalid_argument("subarray assignment " + std::to_string(i + 1) +
                                  " leaves the array");
    for (std::size_t j = 0; j < i; ++j)
      if (b.overlaps(blocks[j]))
        throw std::invalid_argument("subarray assignments " + std::to_string(j + 1) + " and " +
                                    std::to_string(i + 1) + " overlap");
  }
}

SubarrayPattern::SubarrayPattern(UpaGeometry parent, int i_h, int i_v)
    : SubarrayPattern(parent, ArrayBlock{0, 0, parent.n_h(), parent.n_v()}, i_h, i_v) {}

SubarrayPattern::SubarrayPattern(UpaGeometry parent, ArrayBlock block, int i_h, int i_v)
    : parent_(parent), block_(block), i_h_(i_h), i_v_(i_v) {
  validate_assignments({block_}, parent_);
  if (i_h < 1 || i_v < 1) throw std::invalid_argument("virtual array dimensions must be >= 1");
  if (i_h > block_.size_h || i_v > block_.size_v)
    throw std::invalid_argument("virtual array larger than the selectable block");
}

std::pair<int, int> SubarrayPattern::shift(int m) const {
  if (m < 1 || m > count())
    throw std::out_of_range("pattern " + std::to_string(m) + " outside [1, " +
                            std::to_string(count()) + "]");
  return {(m - 1) % i_h_, (m - 1) / i_h_};
}

ArrayBlock SubarrayPattern::window(int m) const {
  const auto [dh, dv] = shift(m);
  return {block_.h0 + dh, block_.v0 + dv, sub_h(), sub_v()};
}

std::vector<int> subarray_index_set(const SubarrayPattern& pat, int m) {
  const ArrayBlock w = pat.window(m);
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(w.total()));
  for (int q = 0; q < w.size_v; ++q)
    for (int p = 0; p < w.size_h; ++p) idx.push_back(pat.parent().index(w.h0 + p, w.v0 + q));
  return idx;
}

KronVector build_sat_precoder(VirtualAngles rough, const UpaGeometry& sat_geom,
                              const ArrayBlock& assignment) {
  validate_assignments({assignment}, sat_geom);
  return {placed_axis(rough.nu, sat_geom.n_v(), assignment.v0, assignment.v0, assignment.size_v),
          placed_axis(rough.mu, sat_geom.n_h(), assignment.h0, assignment.h0, assignment.size_h)};
}

std::vector<KronVector> build_shifted_combiners(VirtualAngles rough, const SubarrayPattern& pat) {
  const ArrayBlock first = pat.window(1);
  std::vector<KronVector> out;
  out.reserve(static_cast<std::size_t>(pat.count()));
  for (int m = 1; m <= pat.count(); ++m) {
    const ArrayBlock w = pat.window(m);
    out.push_back({placed_axis(rough.nu, pat.parent().n_v(), first.v0, w.v0, w.size_v),
                   placed_axis(rough.mu, pat.parent().n_h(), first.h0, w.h0, w.size_h)});
  }
  return out;
}

KronVector build_uav_ul_precoder(VirtualAngles refined, const UpaGeometry& uav_geom) {
  return {placed_axis(refined.nu, uav_geom.n_v(), 0, 0, uav_geom.n_v()),
          placed_axis(refined.mu, uav_geom.n_h(), 0, 0, uav_geom.n_h())};
}

}  // namespace thzdoa
