#include "thzdoa/estimator.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "thzdoa/seed.hpp"

namespace thzdoa {

namespace {

struct PartialTrace {
  IterationTrace trace;
  std::optional<IterationError> error;
};

// Runs as many iterations as succeed; stops at the first ESPRIT failure.
PartialTrace run_iterations(const SnapshotMatrix& y, VirtualAngles prior, int i_max,
                            const SubcarrierGrid& grid, std::span<const int> subcarriers,
                            const EspritOptions& opts) {
  if (i_max < 1) throw std::invalid_argument("iterate_angles: i_max must be >= 1");
  if (static_cast<Eigen::Index>(subcarriers.size()) != y.data.cols())
    throw std::invalid_argument("iterate_angles: one subcarrier per snapshot column required");
  const int ih = y.virtual_geom.n_h();
  const int iv = y.virtual_geom.n_v();
  PartialTrace out;
  out.trace.iterations.reserve(static_cast<std::size_t>(i_max));
  for (int i = 1; i <= i_max; ++i) {
    try {
      EspritResult r;
      if (i == 1) {
        r = tdu_esprit(y, opts);
      } else {
        const VirtualAngles last = out.trace.iterations.back().angles();
        const CMat comp = compensation_matrix(prior, last, ih, iv, grid, subcarriers);
        r = tdu_esprit(SnapshotMatrix(comp.conjugate().cwiseProduct(y.data), y.virtual_geom), opts);
      }
      out.trace.iterations.push_back(AngleEstimate::from_virtual(r.angles, i));
      out.trace.gamma_hat = r.gamma;
    } catch (const EspritError& e) {
      out.error.emplace(i, e);
      break;
    }
  }
  return out;
}

CompensationPlan plan_for(EstimationMode mode, VirtualAngles rough, int gh, int gv) {
  switch (mode) {
    case EstimationMode::no_ttdu: return CompensationPlan::none();
    case EstimationMode::ideal_ttdu: return CompensationPlan::ideal(rough);
    case EstimationMode::proposed: break;
  }
  return CompensationPlan::grouped(rough, gh, gv);
}

int effective_i_max(EstimationMode mode, int configured) {
  return mode == EstimationMode::no_ttdu ? 1 : configured;
}

// Pads a failed trace to full length with flagged copies of the last good
// estimate, or of the prior if iteration 1 already failed.
StageOutcome finish(PartialTrace partial, VirtualAngles prior, int i_max) {
  StageOutcome out;
  out.trace = std::move(partial.trace);
  if (partial.error) {
    out.failed = true;
    out.failure = partial.error->what();
    AngleEstimate fallback = out.trace.iterations.empty()
                                 ? AngleEstimate::from_virtual(prior, 0)
                                 : out.trace.iterations.back();
    fallback.flagged = true;
    for (int i = static_cast<int>(out.trace.iterations.size()) + 1; i <= i_max; ++i) {
      fallback.iteration = i;
      out.trace.iterations.push_back(fallback);
    }
  }
  return out;
}

struct LinkPlan {
  ObservationRequest req;
  UpaGeometry virtual_geom;
  VirtualAngles prior;
  int i_max;
  KronVector rx_true;  // carrier-frequency steering on the receive side
  KronVector tx_true;
};

LinkObservation observe(LinkPlan plan, std::uint64_t link_seed, LinkDirection dir) {
  plan.req.pilots = qpsk_pilots(plan.req.subcarriers.size(), derive_seed(link_seed, 1));
  const std::uint64_t noise_seed = derive_seed(link_seed, 2);
  const CMat y = dir == LinkDirection::downlink ? synthesize_dl_observation(plan.req, noise_seed)
                                                : synthesize_ul_observation(plan.req, noise_seed);
  const LinkState& link = plan.req.link;
  const cd gain = std::sqrt(plan.req.tx_power * link.large_scale_gain) * link.alpha *
                  dot(plan.req.beams.combiners.front(), plan.rx_true) *
                  dot(plan.tx_true, plan.req.beams.precoder);
  return {derotate_pilots(y, plan.req.pilots, plan.virtual_geom), std::move(plan.req.subcarriers),
          plan.prior, plan.i_max, gain};
}

StageOutcome estimate(const LinkObservation& obs, const SystemConfig& cfg) {
  StageOutcome out = finish(
      run_iterations(obs.snapshots, obs.prior, obs.i_max, cfg.grid, obs.subcarriers, cfg.esprit),
      obs.prior, obs.i_max);
  out.effective_gain = obs.effective_gain;
  out.snapshots = static_cast<int>(obs.subcarriers.size());
  return out;
}

ObservationRequest base_request(const LinkState& link, int l, const SystemConfig& cfg) {
  ObservationRequest req{.link = link,
                         .arrays = cfg.arrays(),
                         .compensation = {},
                         .grid = cfg.grid,
                         .subcarriers = allocate_subcarriers(cfg.grid.num_subcarriers(), cfg.num_uavs, l),
                         .beams = {},
                         .pilots = {},
                         .tx_power = cfg.tx_power,
                         .noise_sigma = cfg.noise_sigma,
                         .doppler_compensated = cfg.doppler_compensated};
  return req;
}

ArrayBlock tile_of(int l, const SystemConfig& cfg) {
  const auto tiles = tile_assignments(cfg.sat_array(), cfg.sat_tile);
  return tiles.at(static_cast<std::size_t>(l - 1));
}

void check_uav_index(int l, const SystemConfig& cfg) {
  if (l < 1 || l > cfg.num_uavs) throw std::out_of_range("UAV index out of range");
}

}  // namespace

AngleEstimate AngleEstimate::from_virtual(VirtualAngles v, int iteration) {
  AngleEstimate e;
  e.iteration = iteration;
  const VirtualAngles c = clamp_to_physical(v);
  e.flagged = c.mu != v.mu || c.nu != v.nu;
  const PhysicalAngles p = virtual_to_physical(c);
  // Re-derive (mu, nu) from the reported degrees so both pairs agree exactly.
  const VirtualAngles back = physical_to_virtual(p);
  e.theta_deg = p.theta_deg;
  e.phi_deg = p.phi_deg;
  e.mu = back.mu;
  e.nu = back.nu;
  return e;
}

CMat compensation_matrix(VirtualAngles prior, VirtualAngles last, int i_h, int i_v,
                         const SubcarrierGrid& grid, std::span<const int> subcarriers) {
  const UpaGeometry g(i_h, i_v);
  CMat out(g.total(), static_cast<Eigen::Index>(subcarriers.size()));
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double xi = grid.xi(subcarriers[static_cast<std::size_t>(c)]);
    out.col(c) = hadamard(conjugate(squint_upa_factors(prior, g, xi)), squint_upa_factors(last, g, xi))
                     .dense();
  }
  return out;
}

IterationTrace iterate_angles(const SnapshotMatrix& y, VirtualAngles prior, int i_max,
                              const SubcarrierGrid& grid, std::span<const int> subcarriers,
                              const EspritOptions& opts) {
  PartialTrace p = run_iterations(y, prior, i_max, grid, subcarriers, opts);
  if (p.error) throw *p.error;
  return std::move(p.trace);
}

void SystemConfig::validate() const {
  if (num_uavs < 1) throw std::invalid_argument("at least one UAV required");
  if (sat_tiles_h < 1 || sat_tiles_v < 1) throw std::invalid_argument("satellite tile counts must be >= 1");
  if (sat_tiles_h * sat_tiles_v < num_uavs)
    throw std::invalid_argument("fewer satellite subarrays than UAVs");
  if (grid.num_subcarriers() % num_uavs != 0)
    throw std::invalid_argument("number of UAVs must divide the number of subcarriers");
  if (i_max_uav < 1 || i_max_sat < 1) throw std::invalid_argument("maximum iterations must be >= 1");
  if (uav_virtual_h < 2 || uav_virtual_v < 2 || sat_virtual_h < 2 || sat_virtual_v < 2)
    throw std::invalid_argument("virtual arrays must be at least 2x2");
  // Constructing the patterns and plans runs their own dimension checks.
  (void)SubarrayPattern(uav_array, uav_virtual_h, uav_virtual_v);
  (void)SubarrayPattern(sat_array(), tile_assignments(sat_array(), sat_tile).front(), sat_virtual_h,
                  sat_virtual_v);
  if (mode == EstimationMode::proposed) {
    CompensationPlan::grouped({}, uav_group_h, uav_group_v).validate(uav_array);
    CompensationPlan::grouped({}, sat_group_h, sat_group_v).validate(sat_array());
  }
  if (!(tx_power >= 0.0) || !(noise_sigma >= 0.0))
    throw std::invalid_argument("transmit power and noise sigma must be non-negative");
}

LinkObservation observe_uav_link(const LinkState& link, int l, const SystemConfig& cfg,
                                 std::uint64_t link_seed) {
  check_uav_index(l, cfg);
  const UpaGeometry sat = cfg.sat_array();
  const SubarrayPattern pat(cfg.uav_array, cfg.uav_virtual_h, cfg.uav_virtual_v);
  LinkPlan plan{.req = base_request(link, l, cfg),
                .virtual_geom = pat.virtual_geometry(),
                .prior = link.uav_prior,
                .i_max = effective_i_max(cfg.mode, cfg.i_max_uav),
                .rx_true = steering_upa_factors(link.uav_true, cfg.uav_array),
                .tx_true = steering_upa_factors(link.sat_true, sat)};
  plan.req.compensation = {plan_for(cfg.mode, link.uav_prior, cfg.uav_group_h, cfg.uav_group_v),
                           plan_for(cfg.mode, link.sat_prior, cfg.sat_group_h, cfg.sat_group_v)};
  plan.req.beams = {build_uav_combiners(link.uav_prior, pat),
                    build_sat_precoder(link.sat_prior, sat, tile_of(l, cfg))};
  return observe(std::move(plan), link_seed, LinkDirection::downlink);
}

StageOutcome estimate_uav_link(const LinkState& link, int l, const SystemConfig& cfg,
                               std::uint64_t link_seed) {
  return estimate(observe_uav_link(link, l, cfg, link_seed), cfg);
}

LinkObservation observe_sat_link(const LinkState& link, VirtualAngles refined_uav, int l,
                                 const SystemConfig& cfg, std::uint64_t link_seed) {
  check_uav_index(l, cfg);
  const UpaGeometry sat = cfg.sat_array();
  const SubarrayPattern pat(sat, tile_of(l, cfg), cfg.sat_virtual_h, cfg.sat_virtual_v);
  LinkPlan plan{.req = base_request(link, l, cfg),
                .virtual_geom = pat.virtual_geometry(),
                .prior = link.sat_prior,
                .i_max = effective_i_max(cfg.mode, cfg.i_max_sat),
                .rx_true = steering_upa_factors(link.sat_true, sat),
                .tx_true = steering_upa_factors(link.uav_true, cfg.uav_array)};
  plan.req.compensation = {plan_for(cfg.mode, refined_uav, cfg.uav_group_h, cfg.uav_group_v),
                           plan_for(cfg.mode, link.sat_prior, cfg.sat_group_h, cfg.sat_group_v)};
  plan.req.beams = {build_sat_combiners(link.sat_prior, pat),
                    build_uav_ul_precoder(refined_uav, cfg.uav_array)};
  return observe(std::move(plan), link_seed, LinkDirection::uplink);
}

StageOutcome estimate_sat_link(const LinkState& link, VirtualAngles refined_uav, int l,
                               const SystemConfig& cfg, std::uint64_t link_seed) {
  return estimate(observe_sat_link(link, refined_uav, l, cfg, link_seed), cfg);
}

std::vector<StageOutcome> estimate_uav_stage(std::span<const LinkState> links,
                                             const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (static_cast<int>(links.size()) != cfg.num_uavs)
    throw std::invalid_argument("one link per UAV required");
  std::vector<StageOutcome> out;
  out.reserve(links.size());
  for (int l = 1; l <= cfg.num_uavs; ++l)
    out.push_back(estimate_uav_link(links[static_cast<std::size_t>(l - 1)], l, cfg,
                                    derive_seed(seed, static_cast<std::uint64_t>(l))));
  return out;
}

std::vector<StageOutcome> estimate_sat_stage(std::span<const LinkState> links,
                                             std::span<const VirtualAngles> refined_uav,
                                             const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (static_cast<int>(links.size()) != cfg.num_uavs || refined_uav.size() != links.size())
    throw std::invalid_argument("one link and one refined UAV angle pair per UAV required");
  std::vector<StageOutcome> out;
  out.reserve(links.size());
  for (int l = 1; l <= cfg.num_uavs; ++l) {
    const auto i = static_cast<std::size_t>(l - 1);
    out.push_back(estimate_sat_link(links[i], refined_uav[i], l, cfg,
                                    derive_seed(seed, static_cast<std::uint64_t>(l))));
  }
  return out;
}

}  // namespace thzdoa
