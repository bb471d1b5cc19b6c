#include "thzdoa/harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "thzdoa/crlb.hpp"
#include "thzdoa/harness/scenario.hpp"
#include "thzdoa/seed.hpp"

namespace thzdoa::harness {

namespace {

constexpr std::uint64_t kScenarioStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kDownlink = 1;
constexpr std::uint64_t kUplink = 2;

struct Bound {
  double theta = std::nan("");
  double phi = std::nan("");
};

Bound side_bound(VirtualAngles truth, cd gain, double sigma2, int ih, int iv, int snapshots) {
  try {
    const CrlbResult r = crlb_single_source(truth, gain, sigma2, ih, iv, snapshots);
    return {r.var_theta_deg2, r.var_phi_deg2};
  } catch (const std::exception&) {
    return {};
  }
}

const AngleEstimate& pick(const std::vector<AngleEstimate>& trace, int which) {
  if (which <= 0 || which > static_cast<int>(trace.size())) return trace.back();
  return trace[static_cast<std::size_t>(which - 1)];
}

// sqrt of the trial mean of per-trial (1/L)-averaged variances, skipping
// trials whose bound is undefined.
double bound_curve(const SnrBlock& block, double LinkRecord::*field) {
  double acc = 0.0;
  int n = 0;
  for (const auto& t : block.trials) {
    double per_trial = 0.0;
    bool ok = true;
    for (const auto& l : t.links) {
      if (!std::isfinite(l.*field)) ok = false;
      per_trial += l.*field;
    }
    if (!ok) continue;
    acc += per_trial / static_cast<double>(t.links.size());
    ++n;
  }
  return n > 0 ? std::sqrt(acc / n) : std::nan("");
}

}  // namespace

std::uint64_t scenario_seed(std::uint64_t master, int trial) {
  return derive_seed(master, kScenarioStream, static_cast<std::uint64_t>(trial));
}

std::uint64_t noise_seed(std::uint64_t master, int snr_index, int trial) {
  return derive_seed(master, kNoiseStream, static_cast<std::uint64_t>(snr_index),
                     static_cast<std::uint64_t>(trial));
}

TrialRecord run_trial(const SimConfig& cfg, double snr_db, int snr_index, int trial) {
  const SystemConfig sys = cfg.system(snr_db);
  const Scenario sc = draw_scenario(cfg, scenario_seed(cfg.seed, trial));
  const std::uint64_t seed = noise_seed(cfg.seed, snr_index, trial);

  const auto dl = estimate_uav_stage(sc.links, sys, derive_seed(seed, kDownlink));
  std::vector<VirtualAngles> refined;
  for (const auto& o : dl) refined.push_back(o.trace.final().angles());
  const auto ul = estimate_sat_stage(sc.links, refined, sys, derive_seed(seed, kUplink));

  const double sigma2 = sys.noise_sigma * sys.noise_sigma;
  TrialRecord rec;
  rec.trial = trial;
  for (std::size_t l = 0; l < sc.links.size(); ++l) {
    LinkRecord lr;
    lr.uav_true = sc.uav_deg[l];
    lr.sat_true = sc.sat_deg[l];
    lr.uav_iterations = dl[l].trace.iterations;
    lr.sat_iterations = ul[l].trace.iterations;
    lr.uav_failed = dl[l].failed;
    lr.sat_failed = ul[l].failed;
    lr.uav_gain = dl[l].effective_gain;
    lr.sat_gain = ul[l].effective_gain;
    const Bound bu = side_bound(sc.links[l].uav_true, lr.uav_gain, sigma2, cfg.uav_virtual_h,
                                cfg.uav_virtual_v, dl[l].snapshots);
    const Bound bs = side_bound(sc.links[l].sat_true, lr.sat_gain, sigma2, cfg.sat_virtual_h,
                                cfg.sat_virtual_v, ul[l].snapshots);
    lr.crlb_theta_uav = bu.theta;
    lr.crlb_phi_uav = bu.phi;
    lr.crlb_theta_sat = bs.theta;
    lr.crlb_phi_sat = bs.phi;
    rec.failed = rec.failed || lr.uav_failed || lr.sat_failed;
    rec.flagged = rec.flagged || rec.failed || lr.uav_iterations.back().flagged ||
                  lr.sat_iterations.back().flagged;
    rec.links.push_back(std::move(lr));
  }
  return rec;
}

RmseRow aggregate(const SimConfig& cfg, const SnrBlock& block, int which) {
  (void)cfg;
  RmseRow row;
  row.snr_db = block.snr_db;
  row.trials = static_cast<int>(block.trials.size());
  std::vector<std::vector<double>> t_tu, t_pu, t_ts, t_ps, e_tu, e_pu, e_ts, e_ps;
  int flagged = 0;
  for (const auto& t : block.trials) {
    std::vector<double> a, b, c, d, ea, eb, ec, ed;
    for (const auto& l : t.links) {
      const AngleEstimate& u = pick(l.uav_iterations, which);
      const AngleEstimate& s = pick(l.sat_iterations, which);
      a.push_back(l.uav_true.theta_deg);
      b.push_back(l.uav_true.phi_deg);
      c.push_back(l.sat_true.theta_deg);
      d.push_back(l.sat_true.phi_deg);
      ea.push_back(u.theta_deg);
      eb.push_back(u.phi_deg);
      ec.push_back(s.theta_deg);
      ed.push_back(s.phi_deg);
    }
    t_tu.push_back(a), t_pu.push_back(b), t_ts.push_back(c), t_ps.push_back(d);
    e_tu.push_back(ea), e_pu.push_back(eb), e_ts.push_back(ec), e_ps.push_back(ed);
    flagged += t.flagged ? 1 : 0;
  }
  row.rmse_theta_uav_deg = rmse(t_tu, e_tu);
  row.rmse_phi_uav_deg = rmse(t_pu, e_pu);
  row.rmse_theta_sat_deg = rmse(t_ts, e_ts);
  row.rmse_phi_sat_deg = rmse(t_ps, e_ps);
  row.crlb_theta_deg = bound_curve(block, &LinkRecord::crlb_theta_uav);
  row.crlb_phi_deg = bound_curve(block, &LinkRecord::crlb_phi_uav);
  row.crlb_theta_sat_deg = bound_curve(block, &LinkRecord::crlb_theta_sat);
  row.crlb_phi_sat_deg = bound_curve(block, &LinkRecord::crlb_phi_sat);
  row.flagged_fraction = static_cast<double>(flagged) / row.trials;
  return row;
}

CampaignResult run_campaign(const SimConfig& cfg, int workers) {
  cfg.validate();
  const std::vector<double> snrs = cfg.snr_points_db();
  CampaignResult out;
  out.blocks.resize(snrs.size());
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    out.blocks[i].snr_db = snrs[i];
    out.blocks[i].trials.resize(static_cast<std::size_t>(cfg.trials));
  }

  const std::size_t jobs = snrs.size() * static_cast<std::size_t>(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t si = j / static_cast<std::size_t>(cfg.trials);
      const int trial = static_cast<int>(j % static_cast<std::size_t>(cfg.trials));
      try {
        out.blocks[si].trials[static_cast<std::size_t>(trial)] =
            run_trial(cfg, snrs[si], static_cast<int>(si), trial);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs;
      }
    }
  };
  const int n = std::max(1, workers);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  int failed = 0;
  for (const auto& b : out.blocks) {
    out.curve.push_back(aggregate(cfg, b));
    for (const auto& t : b.trials) failed += t.failed ? 1 : 0;
  }
  out.failure_fraction = static_cast<double>(failed) / static_cast<double>(jobs);
  return out;
}

}  // namespace thzdoa::harness
