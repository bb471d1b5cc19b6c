#include "thzdoa/harness/csv.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace thzdoa::harness {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json trace_json(const std::vector<AngleEstimate>& trace) {
  auto arr = nlohmann::json::array();
  for (const auto& e : trace)
    arr.push_back({{"iteration", e.iteration},
                   {"theta_deg", e.theta_deg},
                   {"phi_deg", e.phi_deg},
                   {"flagged", e.flagged}});
  return arr;
}

nlohmann::json nullable(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

std::string csv_header() {
  return "snr_db,rmse_theta_uav_deg,rmse_phi_uav_deg,rmse_theta_sat_deg,rmse_phi_sat_deg,"
         "crlb_theta_deg,crlb_phi_deg,trials,flagged_fraction,crlb_theta_sat_deg,crlb_phi_sat_deg";
}

std::string csv_row(const RmseRow& r) {
  return num(r.snr_db) + ',' + num(r.rmse_theta_uav_deg) + ',' + num(r.rmse_phi_uav_deg) + ',' +
         num(r.rmse_theta_sat_deg) + ',' + num(r.rmse_phi_sat_deg) + ',' + num(r.crlb_theta_deg) +
         ',' + num(r.crlb_phi_deg) + ',' + std::to_string(r.trials) + ',' +
         num(r.flagged_fraction) + ',' + num(r.crlb_theta_sat_deg) + ',' + num(r.crlb_phi_sat_deg);
}

void write_csv(std::ostream& out, const RmseCurve& curve) {
  out << csv_header() << '\n';
  for (const auto& r : curve) out << csv_row(r) << '\n';
}

void write_trial_log(std::ostream& out, const CampaignResult& result) {
  for (const auto& block : result.blocks)
    for (const auto& t : block.trials) {
      auto links = nlohmann::json::array();
      for (std::size_t l = 0; l < t.links.size(); ++l) {
        const auto& lr = t.links[l];
        links.push_back({{"uav", l + 1},
                         {"uav_true", {lr.uav_true.theta_deg, lr.uav_true.phi_deg}},
                         {"sat_true", {lr.sat_true.theta_deg, lr.sat_true.phi_deg}},
                         {"uav_estimates", trace_json(lr.uav_iterations)},
                         {"sat_estimates", trace_json(lr.sat_iterations)},
                         {"uav_failed", lr.uav_failed},
                         {"sat_failed", lr.sat_failed},
                         {"uav_gain_abs", std::abs(lr.uav_gain)},
                         {"sat_gain_abs", std::abs(lr.sat_gain)},
                         {"crlb_uav_deg2", {nullable(lr.crlb_theta_uav), nullable(lr.crlb_phi_uav)}},
                         {"crlb_sat_deg2", {nullable(lr.crlb_theta_sat), nullable(lr.crlb_phi_sat)}}});
      }
      nlohmann::json line = {{"snr_db", block.snr_db},
                             {"trial", t.trial},
                             {"flagged", t.flagged},
                             {"failed", t.failed},
                             {"links", links}};
      out << line.dump() << '\n';
    }
}

}  // namespace thzdoa::harness
