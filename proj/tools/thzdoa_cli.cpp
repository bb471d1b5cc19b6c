#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thzdoa/harness/campaign.hpp"
#include "thzdoa/harness/config.hpp"
#include "thzdoa/harness/csv.hpp"
#include "thzdoa/harness/oracle.hpp"
#include "thzdoa/harness/scenario.hpp"
#include "thzdoa/seed.hpp"

namespace h = thzdoa::harness;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFailures = 3;

struct CommonOptions {
  std::string config_path;
  std::string preset = "desk";
  std::optional<double> snr_min, snr_max, snr_step;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::string out;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--preset", o.preset, "Base preset")->check(CLI::IsMember(h::preset_names()));
  cmd->add_option("--snr-min", o.snr_min, "Lowest SNR point in dB");
  cmd->add_option("--snr-max", o.snr_max, "Highest SNR point in dB");
  cmd->add_option("--snr-step", o.snr_step, "SNR step in dB");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per SNR point");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--mode", o.mode, "Estimation mode")
      ->check(CLI::IsMember({"proposed", "no_ttdu", "ideal_ttdu"}));
  cmd->add_option("--out", o.out, "Output CSV path (default: stdout)");
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
}

h::SimConfig resolve(const CommonOptions& o) {
  h::SimConfig cfg = h::preset(o.preset);
  if (!o.config_path.empty()) cfg = h::load_config_file(o.config_path, cfg);
  if (o.snr_min) cfg.snr_min_db = *o.snr_min;
  if (o.snr_max) cfg.snr_max_db = *o.snr_max;
  if (o.snr_step) cfg.snr_step_db = *o.snr_step;
  if (o.trials) cfg.trials = *o.trials;
  if (o.seed) cfg.seed = *o.seed;
  if (o.mode) cfg.mode = h::parse_mode(*o.mode);
  cfg.validate();
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw h::ConfigError("cannot write '" + path + "'");
  f << text;
}

int report_failures(const h::SimConfig& cfg, double fraction) {
  if (fraction > cfg.max_failure_fraction) {
    std::fprintf(stderr, "numerical failure rate %.3f exceeds %.3f\n", fraction,
                 cfg.max_failure_fraction);
    return kExitFailures;
  }
  return 0;
}

int cmd_run(const CommonOptions& o, const std::string& trial_log) {
  const h::SimConfig cfg = resolve(o);
  const h::CampaignResult res = h::run_campaign(cfg, o.workers);
  std::ostringstream csv;
  h::write_csv(csv, res.curve);
  emit(o.out, csv.str());
  if (!trial_log.empty()) {
    std::ostringstream log;
    h::write_trial_log(log, res);
    emit(trial_log, log.str());
  }
  return report_failures(cfg, res.failure_fraction);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_sweep(const CommonOptions& o, const std::string& param, const std::string& values) {
  const h::SimConfig base = resolve(o);
  const auto list = split(values);
  if (list.empty()) throw h::ConfigError("sweep needs at least one value");
  std::ostringstream csv;
  csv << "param,value," << h::csv_header() << '\n';
  double worst = 0.0;
  for (const auto& v : list) {
    h::SimConfig cfg = base;
    h::set_field(cfg, param, v);
    cfg.validate();
    const h::CampaignResult res = h::run_campaign(cfg, o.workers);
    worst = std::max(worst, res.failure_fraction);
    for (const auto& row : res.curve) csv << param << ',' << v << ',' << h::csv_row(row) << '\n';
  }
  emit(o.out, csv.str());
  return report_failures(base, worst);
}

int cmd_validate(const CommonOptions& o) {
  const h::SimConfig cfg = resolve(o);
  emit(o.out, h::to_json(cfg) + "\n");
  return 0;
}

int cmd_oracle(const CommonOptions& o, int instances, double snr_db, double resolution) {
  h::SimConfig cfg = resolve(o);
  const thzdoa::SystemConfig sys = cfg.system(snr_db);
  int agree = 0;
  int low_conf = 0;
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const h::Scenario sc = h::draw_scenario(cfg, h::scenario_seed(cfg.seed, i));
    const auto obs = thzdoa::observe_uav_link(sc.links.front(), 1, sys,
                                              thzdoa::derive_seed(h::noise_seed(cfg.seed, 0, i), 1));
    const auto es = thzdoa::tdu_esprit(obs.snapshots, sys.esprit);
    const auto gr = h::grid_oracle(obs.snapshots, resolution, cfg.oracle_peak_ratio);
    const double d = std::max(std::abs(std::remainder(es.angles.mu - gr.angles.mu, 2 * thzdoa::kPi)),
                              std::abs(std::remainder(es.angles.nu - gr.angles.nu, 2 * thzdoa::kPi)));
    worst = std::max(worst, d);
    agree += d < gr.final_resolution ? 1 : 0;
    low_conf += gr.low_confidence ? 1 : 0;
  }
  std::ostringstream out;
  out << "instances," << instances << "\nagree," << agree << "\nlow_confidence," << low_conf
      << "\nmax_abs_diff_rad," << worst << "\nfinal_resolution_rad," << resolution / 1000.0 << '\n';
  emit(o.out, out.str());
  return agree == instances ? 0 : kExitFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angle estimation campaigns for THz space-to-air links"};
  app.require_subcommand(1);

  CommonOptions run_o, sweep_o, validate_o, oracle_o;
  std::string trial_log;
  auto* run = app.add_subcommand("run", "Run one Monte-Carlo campaign and write the RMSE CSV");
  add_common(run, run_o);
  run->add_option("--trial-log", trial_log, "Write per-trial JSON lines to this path");

  std::string param, values;
  auto* sweep = app.add_subcommand("sweep", "Repeat a campaign over values of one config key");
  add_common(sweep, sweep_o);
  sweep->add_option("--param", param, "Config key to vary")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  auto* validate = app.add_subcommand("validate", "Check a configuration and print it resolved");
  add_common(validate, validate_o);

  int instances = 100;
  double oracle_snr = 20.0;
  double resolution = 0.5;
  auto* oracle = app.add_subcommand("oracle", "Cross-check ESPRIT against the grid-search oracle");
  add_common(oracle, oracle_o);
  oracle_o.preset = "tiny";
  oracle->add_option("--instances", instances, "Random instances")->check(CLI::PositiveNumber);
  oracle->add_option("--snr", oracle_snr, "SNR in dB");
  oracle->add_option("--resolution", resolution, "Coarse grid step in radians")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_o, trial_log);
    if (*sweep) return cmd_sweep(sweep_o, param, values);
    if (*validate) return cmd_validate(validate_o);
    if (*oracle) return cmd_oracle(oracle_o, instances, oracle_snr, resolution);
  } catch (const h::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
