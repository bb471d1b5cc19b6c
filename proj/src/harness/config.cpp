#include "thzdoa/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "json.hpp"

namespace thzdoa::harness {

namespace {

using json = nlohmann::json;

using Member = std::variant<int SimConfig::*, double SimConfig::*, std::uint64_t SimConfig::*,
                            EstimationMode SimConfig::*>;

struct Field {
  const char* key;
  Member member;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"uav_h", &SimConfig::uav_h},
      {"uav_v", &SimConfig::uav_v},
      {"sat_tile_h", &SimConfig::sat_tile_h},
      {"sat_tile_v", &SimConfig::sat_tile_v},
      {"sat_tiles_h", &SimConfig::sat_tiles_h},
      {"sat_tiles_v", &SimConfig::sat_tiles_v},
      {"uav_virtual_h", &SimConfig::uav_virtual_h},
      {"uav_virtual_v", &SimConfig::uav_virtual_v},
      {"sat_virtual_h", &SimConfig::sat_virtual_h},
      {"sat_virtual_v", &SimConfig::sat_virtual_v},
      {"uav_group_h", &SimConfig::uav_group_h},
      {"uav_group_v", &SimConfig::uav_group_v},
      {"sat_group_h", &SimConfig::sat_group_h},
      {"sat_group_v", &SimConfig::sat_group_v},
      {"carrier_hz", &SimConfig::carrier_hz},
      {"bandwidth_hz", &SimConfig::bandwidth_hz},
      {"num_subcarriers", &SimConfig::num_subcarriers},
      {"cyclic_prefix", &SimConfig::cyclic_prefix},
      {"symbol_duration_s", &SimConfig::symbol_duration_s},
      {"num_uavs", &SimConfig::num_uavs},
      {"angle_limit_deg", &SimConfig::angle_limit_deg},
      {"prior_offset_deg", &SimConfig::prior_offset_deg},
      {"max_delay_s", &SimConfig::max_delay_s},
      {"alpha_variance", &SimConfig::alpha_variance},
      {"vertical_distance_m", &SimConfig::vertical_distance_m},
      {"radius_m", &SimConfig::radius_m},
      {"radial_velocity_mps", &SimConfig::radial_velocity_mps},
      {"doppler_residual_ratio", &SimConfig::doppler_residual_ratio},
      {"snr_min_db", &SimConfig::snr_min_db},
      {"snr_max_db", &SimConfig::snr_max_db},
      {"snr_step_db", &SimConfig::snr_step_db},
      {"trials", &SimConfig::trials},
      {"i_max_uav", &SimConfig::i_max_uav},
      {"i_max_sat", &SimConfig::i_max_sat},
      {"mode", &SimConfig::mode},
      {"seed", &SimConfig::seed},
      {"esprit_min_eigen_ratio", &SimConfig::esprit_min_eigen_ratio},
      {"oracle_peak_ratio", &SimConfig::oracle_peak_ratio},
      {"max_failure_fraction", &SimConfig::max_failure_fraction},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

void assign(SimConfig& cfg, const Field& f, const json& v) {
  try {
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, EstimationMode>) {
            cfg.*member = parse_mode(v.get<std::string>());
          } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw ConfigError("expected a number");
            cfg.*member = v.get<double>();
          } else {
            if (!v.is_number_integer()) throw ConfigError("expected an integer");
            if constexpr (std::is_same_v<T, std::uint64_t>) {
              if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
            }
            cfg.*member = v.get<T>();
          }
        },
        f.member);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + f.key + "': " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("field '") + f.key + "': " + e.what());
  }
}

json field_value(const SimConfig& cfg, const Field& f) {
  return std::visit(
      [&](auto member) -> json {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, EstimationMode>)
          return mode_name(cfg.*member);
        else
          return cfg.*member;
      },
      f.member);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool divides(int d, int n) { return d >= 1 && n % d == 0; }

}  // namespace

void SimConfig::validate() const {
  for (int v : {uav_h, uav_v, sat_tile_h, sat_tile_v, sat_tiles_h, sat_tiles_v})
    require(v >= 1, "array dimensions must be >= 1");
  require(uav_virtual_h >= 2 && uav_virtual_v >= 2 && sat_virtual_h >= 2 && sat_virtual_v >= 2,
          "virtual array dimensions must be >= 2");
  require(uav_virtual_h <= uav_h && uav_virtual_v <= uav_v,
          "UAV virtual array larger than the UAV array");
  require(sat_virtual_h <= sat_tile_h && sat_virtual_v <= sat_tile_v,
          "satellite virtual array larger than a satellite subarray");
  require(divides(uav_group_h, uav_h) && divides(uav_group_v, uav_v),
          "UAV TTDU groups must tile the UAV array");
  require(divides(sat_group_h, sat_tile_h * sat_tiles_h) && divides(sat_group_v, sat_tile_v * sat_tiles_v),
          "satellite TTDU groups must tile the satellite array");
  require(carrier_hz > 0.0 && bandwidth_hz > 0.0, "carrier and bandwidth must be positive");
  require(bandwidth_hz < 2.0 * carrier_hz, "bandwidth must be below twice the carrier");
  require(num_subcarriers >= 1 && cyclic_prefix >= 0, "invalid subcarrier count or cyclic prefix");
  require(num_uavs >= 1, "num_uavs must be >= 1");
  require(num_subcarriers % num_uavs == 0, "num_uavs must divide num_subcarriers");
  require(sat_tiles_h * sat_tiles_v >= num_uavs, "fewer satellite subarrays than UAVs");
  require(angle_limit_deg > 0.0 && angle_limit_deg < 90.0, "angle_limit_deg must lie in (0, 90)");
  require(prior_offset_deg >= 0.0 && angle_limit_deg + prior_offset_deg < 90.0,
          "prior offsets must keep priors inside (-90, 90) degrees");
  require(alpha_variance > 0.0, "alpha_variance must be positive");
  require(vertical_distance_m > 0.0 && radius_m >= 0.0, "invalid scenario geometry");
  require(std::isfinite(radial_velocity_mps) && std::isfinite(doppler_residual_ratio),
          "Doppler parameters must be finite");
  require(std::isfinite(snr_min_db) && std::isfinite(snr_max_db) && snr_min_db <= snr_max_db,
          "snr_min_db must not exceed snr_max_db");
  require(snr_step_db > 0.0, "snr_step_db must be positive");
  require(trials >= 1, "trials must be >= 1");
  require(i_max_uav >= 1 && i_max_sat >= 1, "maximum iterations must be >= 1");
  require(esprit_min_eigen_ratio >= 0.0, "esprit_min_eigen_ratio must be non-negative");
  require(oracle_peak_ratio >= 1.0, "oracle_peak_ratio must be >= 1");
  require(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0,
          "max_failure_fraction must lie in [0, 1]");
}

std::vector<double> SimConfig::snr_points_db() const {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((snr_max_db - snr_min_db) / snr_step_db + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) out.push_back(snr_min_db + i * snr_step_db);
  return out;
}

SubcarrierGrid SimConfig::grid() const {
  return {num_subcarriers, carrier_hz, bandwidth_hz, cyclic_prefix, symbol_duration_s};
}

double SimConfig::tau_max_s() const {
  return max_delay_s > 0.0 ? max_delay_s : cyclic_prefix / bandwidth_hz;
}

double SimConfig::noise_sigma(double snr_db) const {
  return std::sqrt(alpha_variance / std::pow(10.0, snr_db / 10.0));
}

SystemConfig SimConfig::system(double snr_db) const {
  SystemConfig s;
  s.uav_array = {uav_h, uav_v};
  s.sat_tile = {sat_tile_h, sat_tile_v};
  s.sat_tiles_h = sat_tiles_h;
  s.sat_tiles_v = sat_tiles_v;
  s.uav_virtual_h = uav_virtual_h;
  s.uav_virtual_v = uav_virtual_v;
  s.sat_virtual_h = sat_virtual_h;
  s.sat_virtual_v = sat_virtual_v;
  s.uav_group_h = uav_group_h;
  s.uav_group_v = uav_group_v;
  s.sat_group_h = sat_group_h;
  s.sat_group_v = sat_group_v;
  s.grid = grid();
  s.num_uavs = num_uavs;
  s.i_max_uav = i_max_uav;
  s.i_max_sat = i_max_sat;
  s.mode = mode;
  s.tx_power = 1.0;
  s.noise_sigma = noise_sigma(snr_db);
  s.doppler_compensated = true;
  s.esprit.min_eigen_ratio = esprit_min_eigen_ratio;
  return s;
}

SimConfig preset(const std::string& name) {
  SimConfig c;
  if (name == "desk") return c;
  if (name == "paper") {
    c.uav_h = c.uav_v = 200;
    c.sat_tile_h = c.sat_tile_v = 200;
    c.uav_group_h = c.uav_group_v = c.sat_group_h = c.sat_group_v = 5;
    c.num_subcarriers = 2048;
    c.cyclic_prefix = 128;
    return c;
  }
  if (name == "tiny") {
    c.uav_h = c.uav_v = 16;
    c.sat_tile_h = c.sat_tile_v = 16;
    c.num_subcarriers = 64;
    c.cyclic_prefix = 8;
    c.trials = 100;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"paper", "desk", "tiny"}; }

std::string mode_name(EstimationMode m) {
  switch (m) {
    case EstimationMode::proposed: return "proposed";
    case EstimationMode::no_ttdu: return "no_ttdu";
    case EstimationMode::ideal_ttdu: return "ideal_ttdu";
  }
  return "proposed";
}

EstimationMode parse_mode(const std::string& s) {
  if (s == "proposed") return EstimationMode::proposed;
  if (s == "no_ttdu") return EstimationMode::no_ttdu;
  if (s == "ideal_ttdu") return EstimationMode::ideal_ttdu;
  throw ConfigError("unknown mode '" + s + "'");
}

SimConfig load_config(const std::string& json_text, const SimConfig& base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  require(doc.is_object(), "config must be a JSON object");
  require(doc.contains("schema_version"), "config lacks schema_version");
  require(doc["schema_version"].is_number_integer() && doc["schema_version"].get<int>() == kSchemaVersion,
          "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  SimConfig cfg = base;
  if (doc.contains("preset")) {
    require(doc["preset"].is_string(), "preset must be a string");
    cfg = preset(doc["preset"].get<std::string>());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "schema_version" || key == "preset") continue;
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + key + "'");
    assign(cfg, *f, value);
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config_file(const std::string& path, const SimConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), base);
}

std::string to_json(const SimConfig& cfg) {
  json doc = json::object();
  doc["schema_version"] = kSchemaVersion;
  for (const auto& f : fields()) doc[f.key] = field_value(cfg, f);
  return doc.dump(2);
}

void set_field(SimConfig& cfg, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + key + "'");
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = value;  // bare strings such as mode names
  }
  assign(cfg, *f, v);
}

}  // namespace thzdoa::harness
