#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace uswarm {

using nlohmann::json;

Scenario generate_scenario(const GenerateOptions& options) {
  if (options.num_gus < 1) throw ConfigError("generate_scenario: num_gus must be >= 1");
  if (options.num_swarms < 1) throw ConfigError("generate_scenario: num_swarms must be >= 1");
  if (options.num_tuavs < 1) throw ConfigError("generate_scenario: num_tuavs must be >= 1");
  if (options.num_tuavs > options.num_swarms * options.m_max) {
    std::ostringstream msg;
    msg << "generate_scenario: " << options.num_tuavs << " T-UAVs cannot be split across "
        << options.num_swarms << " swarms of at most " << options.m_max;
    throw ConfigError(msg.str());
  }
  if (options.u_max < 1) throw ConfigError("generate_scenario: u_max must be >= 1");

  Scenario s;
  s.bounds = options.bounds;
  s.num_swarms = options.num_swarms;
  s.num_tuavs = options.num_tuavs;
  s.m_max = options.m_max;
  s.u_max = options.u_max;
  s.channel = options.channel;
  s.energy = options.energy;
  s.seed = options.seed;

  Rng rng = Rng(options.seed).child(0x67656e);  // generation stream
  s.gus.reserve(static_cast<std::size_t>(options.num_gus));
  for (int i = 0; i < options.num_gus; ++i) {
    GroundUser gu;
    gu.id = i;
    gu.position.x = rng.uniform(s.bounds.x_min, s.bounds.x_max);
    gu.position.y = rng.uniform(s.bounds.y_min, s.bounds.y_max);
    gu.position.z = rng.uniform(s.bounds.gu_z_min, s.bounds.gu_z_max);
    gu.data_bits = options.default_data_bits;
    gu.max_delay_s = options.default_max_delay_s;
    s.gus.push_back(gu);
  }
  return s;
}

FeasibilityNote validate_scenario(const Scenario& s) {
  FeasibilityNote note;
  auto flag = [&](const std::string& text) { note.violations.push_back(text); };

  if (s.bounds.x_min >= s.bounds.x_max) flag("bounds: x_min >= x_max");
  if (s.bounds.y_min >= s.bounds.y_max) flag("bounds: y_min >= y_max");
  if (s.bounds.tuav_z_min < 0.0) flag("bounds: tuav_z_min < 0");
  if (s.bounds.tuav_z_min >= s.bounds.tuav_z_max) flag("bounds: tuav_z_min >= tuav_z_max");
  if (s.gus.empty()) flag("gus: empty");
  if (s.num_swarms < 1) flag("num_swarms < 1");
  if (s.num_tuavs < 1) flag("num_tuavs < 1");
  if (s.u_max < 1) flag("u_max < 1");
  if (s.m_max < 1) flag("m_max < 1");
  if (s.num_tuavs > s.num_swarms * s.m_max)
    flag("num_tuavs > num_swarms * m_max (T-UAV allocation infeasible)");

  for (std::size_t i = 0; i < s.gus.size(); ++i) {
    const GroundUser& gu = s.gus[i];
    std::ostringstream who;
    who << "gu " << gu.id << ": ";
    if (gu.id != static_cast<int>(i)) flag(who.str() + "id does not match its position");
    if (!(gu.data_bits > 0.0)) flag(who.str() + "data_bits <= 0");
    if (!(gu.max_delay_s > 0.0)) flag(who.str() + "max_delay_s <= 0");
    if (!std::isfinite(gu.position.x) || !std::isfinite(gu.position.y) ||
        !std::isfinite(gu.position.z))
      flag(who.str() + "non-finite position");
    else {
      if (!s.bounds.rect().contains({gu.position.x, gu.position.y}))
        flag(who.str() + "position outside area bounds");
      if (gu.position.z >= s.bounds.tuav_z_min)
        flag(who.str() + "terrain height reaches the T-UAV flight floor");
    }
  }

  const ChannelParams& c = s.channel;
  if (!(c.alpha > 0.0)) flag("channel.alpha <= 0");
  if (!(c.beta > 0.0)) flag("channel.beta <= 0");
  if (!(c.carrier_freq_hz > 0.0)) flag("channel.carrier_freq_hz <= 0");
  if (!(c.light_speed > 0.0)) flag("channel.light_speed <= 0");
  if (!(c.eta_los > 0.0)) flag("channel.eta_los <= 0");
  if (!(c.eta_nlos > 0.0)) flag("channel.eta_nlos <= 0");
  if (!(c.noise_psd > 0.0)) flag("channel.noise_psd <= 0");
  if (!(c.bw_g2a_hz > 0.0)) flag("channel.bw_g2a_hz <= 0");
  if (!(c.bw_a2a_hz > 0.0)) flag("channel.bw_a2a_hz <= 0");
  if (!(c.r_min_g2a > 0.0)) flag("channel.r_min_g2a <= 0");
  if (!(c.r_min_a2a > 0.0)) flag("channel.r_min_a2a <= 0");
  if (!(c.p_u_min > 0.0) || c.p_u_min > c.p_u_max) flag("channel: bad GU power range");
  if (!(c.p_m_min > 0.0) || c.p_m_min > c.p_m_max) flag("channel: bad T-UAV power range");

  const EnergyParams& e = s.energy;
  for (const auto& [value, name] :
       {std::pair{e.p0, "p0"}, {e.p1, "p1"}, {e.u_tips, "u_tips"}, {e.v0, "v0"},
        {e.d0, "d0"}, {e.rho0, "rho0"}, {e.s0, "s0"}, {e.a0, "a0"}, {e.mass, "mass"},
        {e.gravity, "gravity"}, {e.v_xy, "v_xy"}, {e.v_z, "v_z"}}) {
    if (!(value > 0.0)) flag(std::string("energy.") + name + " <= 0");
  }
  return note;
}

namespace {

const json& require(const json& obj, const std::string& key, const std::string& scope) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("missing required key '" + (scope.empty() ? key : scope + "." + key) + "'");
  }
  return *it;
}

double require_num(const json& obj, const std::string& key, const std::string& scope) {
  const json& v = require(obj, key, scope);
  if (!v.is_number())
    throw ParseError("key '" + (scope.empty() ? key : scope + "." + key) + "' must be a number");
  return v.get<double>();
}

void note_unknown_keys(const json& obj, const std::set<std::string>& known,
                       const std::string& scope, std::vector<std::string>* warnings) {
  if (!warnings) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key()))
      warnings->push_back("ignoring unknown key '" +
                          (scope.empty() ? it.key() : scope + "." + it.key()) + "'");
  }
}

json bounds_to_json(const AreaBounds& b) {
  return json{{"x_min", b.x_min},
              {"x_max", b.x_max},
              {"y_min", b.y_min},
              {"y_max", b.y_max},
              {"huav_altitude", b.huav_altitude},
              {"tuav_z_min", b.tuav_z_min},
              {"tuav_z_max", b.tuav_z_max},
              {"gu_z_min", b.gu_z_min},
              {"gu_z_max", b.gu_z_max}};
}

AreaBounds bounds_from_json(const json& j, std::vector<std::string>* warnings) {
  AreaBounds b;
  b.x_min = require_num(j, "x_min", "bounds");
  b.x_max = require_num(j, "x_max", "bounds");
  b.y_min = require_num(j, "y_min", "bounds");
  b.y_max = require_num(j, "y_max", "bounds");
  b.huav_altitude = require_num(j, "huav_altitude", "bounds");
  b.tuav_z_min = require_num(j, "tuav_z_min", "bounds");
  b.tuav_z_max = require_num(j, "tuav_z_max", "bounds");
  b.gu_z_min = require_num(j, "gu_z_min", "bounds");
  b.gu_z_max = require_num(j, "gu_z_max", "bounds");
  note_unknown_keys(j,
                    {"x_min", "x_max", "y_min", "y_max", "huav_altitude", "tuav_z_min",
                     "tuav_z_max", "gu_z_min", "gu_z_max"},
                    "bounds", warnings);
  return b;
}

json channel_to_json(const ChannelParams& c) {
  return json{{"alpha", c.alpha},
              {"beta", c.beta},
              {"carrier_freq_hz", c.carrier_freq_hz},
              {"light_speed", c.light_speed},
              {"eta_los", c.eta_los},
              {"eta_nlos", c.eta_nlos},
              {"noise_psd_w_hz", c.noise_psd},
              {"bw_g2a_hz", c.bw_g2a_hz},
              {"bw_a2a_hz", c.bw_a2a_hz},
              {"r_min_g2a", c.r_min_g2a},
              {"r_min_a2a", c.r_min_a2a},
              {"p_u_min", c.p_u_min},
              {"p_u_max", c.p_u_max},
              {"p_m_min", c.p_m_min},
              {"p_m_max", c.p_m_max},
              {"eta_mode", c.eta_mode == EtaMode::kLinear ? "linear" : "decibel"},
              {"a2a_distance_corrected", c.a2a_distance_corrected}};
}

ChannelParams channel_from_json(const json& j, std::vector<std::string>* warnings) {
  ChannelParams c;
  c.alpha = require_num(j, "alpha", "channel");
  c.beta = require_num(j, "beta", "channel");
  c.carrier_freq_hz = require_num(j, "carrier_freq_hz", "channel");
  c.light_speed = require_num(j, "light_speed", "channel");
  c.eta_los = require_num(j, "eta_los", "channel");
  c.eta_nlos = require_num(j, "eta_nlos", "channel");
  c.noise_psd = require_num(j, "noise_psd_w_hz", "channel");
  c.bw_g2a_hz = require_num(j, "bw_g2a_hz", "channel");
  c.bw_a2a_hz = require_num(j, "bw_a2a_hz", "channel");
  c.r_min_g2a = require_num(j, "r_min_g2a", "channel");
  c.r_min_a2a = require_num(j, "r_min_a2a", "channel");
  c.p_u_min = require_num(j, "p_u_min", "channel");
  c.p_u_max = require_num(j, "p_u_max", "channel");
  c.p_m_min = require_num(j, "p_m_min", "channel");
  c.p_m_max = require_num(j, "p_m_max", "channel");
  const std::string mode = require(j, "eta_mode", "channel").get<std::string>();
  if (mode == "linear")
    c.eta_mode = EtaMode::kLinear;
  else if (mode == "decibel")
    c.eta_mode = EtaMode::kDecibel;
  else
    throw ParseError("key 'channel.eta_mode' must be 'linear' or 'decibel'");
  c.a2a_distance_corrected = require(j, "a2a_distance_corrected", "channel").get<bool>();
  note_unknown_keys(j,
                    {"alpha", "beta", "carrier_freq_hz", "light_speed", "eta_los", "eta_nlos",
                     "noise_psd_w_hz", "bw_g2a_hz", "bw_a2a_hz", "r_min_g2a", "r_min_a2a",
                     "p_u_min", "p_u_max", "p_m_min", "p_m_max", "eta_mode",
                     "a2a_distance_corrected"},
                    "channel", warnings);
  return c;
}

json energy_to_json(const EnergyParams& e) {
  return json{{"p0", e.p0},     {"p1", e.p1},           {"u_tips", e.u_tips},
              {"v0", e.v0},     {"d0", e.d0},           {"rho0", e.rho0},
              {"s0", e.s0},     {"a0", e.a0},           {"mass", e.mass},
              {"gravity", e.gravity}, {"v_xy", e.v_xy}, {"v_z", e.v_z},
              {"vertical_scaled", e.vertical_scaled}};
}

EnergyParams energy_from_json(const json& j, std::vector<std::string>* warnings) {
  EnergyParams e;
  e.p0 = require_num(j, "p0", "energy");
  e.p1 = require_num(j, "p1", "energy");
  e.u_tips = require_num(j, "u_tips", "energy");
  e.v0 = require_num(j, "v0", "energy");
  e.d0 = require_num(j, "d0", "energy");
  e.rho0 = require_num(j, "rho0", "energy");
  e.s0 = require_num(j, "s0", "energy");
  e.a0 = require_num(j, "a0", "energy");
  e.mass = require_num(j, "mass", "energy");
  e.gravity = require_num(j, "gravity", "energy");
  e.v_xy = require_num(j, "v_xy", "energy");
  e.v_z = require_num(j, "v_z", "energy");
  e.vertical_scaled = require(j, "vertical_scaled", "energy").get<bool>();
  note_unknown_keys(j,
                    {"p0", "p1", "u_tips", "v0", "d0", "rho0", "s0", "a0", "mass", "gravity",
                     "v_xy", "v_z", "vertical_scaled"},
                    "energy", warnings);
  return e;
}

}  // namespace

void save_scenario(const Scenario& s, const std::string& path) {
  json j;
  j["format"] = "uswarm-scenario";
  j["version"] = 1;
  j["bounds"] = bounds_to_json(s.bounds);
  j["num_swarms"] = s.num_swarms;
  j["num_tuavs"] = s.num_tuavs;
  j["m_max"] = s.m_max;
  j["u_max"] = s.u_max;
  j["seed"] = s.seed;
  j["channel"] = channel_to_json(s.channel);
  j["energy"] = energy_to_json(s.energy);
  json gus = json::array();
  for (const GroundUser& gu : s.gus) {
    gus.push_back(json{{"id", gu.id},
                       {"x", gu.position.x},
                       {"y", gu.position.y},
                       {"z", gu.position.z},
                       {"data_bits", gu.data_bits},
                       {"max_delay_s", gu.max_delay_s}});
  }
  j["gus"] = std::move(gus);

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
  }

  Scenario s;
  const std::string format = require(j, "format", "").get<std::string>();
  if (format != "uswarm-scenario") throw ParseError("key 'format' must be 'uswarm-scenario'");
  s.bounds = bounds_from_json(require(j, "bounds", ""), warnings);
  s.num_swarms = require(j, "num_swarms", "").get<int>();
  s.num_tuavs = require(j, "num_tuavs", "").get<int>();
  s.m_max = require(j, "m_max", "").get<int>();
  s.u_max = require(j, "u_max", "").get<int>();
  s.seed = require(j, "seed", "").get<std::uint64_t>();
  s.channel = channel_from_json(require(j, "channel", ""), warnings);
  s.energy = energy_from_json(require(j, "energy", ""), warnings);

  const json& gus = require(j, "gus", "");
  if (!gus.is_array()) throw ParseError("key 'gus' must be an array");
  for (const json& g : gus) {
    GroundUser gu;
    gu.id = require(g, "id", "gus[]").get<int>();
    gu.position.x = require_num(g, "x", "gus[]");
    gu.position.y = require_num(g, "y", "gus[]");
    gu.position.z = require_num(g, "z", "gus[]");
    gu.data_bits = require_num(g, "data_bits", "gus[]");
    gu.max_delay_s = require_num(g, "max_delay_s", "gus[]");
    note_unknown_keys(g, {"id", "x", "y", "z", "data_bits", "max_delay_s"}, "gus[]", warnings);
    s.gus.push_back(gu);
  }
  note_unknown_keys(j,
                    {"format", "version", "bounds", "num_swarms", "num_tuavs", "m_max", "u_max",
                     "seed", "channel", "energy", "gus"},
                    "", warnings);
  return s;
}

void apply_config_file(GenerateOptions& options, const std::string& path,
                       std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in config '") + path + "': " + e.what());
  }
  if (!j.is_object()) throw ParseError("config root must be an object");

  bool explicit_r_min = false;
  bool explicit_r_s_min = false;
  double q_bits = 1e7;
  double t_max = 0.4;
  bool q_set = false, t_set = false;

  const std::set<std::string> known = {
      "alpha",  "beta", "f",    "c",       "g",    "Q",    "P_u_min", "P_u_max",
      "P_m_min", "P_m_max", "T_u_max", "B_um", "B_ms", "U_tips", "W", "A0",
      "v0",     "P0",   "P1",   "rho0",    "d0",   "v_xy", "v_z",     "s0",
      "sigma2_dbm_hz", "eta_los", "eta_nlos", "R_tr_min", "R_tr_s_min",
      "eta_mode", "a2a_distance_corrected", "vertical_scaled", "U_max", "M_max",
      "x_min", "x_max", "y_min", "y_max", "huav_altitude", "tuav_z_min", "tuav_z_max",
      "gu_z_min", "gu_z_max"};
  note_unknown_keys(j, known, "config", warnings);

  auto num = [&](const char* key) { return require_num(j, key, "config"); };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "alpha") options.channel.alpha = num("alpha");
    else if (key == "beta") options.channel.beta = num("beta");
    else if (key == "f") options.channel.carrier_freq_hz = num("f");
    else if (key == "c") options.channel.light_speed = num("c");
    else if (key == "g") options.energy.gravity = num("g");
    else if (key == "Q") { q_bits = num("Q"); q_set = true; }
    else if (key == "P_u_min") options.channel.p_u_min = num("P_u_min");
    else if (key == "P_u_max") options.channel.p_u_max = num("P_u_max");
    else if (key == "P_m_min") options.channel.p_m_min = num("P_m_min");
    else if (key == "P_m_max") options.channel.p_m_max = num("P_m_max");
    else if (key == "T_u_max") { t_max = num("T_u_max"); t_set = true; }
    else if (key == "B_um") options.channel.bw_g2a_hz = num("B_um");
    else if (key == "B_ms") options.channel.bw_a2a_hz = num("B_ms");
    else if (key == "U_tips") options.energy.u_tips = num("U_tips");
    else if (key == "W") options.energy.mass = num("W");
    else if (key == "A0") options.energy.a0 = num("A0");
    else if (key == "v0") options.energy.v0 = num("v0");
    else if (key == "P0") options.energy.p0 = num("P0");
    else if (key == "P1") options.energy.p1 = num("P1");
    else if (key == "rho0") options.energy.rho0 = num("rho0");
    else if (key == "d0") options.energy.d0 = num("d0");
    else if (key == "v_xy") options.energy.v_xy = num("v_xy");
    else if (key == "v_z") options.energy.v_z = num("v_z");
    else if (key == "s0") options.energy.s0 = num("s0");
    else if (key == "sigma2_dbm_hz")
      options.channel.noise_psd = std::pow(10.0, num("sigma2_dbm_hz") / 10.0) * 1e-3;
    else if (key == "eta_los") options.channel.eta_los = num("eta_los");
    else if (key == "eta_nlos") options.channel.eta_nlos = num("eta_nlos");
    else if (key == "R_tr_min") { options.channel.r_min_g2a = num("R_tr_min"); explicit_r_min = true; }
    else if (key == "R_tr_s_min") { options.channel.r_min_a2a = num("R_tr_s_min"); explicit_r_s_min = true; }
    else if (key == "eta_mode") {
      const std::string mode = it.value().get<std::string>();
      if (mode == "linear") options.channel.eta_mode = EtaMode::kLinear;
      else if (mode == "decibel") options.channel.eta_mode = EtaMode::kDecibel;
      else throw ParseError("config.eta_mode must be 'linear' or 'decibel'");
    } else if (key == "a2a_distance_corrected")
      options.channel.a2a_distance_corrected = it.value().get<bool>();
    else if (key == "vertical_scaled") options.energy.vertical_scaled = it.value().get<bool>();
    else if (key == "U_max") options.u_max = static_cast<int>(num("U_max"));
    else if (key == "M_max") options.m_max = static_cast<int>(num("M_max"));
    else if (key == "x_min") options.bounds.x_min = num("x_min");
    else if (key == "x_max") options.bounds.x_max = num("x_max");
    else if (key == "y_min") options.bounds.y_min = num("y_min");
    else if (key == "y_max") options.bounds.y_max = num("y_max");
    else if (key == "huav_altitude") options.bounds.huav_altitude = num("huav_altitude");
    else if (key == "tuav_z_min") options.bounds.tuav_z_min = num("tuav_z_min");
    else if (key == "tuav_z_max") options.bounds.tuav_z_max = num("tuav_z_max");
    else if (key == "gu_z_min") options.bounds.gu_z_min = num("gu_z_min");
    else if (key == "gu_z_max") options.bounds.gu_z_max = num("gu_z_max");
  }

  if (q_set) options.default_data_bits = q_bits;
  if (t_set) options.default_max_delay_s = t_max;
  if (q_set || t_set) {
    if (!(options.default_max_delay_s > 0.0)) throw ConfigError("config.T_u_max must be > 0");
    // Rate floors default to the rate that just meets the delay budget.
    const double floor_rate = options.default_data_bits / options.default_max_delay_s;
    if (!explicit_r_min) options.channel.r_min_g2a = floor_rate;
    if (!explicit_r_s_min) options.channel.r_min_a2a = floor_rate;
  }
}

}  // namespace uswarm
