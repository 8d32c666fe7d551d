#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace uswarm {

// Invalid counts, bounds, or parameter combinations. Maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed persisted files; the message names the offending key.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structurally valid instance that cannot be solved (e.g. a dead link).
// Maps to exit code 2.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AreaBounds {
  double x_min = 0.0;
  double x_max = 2000.0;
  double y_min = 0.0;
  double y_max = 2000.0;
  double huav_altitude = 120.0;
  double tuav_z_min = 30.0;
  double tuav_z_max = 100.0;
  double gu_z_min = 0.0;  // terrain band for generated ground users
  double gu_z_max = 10.0;

  Rect rect() const { return {x_min, x_max, y_min, y_max}; }
};

struct GroundUser {
  int id = -1;
  Point3 position;
  double data_bits = 1e7;    // Q_u
  double max_delay_s = 0.4;  // T_u^max
};

enum class EtaMode { kLinear, kDecibel };

struct ChannelParams {
  double alpha = 9.6;             // S-curve constant
  double beta = 0.28;             // S-curve constant
  double carrier_freq_hz = 2.4e9;
  double light_speed = 3.0e8;
  double eta_los = 0.1;           // mean additional loss, LoS
  double eta_nlos = 20.0;         // mean additional loss, NLoS
  double noise_psd = 3.9810717055349693e-21;  // -174 dBm/Hz in W/Hz
  double bw_g2a_hz = 1.8e6;
  double bw_a2a_hz = 5.0e6;
  double r_min_g2a = 2.5e7;  // default Q_u / T_u^max
  double r_min_a2a = 2.5e7;
  double p_u_min = 0.001;
  double p_u_max = 1.0;
  double p_m_min = 0.001;
  double p_m_max = 5.0;
  EtaMode eta_mode = EtaMode::kLinear;
  bool a2a_distance_corrected = false;  // multiply the A2A SNR by free-space gain
};

struct EnergyParams {
  double p0 = 99.66;    // blade profile power, hover
  double p1 = 120.16;   // induced power, hover
  double u_tips = 120.0;
  double v0 = 0.002;    // mean rotor induced velocity
  double d0 = 0.48;     // fuselage drag ratio
  double rho0 = 1.225;  // air density
  double s0 = 0.0001;   // rotor solidity
  double a0 = 0.5;      // rotor disc area
  double mass = 4.25;
  double gravity = 9.8;
  double v_xy = 15.0;   // horizontal cruise speed
  double v_z = 6.0;     // vertical speed
  bool vertical_scaled = false;  // scale vertical power by each leg's climb fraction
};

struct Scenario {
  AreaBounds bounds;
  std::vector<GroundUser> gus;
  int num_swarms = 3;
  int num_tuavs = 8;
  int m_max = 3;  // T-UAVs per swarm
  int u_max = 6;  // GUs per T-UAV per hover
  ChannelParams channel;
  EnergyParams energy;
  std::uint64_t seed = 0;
};

struct GenerateOptions {
  AreaBounds bounds;
  int num_gus = 60;
  int num_swarms = 3;
  int num_tuavs = 8;
  int m_max = 3;
  int u_max = 6;
  ChannelParams channel;
  EnergyParams energy;
  double default_data_bits = 1e7;   // Q_u for generated users
  double default_max_delay_s = 0.4; // T_u^max for generated users
  std::uint64_t seed = 0;
};

struct FeasibilityNote {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Random GU placement: x,y uniform in bounds, z uniform in the terrain band.
// Pure function of the options (including seed). Throws ConfigError when the
// counts make constraints M_s <= M_max, sum M_s = M unsatisfiable.
Scenario generate_scenario(const GenerateOptions& options);

// Reports every violated Scenario invariant; empty note iff valid.
FeasibilityNote validate_scenario(const Scenario& s);

// Self-describing JSON persistence; load(save(s)) == s bit-exactly. A missing
// required key raises ParseError naming it; unknown keys are collected into
// `warnings` (when given) and ignored.
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr);

// Parameter overrides from a config file keyed by the conventional symbol
// names (alpha, beta, f, c, g, Q, P_u_min, ..., sigma2_dbm_hz, eta_los,
// eta_nlos). Unknown keys are warnings, type mismatches are errors.
void apply_config_file(GenerateOptions& options, const std::string& path,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace uswarm
