#include "energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uswarm {

double horizontal_fly_power(double v, const EnergyParams& params) {
  if (v < 0.0) throw std::invalid_argument("horizontal_fly_power: v must be >= 0");
  const double blade = params.p0 * (1.0 + 3.0 * v * v / (params.u_tips * params.u_tips));
  const double x = v * v / (2.0 * params.v0 * params.v0);
  const double radicand = 1.0 / (std::sqrt(1.0 + x * x) + x);  // == sqrt(1+x^2) - x
  const double induced = params.p1 * std::sqrt(radicand);
  const double parasite = 0.5 * params.d0 * params.rho0 * params.s0 * params.a0 * v * v * v;
  return blade + induced + parasite;
}

double hover_power(const EnergyParams& params) { return params.p0 + params.p1; }

double vertical_power(double v_z, const EnergyParams& params) {
  return params.mass * params.gravity * std::abs(v_z);
}

PowerProfile power_profile(const EnergyParams& params) {
  return {horizontal_fly_power(params.v_xy, params), hover_power(params),
          vertical_power(params.v_z, params)};
}

namespace {

double transmission_delay(double q_bits, double rate) {
  if (!(rate > 0.0)) throw InfeasibleError("transmission delay: link rate is not positive");
  return q_bits / rate;
}

}  // namespace

double g2a_delay(double q_bits, double rate) { return transmission_delay(q_bits, rate); }
double a2a_delay(double q_bits, double rate) { return transmission_delay(q_bits, rate); }

double hover_duration(std::span<const double> connected_total_delays) {
  if (connected_total_delays.empty())
    throw std::invalid_argument("hover_duration: no connected GUs at this hover point");
  return *std::max_element(connected_total_delays.begin(), connected_total_delays.end());
}

double cruise_speed(const EnergyParams& params) {
  return std::hypot(params.v_xy, params.v_z);
}

double leg_flight_time(const Point3& a, const Point3& b, const EnergyParams& params) {
  const double speed = cruise_speed(params);
  if (!(speed > 0.0)) throw std::invalid_argument("leg_flight_time: zero velocity");
  return distance(a, b) / speed;
}

double leg_flight_energy(const Point3& a, const Point3& b, const EnergyParams& params) {
  const double t_leg = distance(a, b) / cruise_speed(params);
  if (t_leg == 0.0) return 0.0;
  const double p_fly = horizontal_fly_power(params.v_xy, params);
  const double p_ver = vertical_power(params.v_z, params);
  double vertical_j = p_ver * t_leg;
  if (params.vertical_scaled) {
    // Climb fraction |dz| / (v_z * T_leg); the leg's vertical energy reduces
    // to W * g * |dz| when the leg is partly level.
    const double dz = std::abs(b.z - a.z);
    vertical_j = p_ver * t_leg * std::min(1.0, dz / (params.v_z * t_leg));
  }
  return p_fly * t_leg + vertical_j;
}

EnergyBreakdown tuav_energy(std::span<const Point3> trajectory,
                            std::span<const double> hover_durations, double relay_power,
                            std::span<const double> relay_delays, const EnergyParams& params) {
  if (trajectory.empty()) throw std::invalid_argument("tuav_energy: empty trajectory");
  if (hover_durations.size() + 1 != trajectory.size())
    throw std::invalid_argument("tuav_energy: need one hover duration per visited point");

  EnergyBreakdown out;
  for (double t_ms : relay_delays) out.relay_j += relay_power * t_ms;

  const double p_hov = hover_power(params);
  for (double t : hover_durations) out.hover_j += p_hov * t;

  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i)
    out.flight_j += leg_flight_energy(trajectory[i], trajectory[i + 1], params);

  out.total_j = out.relay_j + out.hover_j + out.flight_j;
  return out;
}

double huav_mission_time(std::span<const double> member_mission_times) {
  if (member_mission_times.empty())
    throw std::invalid_argument("huav_mission_time: swarm has no T-UAVs");
  return *std::max_element(member_mission_times.begin(), member_mission_times.end());
}

double huav_energy(double t_s, const EnergyParams& params) { return hover_power(params) * t_s; }

double gu_energy(double p_u, double t_um) { return p_u * t_um; }

}  // namespace uswarm
