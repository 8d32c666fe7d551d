#pragma once

#include <span>

#include "geometry.hpp"
#include "scenario.hpp"

namespace uswarm {

struct PowerProfile {
  double p_fly_horizontal_w = 0.0;
  double p_hover_w = 0.0;
  double p_vertical_w = 0.0;
};

struct LegTiming {
  double hover_s = 0.0;
  double flight_s = 0.0;
};

struct EnergyBreakdown {
  double relay_j = 0.0;
  double hover_j = 0.0;
  double flight_j = 0.0;
  double total_j = 0.0;
};

// Rotary-wing power for straight-and-level flight at horizontal speed v:
//   P0 (1 + 3 v^2 / U_tips^2)
// + P1 sqrt( sqrt(1 + v^4 / (4 v0^4)) - v^2 / (2 v0^2) )
// + 1/2 d0 rho0 s0 A0 v^3.
// The induced-power radicand is evaluated as 1 / (sqrt(1 + x^2) + x) with
// x = v^2 / (2 v0^2), which stays accurate when x is huge (tiny v0) where the
// literal difference cancels catastrophically.
double horizontal_fly_power(double v, const EnergyParams& params);

// Hover power P0 + P1; equals horizontal_fly_power(0).
double hover_power(const EnergyParams& params);

// Vertical flight power W * g * |v_z|.
double vertical_power(double v_z, const EnergyParams& params);

PowerProfile power_profile(const EnergyParams& params);

// Transmission delay Q / R. Throws InfeasibleError on a non-positive rate.
double g2a_delay(double q_bits, double rate);
double a2a_delay(double q_bits, double rate);

// Hover duration at one point: the longest total delay among connected GUs.
// Throws on an empty set (the pre-deployment never produces one).
double hover_duration(std::span<const double> connected_total_delays);

// sqrt(v_xy^2 + v_z^2): the constant 3D speed of every leg.
double cruise_speed(const EnergyParams& params);

// Leg duration ||a - b|| / ||velocity||.
double leg_flight_time(const Point3& a, const Point3& b, const EnergyParams& params);

// Energy spent flying one leg; the single source of truth for the literal and
// the climb-fraction-scaled vertical treatment described at tuav_energy.
double leg_flight_energy(const Point3& a, const Point3& b, const EnergyParams& params);

// T-UAV mission energy. `trajectory` starts at the swarm site and visits the
// hover points in order; `hover_durations` has one entry per hover point,
// `relay_delays` one entry per served GU. When params.vertical_scaled is set,
// the vertical term of each leg is weighted by |dz| / (v_z * T_leg), i.e. by
// the fraction of the leg actually spent climbing, so leg vertical energy
// becomes W * g * |dz|; by default both power terms apply to the whole leg.
EnergyBreakdown tuav_energy(std::span<const Point3> trajectory,
                            std::span<const double> hover_durations, double relay_power,
                            std::span<const double> relay_delays, const EnergyParams& params);

// H-UAV hovering window: the longest member mission (hover + flight) time.
double huav_mission_time(std::span<const double> member_mission_times);
double huav_energy(double t_s, const EnergyParams& params);

// GU transmit energy p_u * T_{u,m} for its single active uplink.
double gu_energy(double p_u, double t_um);

}  // namespace uswarm
