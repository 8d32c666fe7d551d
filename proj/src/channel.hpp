#pragma once

#include "geometry.hpp"
#include "scenario.hpp"

namespace uswarm {

struct LinkBudget {
  double los_prob = 0.0;
  double gain = 0.0;
  double rate = 0.0;
  bool meets_threshold = false;
};

// Probability of a line-of-sight G2A link at elevation angle theta (degrees):
// 1 / (1 + alpha * exp(-beta * (theta - alpha))). Strictly increasing in theta.
double los_probability(double theta_deg, const ChannelParams& params);

// Composite G2A gain h = h_S * h_F. h_S mixes the mean additional losses by
// LoS probability; in decibel mode eta values are mapped through 10^(-eta/10)
// first. h_F is the free-space term (c / (4 pi f d))^2. Throws on d == 0.
double g2a_gain(const Point3& gu, const Point3& uav, const ChannelParams& params);

// Shannon uplink rate B * log2(1 + h * p / (B * sigma^2)) in bits/s.
double g2a_rate(const Point3& gu, const Point3& uav, double p_u, const ChannelParams& params);

// A2A relay rate, distance-independent: B * log2(1 + eta_los * p / (B * sigma^2)).
double a2a_rate(double p_m, const ChannelParams& params);

// A2A rate at a known T-UAV to H-UAV distance. Identical to a2a_rate unless
// params.a2a_distance_corrected is set, in which case the SNR additionally
// carries the free-space gain at distance d.
double a2a_rate_at_distance(double p_m, double d, const ChannelParams& params);

bool meets_g2a_threshold(double rate, const ChannelParams& params);
bool meets_a2a_threshold(double rate, const ChannelParams& params);

LinkBudget g2a_link(const Point3& gu, const Point3& uav, double p_u, const ChannelParams& params);
LinkBudget a2a_link(double p_m, double d, const ChannelParams& params);

}  // namespace uswarm
