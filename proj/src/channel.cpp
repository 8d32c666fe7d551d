#include "channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uswarm {

double los_probability(double theta_deg, const ChannelParams& params) {
  return 1.0 / (1.0 + params.alpha * std::exp(-params.beta * (theta_deg - params.alpha)));
}

namespace {

double eta_factor(double eta, const ChannelParams& params) {
  return params.eta_mode == EtaMode::kLinear ? eta : std::pow(10.0, -eta / 10.0);
}

double free_space_gain(double d, const ChannelParams& params) {
  const double amplitude =
      params.light_speed / (4.0 * std::numbers::pi * params.carrier_freq_hz * d);
  return amplitude * amplitude;
}

double shannon_rate(double bandwidth, double gain, double power, const ChannelParams& params) {
  const double noise = bandwidth * params.noise_psd;
  return bandwidth * std::log2(1.0 + gain * power / noise);
}

}  // namespace

double g2a_gain(const Point3& gu, const Point3& uav, const ChannelParams& params) {
  const double d = distance(gu, uav);
  if (d == 0.0) throw std::invalid_argument("g2a_gain: coincident endpoints");
  const double p_los = los_probability(elevation_angle_deg(gu, uav), params);
  const double h_s = p_los * eta_factor(params.eta_los, params) +
                     (1.0 - p_los) * eta_factor(params.eta_nlos, params);
  return h_s * free_space_gain(d, params);
}

double g2a_rate(const Point3& gu, const Point3& uav, double p_u, const ChannelParams& params) {
  return shannon_rate(params.bw_g2a_hz, g2a_gain(gu, uav, params), p_u, params);
}

double a2a_rate(double p_m, const ChannelParams& params) {
  return shannon_rate(params.bw_a2a_hz, eta_factor(params.eta_los, params), p_m, params);
}

double a2a_rate_at_distance(double p_m, double d, const ChannelParams& params) {
  if (!params.a2a_distance_corrected) return a2a_rate(p_m, params);
  if (d == 0.0) throw std::invalid_argument("a2a_rate_at_distance: zero distance");
  const double gain = eta_factor(params.eta_los, params) * free_space_gain(d, params);
  return shannon_rate(params.bw_a2a_hz, gain, p_m, params);
}

bool meets_g2a_threshold(double rate, const ChannelParams& params) {
  return rate >= params.r_min_g2a;
}

bool meets_a2a_threshold(double rate, const ChannelParams& params) {
  return rate >= params.r_min_a2a;
}

LinkBudget g2a_link(const Point3& gu, const Point3& uav, double p_u, const ChannelParams& params) {
  LinkBudget link;
  link.los_prob = los_probability(elevation_angle_deg(gu, uav), params);
  link.gain = g2a_gain(gu, uav, params);
  link.rate = shannon_rate(params.bw_g2a_hz, link.gain, p_u, params);
  link.meets_threshold = meets_g2a_threshold(link.rate, params);
  return link;
}

LinkBudget a2a_link(double p_m, double d, const ChannelParams& params) {
  LinkBudget link;
  link.los_prob = 1.0;
  link.gain = eta_factor(params.eta_los, params);
  link.rate = a2a_rate_at_distance(p_m, d, params);
  link.meets_threshold = meets_a2a_threshold(link.rate, params);
  return link;
}

}  // namespace uswarm
