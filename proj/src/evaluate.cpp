#include "evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "channel.hpp"

namespace uswarm {

void check_solution_shape(const Scenario& scenario, const Deployment& deployment,
                          const Solution& solution) {
  const std::size_t num_tuavs = deployment.tuavs.size();
  auto fail = [](const std::string& what) { throw ConfigError("solution shape: " + what); };

  if (solution.orderings.size() != num_tuavs) fail("orderings size != number of T-UAVs");
  if (solution.hover_points.size() != num_tuavs) fail("hover_points size != number of T-UAVs");
  if (solution.gu_powers.size() != scenario.gus.size()) fail("gu_powers size != number of GUs");
  if (solution.relay_powers.size() != num_tuavs) fail("relay_powers size != number of T-UAVs");
  if (deployment.connections.assignment.size() != scenario.gus.size())
    fail("connection plan does not cover the GU set");

  for (std::size_t m = 0; m < num_tuavs; ++m) {
    const std::size_t num_candidates = deployment.tuavs[m].candidates.size();
    if (solution.hover_points[m].size() != num_candidates)
      fail("hover_points entry count != candidate count");
    if (solution.orderings[m].size() != num_candidates)
      fail("ordering length != candidate count");
    for (int n : solution.orderings[m])
      if (n < 0 || static_cast<std::size_t>(n) >= num_candidates)
        fail("ordering references an unknown candidate");
  }
  for (const HoverRef& ref : deployment.connections.assignment) {
    if (ref.tuav < 0 || static_cast<std::size_t>(ref.tuav) >= num_tuavs)
      fail("connection references an unknown T-UAV");
    if (ref.candidate < 0 ||
        static_cast<std::size_t>(ref.candidate) >=
            deployment.tuavs[static_cast<std::size_t>(ref.tuav)].candidates.size())
      fail("connection references an unknown candidate");
  }
}

Evaluation evaluate(const Scenario& scenario, const Deployment& deployment,
                    const Solution& solution) {
  check_solution_shape(scenario, deployment, solution);

  const std::size_t num_gus = scenario.gus.size();
  const std::size_t num_tuavs = deployment.tuavs.size();
  const std::size_t num_swarms = deployment.swarm_sites.size();

  Evaluation out;
  out.gu_delay.assign(num_gus, 0.0);
  out.gu_energy.assign(num_gus, 0.0);
  out.tuav_energy.resize(num_tuavs);
  out.tuav_timing.resize(num_tuavs);
  out.swarm_hover_time.assign(num_swarms, 0.0);
  out.swarm_energy.assign(num_swarms, 0.0);

  // Per-GU link delays.
  std::vector<double> t_g2a(num_gus, 0.0), t_a2a(num_gus, 0.0);
  for (std::size_t u = 0; u < num_gus; ++u) {
    const HoverRef ref = deployment.connections.assignment[u];
    const auto m = static_cast<std::size_t>(ref.tuav);
    const Point3& hover = solution.hover_points[m][static_cast<std::size_t>(ref.candidate)];
    const GroundUser& gu = scenario.gus[u];

    const double rate_up = g2a_rate(gu.position, hover, solution.gu_powers[u], scenario.channel);
    const double d_ms = distance(
        hover, deployment.swarm_sites[static_cast<std::size_t>(deployment.tuavs[m].swarm)]);
    const double rate_relay =
        a2a_rate_at_distance(solution.relay_powers[m], d_ms, scenario.channel);
    if (!(rate_up > 0.0) || !(rate_relay > 0.0)) {
      out.link_infeasible = true;
      return out;
    }
    t_g2a[u] = gu.data_bits / rate_up;
    t_a2a[u] = gu.data_bits / rate_relay;
    out.gu_delay[u] = t_g2a[u] + t_a2a[u];
    out.gu_energy[u] = gu_energy(solution.gu_powers[u], t_g2a[u]);
  }

  // Per-T-UAV energies and mission times.
  std::vector<double> member_time_per_swarm_max(num_swarms, 0.0);
  double total_tuav_energy = 0.0;
  for (std::size_t m = 0; m < num_tuavs; ++m) {
    const TuavPlan& plan = deployment.tuavs[m];
    const std::size_t num_candidates = plan.candidates.size();

    std::vector<double> hover_durations;
    hover_durations.reserve(num_candidates);
    std::vector<Point3> trajectory;
    trajectory.reserve(num_candidates + 1);
    trajectory.push_back(deployment.swarm_sites[static_cast<std::size_t>(plan.swarm)]);
    for (int n : solution.orderings[m]) {
      trajectory.push_back(solution.hover_points[m][static_cast<std::size_t>(n)]);
      double longest = 0.0;
      for (int id : plan.candidates[static_cast<std::size_t>(n)].members)
        longest = std::max(longest, out.gu_delay[static_cast<std::size_t>(id)]);
      hover_durations.push_back(longest);
    }

    std::vector<double> relay_delays;
    for (std::size_t n = 0; n < num_candidates; ++n)
      for (int id : plan.candidates[n].members)
        relay_delays.push_back(t_a2a[static_cast<std::size_t>(id)]);

    out.tuav_energy[m] = tuav_energy(trajectory, hover_durations, solution.relay_powers[m],
                                     relay_delays, scenario.energy);
    total_tuav_energy += out.tuav_energy[m].total_j;

    LegTiming& timing = out.tuav_timing[m];
    for (double t : hover_durations) timing.hover_s += t;
    const double speed = cruise_speed(scenario.energy);
    for (std::size_t i = 0; i + 1 < trajectory.size(); ++i)
      timing.flight_s += distance(trajectory[i], trajectory[i + 1]) / speed;
    auto& best = member_time_per_swarm_max[static_cast<std::size_t>(plan.swarm)];
    best = std::max(best, timing.hover_s + timing.flight_s);
  }

  double total_huav_energy = 0.0;
  for (std::size_t s = 0; s < num_swarms; ++s) {
    out.swarm_hover_time[s] = member_time_per_swarm_max[s];
    out.swarm_energy[s] = huav_energy(out.swarm_hover_time[s], scenario.energy);
    total_huav_energy += out.swarm_energy[s];
  }

  out.objectives.teu_j = total_huav_energy + total_tuav_energy;
  double sum_e = 0.0, sum_t = 0.0;
  for (std::size_t u = 0; u < num_gus; ++u) {
    sum_e += out.gu_energy[u];
    sum_t += out.gu_delay[u];
  }
  out.objectives.aeg_j = sum_e / static_cast<double>(num_gus);
  out.objectives.adg_s = sum_t / static_cast<double>(num_gus);
  return out;
}

namespace {

void add_violation(FeasibilityReport& report, const std::string& what, double excess) {
  report.details.push_back({what, excess});
  report.violation += excess;
  report.feasible = false;
}

}  // namespace

FeasibilityReport feasibility(const Scenario& scenario, const Deployment& deployment,
                              const Solution& solution) {
  check_solution_shape(scenario, deployment, solution);
  FeasibilityReport report;

  const std::size_t num_gus = scenario.gus.size();
  const ChannelParams& ch = scenario.channel;

  // Connection uniqueness and per-hover capacity.
  std::vector<std::vector<int>> load(deployment.tuavs.size());
  for (std::size_t m = 0; m < deployment.tuavs.size(); ++m)
    load[m].assign(deployment.tuavs[m].candidates.size(), 0);
  for (std::size_t u = 0; u < num_gus; ++u) {
    const HoverRef ref = deployment.connections.assignment[u];
    ++load[static_cast<std::size_t>(ref.tuav)][static_cast<std::size_t>(ref.candidate)];
  }
  for (std::size_t m = 0; m < load.size(); ++m)
    for (std::size_t n = 0; n < load[m].size(); ++n)
      if (load[m][n] > scenario.u_max) {
        std::ostringstream what;
        what << "capacity: hover (" << m << "," << n << ") serves " << load[m][n] << " > "
             << scenario.u_max;
        add_violation(report, what.str(),
                      static_cast<double>(load[m][n] - scenario.u_max) / scenario.u_max);
      }

  // Orderings must be permutations of the candidate set.
  for (std::size_t m = 0; m < solution.orderings.size(); ++m) {
    std::vector<int> sorted = solution.orderings[m];
    std::sort(sorted.begin(), sorted.end());
    bool ok = true;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != static_cast<int>(i)) ok = false;
    if (!ok) {
      std::ostringstream what;
      what << "ordering: T-UAV " << m << " visiting sequence is not a permutation";
      add_violation(report, what.str(), 1.0);
    }
  }

  // Power bounds.
  for (std::size_t u = 0; u < num_gus; ++u) {
    const double p = solution.gu_powers[u];
    if (p < ch.p_u_min || p > ch.p_u_max) {
      const double span = ch.p_u_max - ch.p_u_min;
      const double excess = (p < ch.p_u_min ? ch.p_u_min - p : p - ch.p_u_max) /
                            (span > 0.0 ? span : 1.0);
      std::ostringstream what;
      what << "gu_power: gu " << u << " power " << p << " outside bounds";
      add_violation(report, what.str(), excess);
    }
  }
  for (std::size_t m = 0; m < solution.relay_powers.size(); ++m) {
    const double p = solution.relay_powers[m];
    if (p < ch.p_m_min || p > ch.p_m_max) {
      const double span = ch.p_m_max - ch.p_m_min;
      const double excess = (p < ch.p_m_min ? ch.p_m_min - p : p - ch.p_m_max) /
                            (span > 0.0 ? span : 1.0);
      std::ostringstream what;
      what << "relay_power: T-UAV " << m << " power " << p << " outside bounds";
      add_violation(report, what.str(), excess);
    }
  }

  // Hover points inside the flight volume.
  const Rect rect = scenario.bounds.rect();
  for (std::size_t m = 0; m < solution.hover_points.size(); ++m) {
    for (std::size_t n = 0; n < solution.hover_points[m].size(); ++n) {
      const Point3& q = solution.hover_points[m][n];
      std::ostringstream who;
      who << "hover (" << m << "," << n << ")";
      if (q.z < scenario.bounds.tuav_z_min || q.z > scenario.bounds.tuav_z_max) {
        const double span = scenario.bounds.tuav_z_max - scenario.bounds.tuav_z_min;
        const double excess =
            (q.z < scenario.bounds.tuav_z_min ? scenario.bounds.tuav_z_min - q.z
                                              : q.z - scenario.bounds.tuav_z_max) /
            span;
        add_violation(report, who.str() + ": altitude outside flight band", excess);
      }
      if (!rect.contains({q.x, q.y}))
        add_violation(report, who.str() + ": outside area bounds", 1.0);
    }
  }

  // A2A threshold, once per active relay link.
  std::vector<std::vector<double>> relay_rate(deployment.tuavs.size());
  for (std::size_t m = 0; m < deployment.tuavs.size(); ++m) {
    const TuavPlan& plan = deployment.tuavs[m];
    relay_rate[m].assign(plan.candidates.size(), 0.0);
    for (std::size_t n = 0; n < plan.candidates.size(); ++n) {
      const double d_ms =
          distance(solution.hover_points[m][n],
                   deployment.swarm_sites[static_cast<std::size_t>(plan.swarm)]);
      relay_rate[m][n] = a2a_rate_at_distance(solution.relay_powers[m], d_ms, ch);
      if (plan.candidates[n].members.empty()) continue;
      if (relay_rate[m][n] < ch.r_min_a2a) {
        std::ostringstream what;
        what << "a2a_rate: T-UAV " << m << " hover " << n << " rate " << relay_rate[m][n]
             << " below threshold";
        add_violation(report, what.str(), (ch.r_min_a2a - relay_rate[m][n]) / ch.r_min_a2a);
      }
    }
  }

  // G2A threshold and delay budget per GU.
  for (std::size_t u = 0; u < num_gus; ++u) {
    const HoverRef ref = deployment.connections.assignment[u];
    const auto m = static_cast<std::size_t>(ref.tuav);
    const Point3& hover = solution.hover_points[m][static_cast<std::size_t>(ref.candidate)];
    const GroundUser& gu = scenario.gus[u];
    if (hover.z <= gu.position.z) {
      std::ostringstream what;
      what << "geometry: hover for gu " << u << " below its terrain height";
      add_violation(report, what.str(), 1.0);
      continue;
    }

    const double rate_up = g2a_rate(gu.position, hover, solution.gu_powers[u], ch);
    if (rate_up < ch.r_min_g2a) {
      std::ostringstream what;
      what << "g2a_rate: gu " << u << " rate " << rate_up << " below threshold";
      add_violation(report, what.str(), (ch.r_min_g2a - rate_up) / ch.r_min_g2a);
    }

    const double rate_relay = relay_rate[m][static_cast<std::size_t>(ref.candidate)];
    double delay = std::numeric_limits<double>::infinity();
    if (rate_up > 0.0 && rate_relay > 0.0)
      delay = gu.data_bits / rate_up + gu.data_bits / rate_relay;
    if (delay > gu.max_delay_s) {
      std::ostringstream what;
      what << "delay: gu " << u << " delay " << delay << " exceeds " << gu.max_delay_s;
      add_violation(report, what.str(), (delay - gu.max_delay_s) / gu.max_delay_s);
    }
  }

  return report;
}

}  // namespace uswarm
