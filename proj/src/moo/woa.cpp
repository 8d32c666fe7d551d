#include "moo/woa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "channel.hpp"
#include "energy.hpp"
#include "util/parallel.hpp"

namespace uswarm {

double update_a(int i, int i_max) {
  if (i_max <= 0) throw std::invalid_argument("update_a: i_max must be positive");
  return 2.0 * (1.0 - static_cast<double>(i) / static_cast<double>(i_max));
}

void woa_update(std::span<double> position, std::span<const double> leader,
                std::span<const double> random_agent, double a, double spiral_b,
                const DimBounds& bounds, Rng& rng) {
  const std::size_t dims = position.size();
  const double tau = rng.uniform();
  if (tau >= 0.5) {
    const double l = rng.uniform(-1.0, 1.0);
    const double shape = std::exp(spiral_b * l) * std::cos(2.0 * std::numbers::pi * l);
    for (std::size_t d = 0; d < dims; ++d)
      position[d] = std::abs(leader[d] - position[d]) * shape + leader[d];
  } else {
    for (std::size_t d = 0; d < dims; ++d) {
      const double coeff_a = 2.0 * a * rng.uniform() - a;
      const double coeff_c = 2.0 * rng.uniform();
      if (std::abs(coeff_a) < 1.0) {
        const double dist = std::abs(coeff_c * leader[d] - position[d]);
        position[d] = leader[d] - coeff_a * dist;
      } else {
        const double dist = std::abs(coeff_c * random_agent[d] - position[d]);
        position[d] = random_agent[d] - coeff_a * dist;
      }
    }
  }
  for (std::size_t d = 0; d < dims; ++d)
    position[d] = std::clamp(position[d], bounds.lo[d], bounds.hi[d]);
}

int greedy_next_hover(std::span<const std::array<double, 3>> predicted_deltas,
                      const std::array<double, 3>& best_so_far) {
  if (predicted_deltas.empty())
    throw std::invalid_argument("greedy_next_hover: no candidates");
  double best_score = std::numeric_limits<double>::infinity();
  int best_index = 0;
  for (std::size_t i = 0; i < predicted_deltas.size(); ++i) {
    double score = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double scale = best_so_far[static_cast<std::size_t>(j)] > 0.0
                               ? best_so_far[static_cast<std::size_t>(j)]
                               : 1.0;
      score += predicted_deltas[i][static_cast<std::size_t>(j)] / scale;
    }
    if (score < best_score) {
      best_score = score;
      best_index = static_cast<int>(i);
    }
  }
  return best_index;
}

namespace {

struct StepTrial {
  Point3 hover;
  double leg_time = 0.0;
  double hover_dur = 0.0;
  double marg_energy = 0.0;     // relay + hover + flight for this step
  double marg_gu_energy = 0.0;  // sum over members
  double marg_gu_delay = 0.0;   // sum over members
  double marg_violation = 0.0;
  bool link_infeasible = false;
};

// Mission built so far by one agent.
struct AgentState {
  Solution solution;
  std::vector<double> tuav_time;      // hover + flight per T-UAV
  std::vector<double> tuav_energy_j;  // relay + hover + flight per T-UAV
  std::vector<Point3> position;       // current position per T-UAV
  std::vector<double> last_z;         // last fixed hover altitude per T-UAV
  std::vector<double> swarm_time;     // max member time per swarm
  double energy_total = 0.0;          // sum of tuav_energy_j
  double sum_gu_energy = 0.0;
  double sum_gu_delay = 0.0;
  double violation = 0.0;
  bool link_infeasible = false;
};

class InsWoaDriver {
 public:
  InsWoaDriver(const Scenario& scenario, const Deployment& deployment, const WoaParams& params)
      : sc_(scenario),
        dep_(deployment),
        params_(params),
        pool_(params.threads),
        root_(params.seed) {
    if (params.population < 4) throw ConfigError("ins_woa: population must be >= 4");
    if (params.iterations < 1) throw ConfigError("ins_woa: iterations must be >= 1");

    num_steps_ = 0;
    for (const TuavPlan& t : dep_.tuavs) num_steps_ += static_cast<int>(t.candidates.size());
    if (num_steps_ == 0) throw ConfigError("ins_woa: deployment has no hover candidates");

    iterations_ = params.iterations;
    if (params.eval_budget > 0) {
      const long per_step = static_cast<long>(params.population) * num_steps_;
      const long spare = params.eval_budget - params.population;  // final rescoring pass
      iterations_ = static_cast<int>(spare / per_step - 1);
      if (iterations_ < 1)
        throw ConfigError("ins_woa: eval budget too small for population and step count");
    }

    mid_z_ = 0.5 * (sc_.bounds.tuav_z_min + sc_.bounds.tuav_z_max);
    mid_pu_ = 0.5 * (sc_.channel.p_u_min + sc_.channel.p_u_max);
    mid_pm_ = 0.5 * (sc_.channel.p_m_min + sc_.channel.p_m_max);
  }

  OptimizeResult run() {
    init_agents();

    const int num_tuavs = dep_.num_tuavs();
    std::vector<std::vector<int>> remaining(static_cast<std::size_t>(num_tuavs));
    std::vector<int> next_candidate(static_cast<std::size_t>(num_tuavs), -1);
    for (int m = 0; m < num_tuavs; ++m) {
      const std::size_t count = dep_.tuavs[static_cast<std::size_t>(m)].candidates.size();
      remaining[static_cast<std::size_t>(m)].resize(count);
      std::iota(remaining[static_cast<std::size_t>(m)].begin(),
                remaining[static_cast<std::size_t>(m)].end(), 0);
      if (count > 0) next_candidate[static_cast<std::size_t>(m)] = pick_next(m, remaining[static_cast<std::size_t>(m)]);
    }

    int step_uid = 0;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int m = 0; m < num_tuavs; ++m) {
        const int c = next_candidate[static_cast<std::size_t>(m)];
        if (c < 0) continue;
        run_step(m, c, step_uid++);
        shared_orderings_[static_cast<std::size_t>(m)].push_back(c);
        auto& rem = remaining[static_cast<std::size_t>(m)];
        rem.erase(std::find(rem.begin(), rem.end(), c));
        next_candidate[static_cast<std::size_t>(m)] = rem.empty() ? -1 : pick_next(m, rem);
        record_front_snapshot();
        progressed = true;
      }
    }
    return finalize();
  }

 private:
  // --- setup -------------------------------------------------------------

  void init_agents() {
    const auto population = static_cast<std::size_t>(params_.population);
    const auto num_tuavs = static_cast<std::size_t>(dep_.num_tuavs());
    const auto num_gus = sc_.gus.size();

    AgentState blank;
    blank.solution.orderings.resize(num_tuavs);
    blank.solution.hover_points.resize(num_tuavs);
    blank.solution.gu_powers.assign(num_gus, mid_pu_);
    blank.solution.relay_powers.assign(num_tuavs, mid_pm_);
    blank.tuav_time.assign(num_tuavs, 0.0);
    blank.tuav_energy_j.assign(num_tuavs, 0.0);
    blank.position.resize(num_tuavs);
    blank.last_z.assign(num_tuavs, mid_z_);
    blank.swarm_time.assign(static_cast<std::size_t>(dep_.num_swarms()), 0.0);
    for (std::size_t m = 0; m < num_tuavs; ++m) {
      const TuavPlan& plan = dep_.tuavs[m];
      blank.position[m] = dep_.swarm_sites[static_cast<std::size_t>(plan.swarm)];
      blank.solution.hover_points[m].assign(
          plan.candidates.size(),
          Point3{0.0, 0.0, mid_z_});
      for (std::size_t n = 0; n < plan.candidates.size(); ++n) {
        blank.solution.hover_points[m][n].x = plan.candidates[n].point.x;
        blank.solution.hover_points[m][n].y = plan.candidates[n].point.y;
      }
    }
    agents_.assign(population, blank);
    shared_orderings_.assign(num_tuavs, {});
    compromise_ = 0;
  }

  DimBounds step_bounds(int tuav, int candidate) const {
    const auto& members =
        dep_.tuavs[static_cast<std::size_t>(tuav)].candidates[static_cast<std::size_t>(candidate)].members;
    DimBounds b;
    const std::size_t dims = 4 + members.size();
    b.lo.reserve(dims);
    b.hi.reserve(dims);
    b.lo.push_back(sc_.bounds.tuav_z_min);
    b.hi.push_back(sc_.bounds.tuav_z_max);
    for (int k = 0; k < 2; ++k) {
      b.lo.push_back(-params_.offset_radius);
      b.hi.push_back(params_.offset_radius);
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      b.lo.push_back(sc_.channel.p_u_min);
      b.hi.push_back(sc_.channel.p_u_max);
    }
    b.lo.push_back(sc_.channel.p_m_min);
    b.hi.push_back(sc_.channel.p_m_max);
    return b;
  }

  // --- step trial evaluation ----------------------------------------------

  StepTrial eval_step(int tuav, int candidate, std::span<const double> vars,
                      const AgentState& agent) const {
    const TuavPlan& plan = dep_.tuavs[static_cast<std::size_t>(tuav)];
    const FermatGroup& group = plan.candidates[static_cast<std::size_t>(candidate)];
    const ChannelParams& ch = sc_.channel;
    const Rect rect = sc_.bounds.rect();

    StepTrial trial;
    trial.hover = {std::clamp(group.point.x + vars[1], rect.x_min, rect.x_max),
                   std::clamp(group.point.y + vars[2], rect.y_min, rect.y_max), vars[0]};

    const Point3& site = dep_.swarm_sites[static_cast<std::size_t>(plan.swarm)];
    const double p_m = vars[3 + group.members.size()];
    const double d_ms = distance(trial.hover, site);
    const double rate_relay = a2a_rate_at_distance(p_m, d_ms, ch);
    if (!(rate_relay > 0.0)) {
      trial.link_infeasible = true;
      return trial;
    }
    if (rate_relay < ch.r_min_a2a)
      trial.marg_violation += (ch.r_min_a2a - rate_relay) / ch.r_min_a2a;

    double relay_j = 0.0;
    for (std::size_t k = 0; k < group.members.size(); ++k) {
      const GroundUser& gu = sc_.gus[static_cast<std::size_t>(group.members[k])];
      const double p_u = vars[3 + k];
      const double rate_up = g2a_rate(gu.position, trial.hover, p_u, ch);
      if (!(rate_up > 0.0)) {
        trial.link_infeasible = true;
        return trial;
      }
      if (rate_up < ch.r_min_g2a)
        trial.marg_violation += (ch.r_min_g2a - rate_up) / ch.r_min_g2a;

      const double t_um = gu.data_bits / rate_up;
      const double t_ms = gu.data_bits / rate_relay;
      const double t_u = t_um + t_ms;
      if (t_u > gu.max_delay_s)
        trial.marg_violation += (t_u - gu.max_delay_s) / gu.max_delay_s;

      trial.marg_gu_energy += p_u * t_um;
      trial.marg_gu_delay += t_u;
      trial.hover_dur = std::max(trial.hover_dur, t_u);
      relay_j += p_m * t_ms;
    }

    const Point3& origin = agent.position[static_cast<std::size_t>(tuav)];
    trial.leg_time = leg_flight_time(origin, trial.hover, sc_.energy);
    trial.marg_energy = relay_j + hover_power(sc_.energy) * trial.hover_dur +
                        leg_flight_energy(origin, trial.hover, sc_.energy);
    return trial;
  }

  // Partial mission objectives with the trial applied to `tuav`.
  ObjectiveVector trial_objectives(const AgentState& agent, int tuav,
                                   const StepTrial& trial) const {
    const int swarm = dep_.tuavs[static_cast<std::size_t>(tuav)].swarm;
    double sum_ts = 0.0;
    for (std::size_t s = 0; s < agent.swarm_time.size(); ++s)
      if (static_cast<int>(s) != swarm) sum_ts += agent.swarm_time[s];

    double swarm_max = agent.tuav_time[static_cast<std::size_t>(tuav)] + trial.leg_time + trial.hover_dur;
    for (std::size_t m = 0; m < dep_.tuavs.size(); ++m) {
      if (static_cast<int>(m) == tuav || dep_.tuavs[m].swarm != swarm) continue;
      swarm_max = std::max(swarm_max, agent.tuav_time[m]);
    }
    sum_ts += swarm_max;

    const double num_gus = static_cast<double>(sc_.gus.size());
    ObjectiveVector f;
    f.teu_j = agent.energy_total + trial.marg_energy + hover_power(sc_.energy) * sum_ts;
    f.aeg_j = (agent.sum_gu_energy + trial.marg_gu_energy) / num_gus;
    f.adg_s = (agent.sum_gu_delay + trial.marg_gu_delay) / num_gus;
    return f;
  }

  // --- inner NS-WOA loop ---------------------------------------------------

  // One whale plus the mission it would extend. The inner loop breeds these
  // under NDS environmental selection; pure leader-chasing alone collapses the
  // population to a point once `a` reaches 0, which would leave no Pareto
  // spread to report.
  struct PoolEntry {
    int base = 0;  // index of the agent whose mission this entry extends
    std::vector<double> pos;
    StepTrial trial;
    ObjectiveVector objectives;
    double violation = 0.0;
  };

  void run_step(int tuav, int candidate, int step_uid) {
    const auto population = static_cast<std::size_t>(params_.population);
    const auto& members =
        dep_.tuavs[static_cast<std::size_t>(tuav)].candidates[static_cast<std::size_t>(candidate)].members;
    const DimBounds bounds = step_bounds(tuav, candidate);
    const std::size_t dims = bounds.lo.size();

    std::vector<Rng> streams;
    streams.reserve(population);
    for (std::size_t j = 0; j < population; ++j)
      streams.push_back(root_.child(0x776f61, static_cast<std::uint64_t>(step_uid), j));

    auto evaluate_entries = [&](std::vector<PoolEntry>& entries) {
      pool_.parallel_for(entries.size(), [&](std::size_t j) {
        PoolEntry& e = entries[j];
        e.trial = eval_step(tuav, candidate, e.pos, agents_[static_cast<std::size_t>(e.base)]);
        if (e.trial.link_infeasible) {
          e.objectives = {};
          e.violation = std::numeric_limits<double>::infinity();
        } else {
          e.objectives =
              trial_objectives(agents_[static_cast<std::size_t>(e.base)], tuav, e.trial);
          e.violation =
              agents_[static_cast<std::size_t>(e.base)].violation + e.trial.marg_violation;
        }
      });
      evaluations_ += static_cast<long>(entries.size());
    };

    std::vector<PoolEntry> pool(population);
    for (std::size_t j = 0; j < population; ++j) {
      pool[j].base = static_cast<int>(j);
      pool[j].pos.resize(dims);
      for (std::size_t d = 0; d < dims; ++d)
        pool[j].pos[d] = streams[j].uniform(bounds.lo[d], bounds.hi[d]);
    }
    evaluate_entries(pool);

    for (int i = 1; i <= iterations_; ++i) {
      const double a = update_a(i, iterations_);
      const std::size_t leader = select_leader_of(pool, i - 1);

      std::vector<PoolEntry> offspring(population);
      for (std::size_t j = 0; j < population; ++j) {
        offspring[j].base = pool[j].base;
        offspring[j].pos = pool[j].pos;
        const std::size_t rand_index = streams[j].index(population);
        woa_update(offspring[j].pos, pool[leader].pos, pool[rand_index].pos, a, params_.spiral_b,
                   bounds, streams[j]);
      }
      evaluate_entries(offspring);

      pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
      environmental_select(pool, population);
    }

    // Fix the surviving step choices; the pool may clone strong missions and
    // drop dominated ones.
    std::vector<AgentState> next;
    next.reserve(population);
    for (std::size_t j = 0; j < population; ++j) {
      const PoolEntry& e = pool[j];
      AgentState agent = agents_[static_cast<std::size_t>(e.base)];
      const StepTrial& trial = e.trial;
      if (trial.link_infeasible) {
        agent.link_infeasible = true;
        next.push_back(std::move(agent));
        continue;
      }
      const auto m = static_cast<std::size_t>(tuav);
      agent.solution.hover_points[m][static_cast<std::size_t>(candidate)] = trial.hover;
      for (std::size_t k = 0; k < members.size(); ++k)
        agent.solution.gu_powers[static_cast<std::size_t>(members[k])] = e.pos[3 + k];
      agent.solution.relay_powers[m] = e.pos[3 + members.size()];

      agent.tuav_time[m] += trial.leg_time + trial.hover_dur;
      agent.tuav_energy_j[m] += trial.marg_energy;
      agent.energy_total += trial.marg_energy;
      agent.position[m] = trial.hover;
      agent.last_z[m] = trial.hover.z;
      agent.sum_gu_energy += trial.marg_gu_energy;
      agent.sum_gu_delay += trial.marg_gu_delay;
      agent.violation += trial.marg_violation;

      const auto swarm = static_cast<std::size_t>(dep_.tuavs[m].swarm);
      agent.swarm_time[swarm] = std::max(agent.swarm_time[swarm], agent.tuav_time[m]);
      next.push_back(std::move(agent));
    }
    agents_ = std::move(next);
    compromise_ = select_compromise_agent();
  }

  // Leader for one iteration: front-1 members ordered by crowding (descending,
  // index on ties), cycled by iteration so exploitation reaches every part of
  // the front instead of pinning on a single boundary member.
  std::size_t select_leader_of(const std::vector<PoolEntry>& pool, int iteration) const {
    std::vector<ObjectiveVector> objectives;
    std::vector<double> violations;
    objectives.reserve(pool.size());
    violations.reserve(pool.size());
    for (const PoolEntry& e : pool) {
      objectives.push_back(e.objectives);
      violations.push_back(e.violation);
    }
    const auto fronts = fast_nondominated_sort(objectives, violations);
    const std::vector<int>& first = fronts[0];
    std::vector<ObjectiveVector> front_objs;
    front_objs.reserve(first.size());
    for (int idx : first) front_objs.push_back(objectives[static_cast<std::size_t>(idx)]);
    const std::vector<double> crowd = crowding_distance(front_objs);

    std::vector<std::size_t> order(first.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
    const std::size_t pick = order[static_cast<std::size_t>(iteration) % order.size()];
    return static_cast<std::size_t>(first[pick]);
  }

  // Keep the best `capacity` entries by front rank, then crowding, stable on
  // entry order.
  void environmental_select(std::vector<PoolEntry>& pool, std::size_t capacity) const {
    std::vector<ObjectiveVector> objectives;
    std::vector<double> violations;
    objectives.reserve(pool.size());
    violations.reserve(pool.size());
    for (const PoolEntry& e : pool) {
      objectives.push_back(e.objectives);
      violations.push_back(e.violation);
    }
    const auto fronts = fast_nondominated_sort(objectives, violations);

    std::vector<int> keep;
    keep.reserve(capacity);
    for (const auto& front : fronts) {
      if (keep.size() + front.size() <= capacity) {
        keep.insert(keep.end(), front.begin(), front.end());
        if (keep.size() == capacity) break;
        continue;
      }
      std::vector<ObjectiveVector> front_objs;
      front_objs.reserve(front.size());
      for (int idx : front) front_objs.push_back(objectives[static_cast<std::size_t>(idx)]);
      const std::vector<double> crowd = crowding_distance(front_objs);
      std::vector<std::size_t> order(front.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
      for (std::size_t i = 0; keep.size() < capacity; ++i)
        keep.push_back(front[order[i]]);
      break;
    }

    std::vector<PoolEntry> selected;
    selected.reserve(capacity);
    for (int idx : keep) selected.push_back(std::move(pool[static_cast<std::size_t>(idx)]));
    pool = std::move(selected);
  }

  // Min-max-normalized objective sum over the feasible agents (all agents when
  // none is feasible yet), lowest index on ties.
  std::size_t select_compromise_agent() const {
    std::vector<std::size_t> pool;
    for (std::size_t j = 0; j < agents_.size(); ++j)
      if (!agents_[j].link_infeasible && agents_[j].violation <= 0.0) pool.push_back(j);
    if (pool.empty()) {
      std::size_t best = 0;
      double best_violation = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < agents_.size(); ++j) {
        const double v = agents_[j].link_infeasible ? std::numeric_limits<double>::infinity()
                                                    : agents_[j].violation;
        if (v < best_violation) {
          best_violation = v;
          best = j;
        }
      }
      return best;
    }

    std::array<double, 3> lo{}, hi{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    auto objective = [&](std::size_t j, int k) {
      const AgentState& agent = agents_[j];
      const double num_gus = static_cast<double>(sc_.gus.size());
      const double sum_ts =
          std::accumulate(agent.swarm_time.begin(), agent.swarm_time.end(), 0.0);
      switch (k) {
        case 0: return agent.energy_total + hover_power(sc_.energy) * sum_ts;
        case 1: return agent.sum_gu_energy / num_gus;
        default: return agent.sum_gu_delay / num_gus;
      }
    };
    for (std::size_t j : pool)
      for (int k = 0; k < 3; ++k) {
        const double v = objective(j, k);
        lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], v);
        hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], v);
      }

    std::size_t best = pool[0];
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t j : pool) {
      double score = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double span = hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
        if (span > 0.0) score += (objective(j, k) - lo[static_cast<std::size_t>(k)]) / span;
      }
      if (score < best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // --- greedy ordering ------------------------------------------------------

  int pick_next(int tuav, const std::vector<int>& remaining) const {
    const AgentState& ref = agents_[compromise_];
    const TuavPlan& plan = dep_.tuavs[static_cast<std::size_t>(tuav)];
    const ChannelParams& ch = sc_.channel;
    const auto m = static_cast<std::size_t>(tuav);

    const double z_pred = ref.last_z[m];
    const double p_m_pred = ref.solution.relay_powers[m];
    const double num_gus = static_cast<double>(sc_.gus.size());

    std::vector<std::array<double, 3>> deltas;
    deltas.reserve(remaining.size());
    for (int c : remaining) {
      const FermatGroup& group = plan.candidates[static_cast<std::size_t>(c)];
      const Point3 hover{group.point.x, group.point.y, z_pred};
      const Point3& site = dep_.swarm_sites[static_cast<std::size_t>(plan.swarm)];
      const double rate_relay = a2a_rate_at_distance(p_m_pred, distance(hover, site), ch);

      double hover_dur = 0.0, relay_j = 0.0, d_energy = 0.0, d_delay = 0.0;
      for (int id : group.members) {
        const GroundUser& gu = sc_.gus[static_cast<std::size_t>(id)];
        const double rate_up = g2a_rate(gu.position, hover, mid_pu_, ch);
        const double t_um = gu.data_bits / rate_up;
        const double t_ms = gu.data_bits / rate_relay;
        hover_dur = std::max(hover_dur, t_um + t_ms);
        relay_j += p_m_pred * t_ms;
        d_energy += mid_pu_ * t_um;
        d_delay += t_um + t_ms;
      }
      const Point3& origin = ref.position[m];
      const double d_f1 = relay_j + hover_power(sc_.energy) * hover_dur +
                          leg_flight_energy(origin, hover, sc_.energy);
      deltas.push_back({d_f1, d_energy / num_gus, d_delay / num_gus});
    }

    const double sum_ts =
        std::accumulate(ref.swarm_time.begin(), ref.swarm_time.end(), 0.0);
    const std::array<double, 3> best_so_far{
        ref.energy_total + hover_power(sc_.energy) * sum_ts,
        ref.sum_gu_energy / num_gus, ref.sum_gu_delay / num_gus};
    return remaining[static_cast<std::size_t>(greedy_next_hover(deltas, best_so_far))];
  }

  // --- bookkeeping -----------------------------------------------------------

  void record_front_snapshot() {
    const double num_gus = static_cast<double>(sc_.gus.size());
    for (const AgentState& agent : agents_) {
      if (agent.link_infeasible || agent.violation > 0.0) continue;
      const double sum_ts =
          std::accumulate(agent.swarm_time.begin(), agent.swarm_time.end(), 0.0);
      cumulative_store_.push_back({agent.energy_total + hover_power(sc_.energy) * sum_ts,
                                   agent.sum_gu_energy / num_gus,
                                   agent.sum_gu_delay / num_gus});
    }
    if (!cumulative_store_.empty()) {
      const auto fronts = fast_nondominated_sort(cumulative_store_);
      std::vector<ObjectiveVector> kept;
      kept.reserve(fronts[0].size());
      for (int idx : fronts[0]) kept.push_back(cumulative_store_[static_cast<std::size_t>(idx)]);
      cumulative_store_ = std::move(kept);
    }
    step_fronts_.push_back(cumulative_store_);
  }

  OptimizeResult finalize() {
    const auto population = agents_.size();
    for (AgentState& agent : agents_) agent.solution.orderings = shared_orderings_;

    std::vector<Evaluation> evals(population);
    std::vector<FeasibilityReport> reports(population);
    pool_.parallel_for(population, [&](std::size_t j) {
      evals[j] = evaluate(sc_, dep_, agents_[j].solution);
      reports[j] = feasibility(sc_, dep_, agents_[j].solution);
    });
    evaluations_ += static_cast<long>(population);

    ParetoArchive archive;
    archive.members.reserve(population);
    for (std::size_t j = 0; j < population; ++j) {
      ArchiveMember member;
      member.solution = std::move(agents_[j].solution);
      member.objectives = evals[j].objectives;
      member.violation = evals[j].link_infeasible ? std::numeric_limits<double>::infinity()
                                                  : reports[j].violation;
      archive.members.push_back(std::move(member));
    }

    OptimizeResult result;
    result.archive = nondominated_filter(std::move(archive));
    truncate(result.archive, population);
    result.evaluations = evaluations_;
    result.iterations_used = iterations_;
    result.step_fronts = std::move(step_fronts_);
    return result;
  }

  const Scenario& sc_;
  const Deployment& dep_;
  WoaParams params_;
  ThreadPool pool_;
  Rng root_;

  int num_steps_ = 0;
  int iterations_ = 0;
  double mid_z_ = 0.0, mid_pu_ = 0.0, mid_pm_ = 0.0;

  std::vector<AgentState> agents_;
  std::vector<std::vector<int>> shared_orderings_;
  std::size_t compromise_ = 0;
  long evaluations_ = 0;
  std::vector<ObjectiveVector> cumulative_store_;
  std::vector<std::vector<ObjectiveVector>> step_fronts_;
};

}  // namespace

OptimizeResult ins_woa(const Scenario& scenario, const Deployment& deployment,
                       const WoaParams& params) {
  InsWoaDriver driver(scenario, deployment, params);
  return driver.run();
}

}  // namespace uswarm
