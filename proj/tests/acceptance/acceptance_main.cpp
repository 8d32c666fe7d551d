// Acceptance suite: eleven checks, one PASS/FAIL line each, nonzero exit on
// any failure. Heavier end-to-end runs are shared across checks.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "channel.hpp"
#include "energy.hpp"
#include "harness.hpp"
#include "moo/nsga2.hpp"
#include "moo/woa.hpp"
#include "predeploy.hpp"
#include "rng.hpp"

using namespace uswarm;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

Scenario make_scenario(int num_gus, std::uint64_t seed) {
  GenerateOptions options;
  options.num_gus = num_gus;
  options.num_swarms = 3;
  options.num_tuavs = 8;
  options.seed = seed;
  return generate_scenario(options);
}

struct DeskRun {
  Scenario scenario;
  Deployment deployment;
  OptimizeResult woa;
};

DeskRun desk_run(int num_gus, std::uint64_t seed, int population = 30, int iterations = 50) {
  DeskRun run;
  run.scenario = make_scenario(num_gus, seed);
  run.deployment = predeploy(run.scenario);
  WoaParams params;
  params.population = population;
  params.iterations = iterations;
  params.seed = seed;
  params.threads = 4;
  run.woa = ins_woa(run.scenario, run.deployment, params);
  return run;
}

int argmin_objective(const ParetoArchive& archive, int k) {
  int best = 0;
  for (std::size_t i = 1; i < archive.members.size(); ++i)
    if (archive.members[i].objectives[k] < archive.members[static_cast<std::size_t>(best)].objectives[k])
      best = static_cast<int>(i);
  return best;
}

double mean_gu_power(const ArchiveMember& m) {
  double sum = 0.0;
  for (double p : m.solution.gu_powers) sum += p;
  return sum / static_cast<double>(m.solution.gu_powers.size());
}

double mean_hover_altitude(const ArchiveMember& m) {
  double sum = 0.0;
  int count = 0;
  for (const auto& hovers : m.solution.hover_points)
    for (const Point3& q : hovers) {
      sum += q.z;
      ++count;
    }
  return count == 0 ? 0.0 : sum / count;
}

// ---- criterion 1: unit-value reproduction ----------------------------------

void criterion_1() {
  const EnergyParams energy{};
  const ChannelParams channel{};
  bool pass = true;
  std::string detail;

  const double p_hov = hover_power(energy);
  pass &= std::abs(p_hov - 219.82) <= 1e-9;
  detail += "P_hov=" + std::to_string(p_hov);

  const double p_ver = vertical_power(6.0, energy);
  pass &= std::abs(p_ver - 249.9) <= 0.05;
  detail += " P_ver=" + std::to_string(p_ver);

  // Term-by-term oracle of the straight-and-level model in long double.
  const long double v = 15.0L;
  const long double blade = 99.66L * (1.0L + 3.0L * v * v / (120.0L * 120.0L));
  const long double x = v * v / (2.0L * 0.002L * 0.002L);
  const long double induced = 120.16L * sqrtl(sqrtl(1.0L + x * x) - x);
  const long double parasite = 0.5L * 0.48L * 1.225L * 0.0001L * 0.5L * v * v * v;
  const double oracle = static_cast<double>(blade + induced + parasite);
  const double p_fly = horizontal_fly_power(15.0, energy);
  pass &= std::abs(p_fly - 104.4) <= 0.5;
  pass &= std::abs(p_fly - oracle) <= 0.5;
  detail += " P_fly=" + std::to_string(p_fly) + " oracle=" + std::to_string(oracle);

  const double amp = channel.light_speed / (4.0 * std::numbers::pi * 2.4e9 * 100.0);
  const double hf_db = 10.0 * std::log10(amp * amp);
  pass &= std::abs(hf_db - (-80.05)) <= 0.01;
  detail += " hF_dB=" + std::to_string(hf_db);

  const double p_los = los_probability(9.6, channel);
  pass &= std::abs(p_los - 0.094340) <= 1e-6;
  detail += " P_LoS(9.6)=" + std::to_string(p_los);

  report(1, pass, "unit-value reproduction", detail);
}

// ---- criterion 2: oracle equivalence ----------------------------------------

std::vector<std::vector<int>> peel_fronts(const std::vector<ObjectiveVector>& objs,
                                          const std::vector<double>& viols) {
  auto dom = [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    const bool fa = viols[ia] <= 0.0;
    const bool fb = viols[ib] <= 0.0;
    if (fa != fb) return fa;
    if (!fa) return viols[ia] < viols[ib];
    bool strict = false;
    for (int k = 0; k < 3; ++k) {
      if (objs[ia][k] > objs[ib][k]) return false;
      if (objs[ia][k] < objs[ib][k]) strict = true;
    }
    return strict;
  };
  std::vector<int> alive(objs.size());
  for (std::size_t i = 0; i < objs.size(); ++i) alive[i] = static_cast<int>(i);
  std::vector<std::vector<int>> fronts;
  while (!alive.empty()) {
    std::vector<int> front, rest;
    for (int i : alive) {
      bool dominated = false;
      for (int j : alive)
        if (j != i && dom(j, i)) dominated = true;
      (dominated ? rest : front).push_back(i);
    }
    fronts.push_back(front);
    alive = rest;
  }
  return fronts;
}

Point2 grid_search_median(const std::vector<Point2>& points) {
  double x_lo = points[0].x, x_hi = points[0].x, y_lo = points[0].y, y_hi = points[0].y;
  for (const Point2& p : points) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  const double pad = 1e-6 + 0.01 * std::max(x_hi - x_lo, y_hi - y_lo);
  x_lo -= pad;
  x_hi += pad;
  y_lo -= pad;
  y_hi += pad;
  Point2 best{0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)};
  double best_obj = sum_of_distances(best, points);
  for (int stage = 0; stage < 8; ++stage) {
    const int res = 60;
    Point2 stage_best = best;
    double stage_obj = best_obj;
    for (int i = 0; i <= res; ++i)
      for (int j = 0; j <= res; ++j) {
        const Point2 c{x_lo + (x_hi - x_lo) * i / res, y_lo + (y_hi - y_lo) * j / res};
        const double obj = sum_of_distances(c, points);
        if (obj < stage_obj) {
          stage_obj = obj;
          stage_best = c;
        }
      }
    best = stage_best;
    best_obj = stage_obj;
    const double wx = (x_hi - x_lo) / res, wy = (y_hi - y_lo) / res;
    x_lo = best.x - 2 * wx;
    x_hi = best.x + 2 * wx;
    y_lo = best.y - 2 * wy;
    y_hi = best.y + 2 * wy;
  }
  return best;
}

void criterion_2() {
  bool pass = true;
  Rng rng(8080);
  int mismatches = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = 2 + static_cast<int>(rng.index(49));
    std::vector<ObjectiveVector> objs;
    std::vector<double> viols;
    for (int i = 0; i < n; ++i) {
      objs.push_back({rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)});
      viols.push_back(rng.uniform() < 0.3 ? rng.uniform(0.01, 2.0) : 0.0);
    }
    const auto fronts = fast_nondominated_sort(objs, viols);
    const auto oracle = peel_fronts(objs, viols);
    if (fronts.size() != oracle.size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      std::set<int> got(fronts[f].begin(), fronts[f].end());
      std::set<int> want(oracle[f].begin(), oracle[f].end());
      if (got != want) ++mismatches;
    }
  }
  pass &= mismatches == 0;

  double worst_gap = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<Point2> pts;
    const int n = 3 + static_cast<int>(rng.index(10));
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 800), rng.uniform(0, 800)});
    const double ours = sum_of_distances(geometric_median(pts, 1e-10, 5000), pts);
    const double oracle = sum_of_distances(grid_search_median(pts), pts);
    worst_gap = std::max(worst_gap, ours - oracle);
  }
  pass &= worst_gap <= 1e-6;

  report(2, pass, "oracle equivalence (NDS exact, Fermat within 1e-6)",
         "nds_mismatches=" + std::to_string(mismatches) +
             " worst_median_gap=" + std::to_string(worst_gap));
}

// ---- criterion 3: structural feasibility -------------------------------------

void criterion_3() {
  Rng rng(6060);
  int violations = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int swarms = 1 + static_cast<int>(rng.index(4));
    const int m_max = 2 + static_cast<int>(rng.index(3));
    const int tuavs = std::max(
        swarms, 1 + static_cast<int>(rng.index(static_cast<std::size_t>(swarms * m_max))));
    const int gus = tuavs + static_cast<int>(rng.index(80));

    GenerateOptions options;
    options.num_gus = gus;
    options.num_swarms = swarms;
    options.num_tuavs = tuavs;
    options.m_max = m_max;
    options.seed = 900 + static_cast<std::uint64_t>(inst);
    const Scenario s = generate_scenario(options);
    const Deployment d = predeploy(s);

    int total = 0;
    for (int m : d.tuavs_per_swarm) {
      if (m > m_max) ++violations;
      total += m;
    }
    if (total != tuavs) ++violations;

    std::map<std::pair<int, int>, int> load;
    std::vector<int> seen(static_cast<std::size_t>(gus), 0);
    for (int u = 0; u < gus; ++u) {
      const HoverRef ref = d.connections.assignment[static_cast<std::size_t>(u)];
      if (ref.tuav < 0 || ref.candidate < 0) {
        ++violations;
        continue;
      }
      ++seen[static_cast<std::size_t>(u)];
      ++load[{ref.tuav, ref.candidate}];
    }
    for (int count : seen)
      if (count != 1) ++violations;
    for (const auto& [key, count] : load)
      if (count > s.u_max) ++violations;
  }
  report(3, violations == 0, "pre-deployment structural feasibility over 100 scenarios",
         "violations=" + std::to_string(violations));
}

// ---- criterion 4: determinism --------------------------------------------------

void criterion_4() {
  const Scenario s = make_scenario(60, 1);
  const Deployment d = predeploy(s);
  WoaParams params;
  params.population = 30;
  params.iterations = 50;
  params.seed = 1;
  params.threads = 4;
  const OptimizeResult a = ins_woa(s, d, params);
  const OptimizeResult b = ins_woa(s, d, params);
  const std::string csv_a = archive_to_csv(a.archive);
  const std::string csv_b = archive_to_csv(b.archive);
  report(4, csv_a == csv_b && !a.archive.members.empty(),
         "byte-identical archives across parallel reruns",
         "bytes=" + std::to_string(csv_a.size()) +
             " members=" + std::to_string(a.archive.members.size()));
}

// ---- criteria 5-10 share the desk-scale sweep ----------------------------------

void criteria_5_to_10() {
  const std::vector<int> user_counts = {30, 40, 50, 60};
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  std::map<int, std::vector<DeskRun>> runs;
  for (int users : user_counts) {
    for (std::uint64_t seed : seeds) runs[users].push_back(desk_run(users, seed));
  }

  // 5: mean archive-min TEU non-decreasing in the number of users.
  {
    std::vector<double> mean_min_f1;
    for (int users : user_counts) {
      double acc = 0.0;
      for (const DeskRun& r : runs[users])
        acc += r.woa.archive.members[static_cast<std::size_t>(argmin_objective(r.woa.archive, 0))]
                   .objectives.teu_j;
      mean_min_f1.push_back(acc / static_cast<double>(seeds.size()));
    }
    bool monotone = true;
    std::string series;
    for (std::size_t i = 0; i < mean_min_f1.size(); ++i) {
      if (i > 0 && mean_min_f1[i] < mean_min_f1[i - 1]) monotone = false;
      series += (i ? " " : "") + std::to_string(mean_min_f1[i]);
    }
    report(5, monotone, "mean archive-min TEU non-decreasing over U={30,40,50,60}", series);
  }

  // 6: compromise AEG at U=60 within [0.002, 0.2] J for >= 4 of 5 seeds.
  {
    int in_band = 0;
    std::string values;
    for (const DeskRun& r : runs[60]) {
      std::vector<ObjectiveVector> objectives;
      for (const ArchiveMember& m : r.woa.archive.members) objectives.push_back(m.objectives);
      const double f2 =
          objectives[static_cast<std::size_t>(select_compromise(objectives))].aeg_j;
      if (f2 >= 0.002 && f2 <= 0.2) ++in_band;
      values += std::to_string(f2) + " ";
    }
    report(6, in_band >= 4, "compromise AEG at U=60 in [0.002, 0.2] J",
           "in_band=" + std::to_string(in_band) + "/5 values=" + values);
  }

  // 7: every archive member meets every GU delay budget, all desk runs.
  {
    long checked = 0, violations = 0;
    for (const DeskRun& r : runs[60]) {
      for (const ArchiveMember& m : r.woa.archive.members) {
        const Evaluation eval = evaluate(r.scenario, r.deployment, m.solution);
        for (std::size_t u = 0; u < eval.gu_delay.size(); ++u) {
          ++checked;
          if (eval.gu_delay[u] > r.scenario.gus[u].max_delay_s) ++violations;
        }
      }
    }
    report(7, violations == 0 && checked > 0, "delay budgets hold for every archive member",
           "checked=" + std::to_string(checked) + " violations=" + std::to_string(violations));
  }

  // 8: AEG-extreme member transmits with less mean GU power than ADG-extreme.
  {
    int hold = 0;
    std::string detail;
    for (const DeskRun& r : runs[60]) {
      const ArchiveMember& aeg =
          r.woa.archive.members[static_cast<std::size_t>(argmin_objective(r.woa.archive, 1))];
      const ArchiveMember& adg =
          r.woa.archive.members[static_cast<std::size_t>(argmin_objective(r.woa.archive, 2))];
      const double pa = mean_gu_power(aeg);
      const double pd = mean_gu_power(adg);
      if (pa < pd) ++hold;
      detail += "(" + std::to_string(pa) + "<" + std::to_string(pd) + ") ";
    }
    report(8, hold >= 4, "AEG-extreme uses less mean GU power than ADG-extreme",
           "held=" + std::to_string(hold) + "/5 " + detail);
  }

  // 9: TEU-extreme hovers at least as high as AEG-extreme on average.
  {
    int hold = 0;
    std::string detail;
    for (const DeskRun& r : runs[60]) {
      const ArchiveMember& teu =
          r.woa.archive.members[static_cast<std::size_t>(argmin_objective(r.woa.archive, 0))];
      const ArchiveMember& aeg =
          r.woa.archive.members[static_cast<std::size_t>(argmin_objective(r.woa.archive, 1))];
      const double zt = mean_hover_altitude(teu);
      const double za = mean_hover_altitude(aeg);
      if (zt >= za) ++hold;
      detail += "(" + std::to_string(zt) + ">=" + std::to_string(za) + ") ";
    }
    report(9, hold >= 4, "TEU-extreme hovers at or above AEG-extreme altitude",
           "held=" + std::to_string(hold) + "/5 " + detail);
  }

  // 10: non-inferiority against NSGA-II at matched budgets (median HV).
  {
    std::vector<double> hv_woa, hv_nsga;
    for (const DeskRun& r : runs[60]) {
      Nsga2Params params;
      params.population = 30;
      params.seed = r.scenario.seed;
      params.eval_budget = r.woa.evaluations;
      params.threads = 4;
      const OptimizeResult genetic = nsga2(r.scenario, r.deployment, params);

      // Common min-max normalization over the union of both archives.
      std::array<double, 3> lo{}, hi{};
      lo.fill(std::numeric_limits<double>::infinity());
      hi.fill(-std::numeric_limits<double>::infinity());
      auto absorb = [&](const ParetoArchive& archive) {
        for (const ArchiveMember& m : archive.members)
          for (int k = 0; k < 3; ++k) {
            lo[static_cast<std::size_t>(k)] =
                std::min(lo[static_cast<std::size_t>(k)], m.objectives[k]);
            hi[static_cast<std::size_t>(k)] =
                std::max(hi[static_cast<std::size_t>(k)], m.objectives[k]);
          }
      };
      absorb(r.woa.archive);
      absorb(genetic.archive);
      auto scaled = [&](const ParetoArchive& archive) {
        std::vector<ObjectiveVector> out;
        for (const ArchiveMember& m : archive.members) {
          ObjectiveVector s;
          for (int k = 0; k < 3; ++k) {
            const double span = hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
            const double v =
                span > 0.0 ? (m.objectives[k] - lo[static_cast<std::size_t>(k)]) / span : 0.0;
            if (k == 0) s.teu_j = v;
            if (k == 1) s.aeg_j = v;
            if (k == 2) s.adg_s = v;
          }
          out.push_back(s);
        }
        return out;
      };
      const ObjectiveVector ref{1.1, 1.1, 1.1};
      hv_woa.push_back(hypervolume(scaled(r.woa.archive), ref));
      hv_nsga.push_back(hypervolume(scaled(genetic.archive), ref));
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    const double mw = median(hv_woa);
    const double mn = median(hv_nsga);
    report(10, mw >= 0.9 * mn, "median hypervolume non-inferior to NSGA-II at equal budget",
           "inswoa=" + std::to_string(mw) + " nsga2=" + std::to_string(mn));
  }
}

// ---- criterion 11: near-linear wall-time scaling --------------------------------

void criterion_11() {
  const std::vector<int> user_counts = {30, 60, 120};
  std::vector<double> times;
  for (int users : user_counts) {
    const Scenario s = make_scenario(users, 11);
    const Deployment d = predeploy(s);
    WoaParams params;
    params.population = 30;
    params.iterations = 50;
    params.seed = 11;
    params.threads = 4;
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      ins_woa(s, d, params);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                          start)
                                .count());
    }
    times.push_back(best);
  }

  // Least squares t = a + b u, then R^2.
  const double n = static_cast<double>(user_counts.size());
  double su = 0, st = 0, suu = 0, sut = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    su += user_counts[i];
    st += times[i];
    suu += static_cast<double>(user_counts[i]) * user_counts[i];
    sut += user_counts[i] * times[i];
  }
  const double slope = (n * sut - su * st) / (n * suu - su * su);
  const double intercept = (st - slope * su) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double fit = intercept + slope * user_counts[i];
    ss_res += (times[i] - fit) * (times[i] - fit);
    ss_tot += (times[i] - st / n) * (times[i] - st / n);
  }
  const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  std::string detail = "r2=" + std::to_string(r2) + " times=";
  for (double t : times) detail += std::to_string(t) + "s ";
  report(11, r2 >= 0.9, "wall time scales near-linearly over U={30,60,120}", detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criteria_5_to_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
