#include "harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace uswarm {

using nlohmann::json;
namespace fs = std::filesystem;

int select_compromise(std::span<const ObjectiveVector> objectives) {
  if (objectives.empty()) throw std::invalid_argument("select_compromise: empty archive");
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const ObjectiveVector& o : objectives)
    for (int k = 0; k < 3; ++k) {
      lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], o[k]);
      hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], o[k]);
    }
  int best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    double score = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double span = hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
      if (span > 0.0) score += (objectives[i][k] - lo[static_cast<std::size_t>(k)]) / span;
    }
    if (score < best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double normalized_hypervolume(std::span<const ObjectiveVector> objectives) {
  if (objectives.empty()) return 0.0;
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const ObjectiveVector& o : objectives)
    for (int k = 0; k < 3; ++k) {
      lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], o[k]);
      hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], o[k]);
    }
  std::vector<ObjectiveVector> scaled;
  scaled.reserve(objectives.size());
  for (const ObjectiveVector& o : objectives) {
    ObjectiveVector s;
    s.teu_j = hi[0] > lo[0] ? (o.teu_j - lo[0]) / (hi[0] - lo[0]) : 0.0;
    s.aeg_j = hi[1] > lo[1] ? (o.aeg_j - lo[1]) / (hi[1] - lo[1]) : 0.0;
    s.adg_s = hi[2] > lo[2] ? (o.adg_s - lo[2]) / (hi[2] - lo[2]) : 0.0;
    scaled.push_back(s);
  }
  return hypervolume(scaled, {1.1, 1.1, 1.1});
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ArchiveSummary summarize(const ParetoArchive& archive) {
  ArchiveSummary s;
  s.size = static_cast<int>(archive.members.size());
  if (archive.members.empty()) return s;

  std::array<std::vector<double>, 3> columns;
  for (const ArchiveMember& m : archive.members)
    for (int k = 0; k < 3; ++k) columns[static_cast<std::size_t>(k)].push_back(m.objectives[k]);
  std::array<double, 3> mins{}, medians{};
  for (int k = 0; k < 3; ++k) {
    auto& col = columns[static_cast<std::size_t>(k)];
    std::sort(col.begin(), col.end());
    mins[static_cast<std::size_t>(k)] = col.front();
    medians[static_cast<std::size_t>(k)] = col[col.size() / 2];
  }
  s.min_objectives = {mins[0], mins[1], mins[2]};
  s.median_objectives = {medians[0], medians[1], medians[2]};

  std::vector<ObjectiveVector> objectives;
  objectives.reserve(archive.members.size());
  for (const ArchiveMember& m : archive.members) objectives.push_back(m.objectives);
  s.hypervolume = normalized_hypervolume(objectives);
  return s;
}

}  // namespace

std::string archive_to_csv(const ParetoArchive& archive) {
  std::ostringstream out;
  out << "rank,crowding,f1_teu_j,f2_aeg_j,f3_adg_s,violation\n";
  for (const ArchiveMember& m : archive.members) {
    out << m.rank << ',' << fmt(m.crowding) << ',' << fmt(m.objectives.teu_j) << ','
        << fmt(m.objectives.aeg_j) << ',' << fmt(m.objectives.adg_s) << ',' << fmt(m.violation)
        << '\n';
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw ConfigError("failed writing '" + tmp + "'");
  }
  fs::rename(tmp, path);
}

namespace {

json trajectories_to_json(const std::string& engine, std::uint64_t seed, int users,
                          const Deployment& deployment, const ParetoArchive& archive) {
  json solutions = json::array();
  for (std::size_t i = 0; i < archive.members.size(); ++i) {
    const ArchiveMember& m = archive.members[i];
    json tuavs = json::array();
    for (std::size_t t = 0; t < m.solution.orderings.size(); ++t) {
      json path = json::array();
      for (int n : m.solution.orderings[t]) {
        const Point3& q = m.solution.hover_points[t][static_cast<std::size_t>(n)];
        path.push_back(json{{"candidate", n}, {"x", q.x}, {"y", q.y}, {"z", q.z}});
      }
      tuavs.push_back(json{{"tuav", t},
                           {"swarm", deployment.tuavs[t].swarm},
                           {"relay_power_w", m.solution.relay_powers[t]},
                           {"path", std::move(path)}});
    }
    solutions.push_back(json{{"index", i},
                             {"rank", m.rank},
                             {"crowding", std::isinf(m.crowding) ? -1.0 : m.crowding},
                             {"objectives",
                              json{{"teu_j", m.objectives.teu_j},
                                   {"aeg_j", m.objectives.aeg_j},
                                   {"adg_s", m.objectives.adg_s}}},
                             {"violation", m.violation},
                             {"gu_powers_w", m.solution.gu_powers},
                             {"tuavs", std::move(tuavs)}});
  }
  return json{{"format", "uswarm-trajectories"},
              {"engine", engine},
              {"seed", seed},
              {"users", users},
              {"solutions", std::move(solutions)}};
}

}  // namespace

std::string trajectories_document(const std::string& engine, std::uint64_t seed, int users,
                                  const Deployment& deployment, const ParetoArchive& archive) {
  return trajectories_to_json(engine, seed, users, deployment, archive).dump(2) + "\n";
}

namespace {

struct EngineOutcome {
  OptimizeResult result;
  double wall_s = 0.0;
};

EngineOutcome run_engine(const std::string& engine, const Scenario& scenario,
                         const Deployment& deployment, const WoaParams& woa, long budget) {
  EngineOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  if (engine == "ins-woa") {
    WoaParams p = woa;
    p.eval_budget = budget;
    outcome.result = ins_woa(scenario, deployment, p);
  } else if (engine == "nsga2") {
    Nsga2Params p;
    p.population = woa.population;
    p.seed = woa.seed;
    p.offset_radius = woa.offset_radius;
    p.threads = woa.threads;
    p.eval_budget = budget;
    outcome.result = nsga2(scenario, deployment, p);
  } else {
    throw ConfigError("unknown engine '" + engine + "' (expected ins-woa or nsga2)");
  }
  outcome.wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

long planned_inswoa_budget(const Deployment& deployment, const WoaParams& woa) {
  long steps = 0;
  for (const TuavPlan& t : deployment.tuavs) steps += static_cast<long>(t.candidates.size());
  return static_cast<long>(woa.population) * steps * (woa.iterations + 1) + woa.population;
}

json record_to_json(const RunRecord& r) {
  auto obj = [](const ObjectiveVector& o) {
    return json{{"teu_j", o.teu_j}, {"aeg_j", o.aeg_j}, {"adg_s", o.adg_s}};
  };
  return json{{"engine", r.engine},
              {"seed", r.seed},
              {"users", r.users},
              {"wall_s", r.wall_s},
              {"evaluations", r.evaluations},
              {"budget", r.budget},
              {"archive_size", r.summary.size},
              {"min_objectives", obj(r.summary.min_objectives)},
              {"median_objectives", obj(r.summary.median_objectives)},
              {"hypervolume", r.summary.hypervolume},
              {"compromise", obj(r.compromise)},
              {"compromise_index", r.compromise_index},
              {"scenario_file", r.scenario_file},
              {"deployment_file", r.deployment_file},
              {"archive_csv", r.archive_csv},
              {"trajectories_json", r.trajectories_json}};
}

}  // namespace

std::vector<RunRecord> run_plan(const ExperimentPlan& plan) {
  if (plan.engines.empty()) throw ConfigError("run_plan: no engines selected");
  if (plan.seeds.empty()) throw ConfigError("run_plan: no seeds given");
  if (plan.out_dir.empty()) throw ConfigError("run_plan: no output directory");
  for (const std::string& engine : plan.engines)
    if (engine != "ins-woa" && engine != "nsga2")
      throw ConfigError("run_plan: unknown engine '" + engine + "'");

  fs::create_directories(plan.out_dir);
  std::vector<int> user_counts = plan.user_counts;
  if (user_counts.empty()) user_counts.push_back(plan.base.num_gus);

  const bool parity = std::find(plan.engines.begin(), plan.engines.end(), std::string("ins-woa")) !=
                      plan.engines.end();

  std::vector<RunRecord> records;
  for (int users : user_counts) {
    for (std::uint64_t seed : plan.seeds) {
      GenerateOptions options = plan.base;
      options.num_gus = users;
      options.seed = seed;
      const Scenario scenario = generate_scenario(options);
      const Deployment deployment = predeploy(scenario);

      std::ostringstream stem;
      stem << "u" << users << "_s" << seed;
      const std::string scenario_file = "scenario_" + stem.str() + ".json";
      const std::string deployment_file = "deployment_" + stem.str() + ".json";
      save_scenario(scenario, plan.out_dir + "/" + scenario_file);
      save_deployment(deployment, plan.out_dir + "/" + deployment_file);

      WoaParams woa = plan.woa;
      woa.seed = seed;

      long inswoa_spent = 0;
      for (const std::string& engine : plan.engines) {
        long budget = plan.budget;
        if (engine == "ins-woa") {
          if (budget == 0) budget = planned_inswoa_budget(deployment, woa);
        } else if (parity) {
          // Equal-footing comparison: NSGA-II gets what INS-WOA actually used.
          budget = inswoa_spent;
        } else if (budget == 0) {
          budget = planned_inswoa_budget(deployment, woa);
        }

        const EngineOutcome outcome = run_engine(engine, scenario, deployment, woa, budget);
        if (engine == "ins-woa") inswoa_spent = outcome.result.evaluations;

        RunRecord record;
        record.engine = engine;
        record.seed = seed;
        record.users = users;
        record.wall_s = outcome.wall_s;
        record.evaluations = outcome.result.evaluations;
        record.budget = budget;
        record.summary = summarize(outcome.result.archive);
        record.scenario_file = scenario_file;
        record.deployment_file = deployment_file;

        std::vector<ObjectiveVector> objectives;
        for (const ArchiveMember& m : outcome.result.archive.members)
          objectives.push_back(m.objectives);
        if (!objectives.empty()) {
          record.compromise_index = select_compromise(objectives);
          record.compromise = objectives[static_cast<std::size_t>(record.compromise_index)];
        }

        record.archive_csv = "archive_" + engine + "_" + stem.str() + ".csv";
        record.trajectories_json = "trajectories_" + engine + "_" + stem.str() + ".json";
        write_text_atomic(plan.out_dir + "/" + record.archive_csv,
                          archive_to_csv(outcome.result.archive));
        write_text_atomic(plan.out_dir + "/" + record.trajectories_json,
                          trajectories_document(engine, seed, users, deployment,
                                                outcome.result.archive));
        records.push_back(std::move(record));
      }
    }
  }

  // summary.csv: one row per run, stable column order.
  std::ostringstream summary;
  summary << "engine,users,seed,evaluations,budget,archive_size,min_f1,min_f2,min_f3,"
             "median_f1,median_f2,median_f3,hypervolume,compromise_f1,compromise_f2,"
             "compromise_f3\n";
  for (const RunRecord& r : records) {
    summary << r.engine << ',' << r.users << ',' << r.seed << ',' << r.evaluations << ','
            << r.budget << ',' << r.summary.size << ',' << fmt(r.summary.min_objectives.teu_j)
            << ',' << fmt(r.summary.min_objectives.aeg_j) << ','
            << fmt(r.summary.min_objectives.adg_s) << ','
            << fmt(r.summary.median_objectives.teu_j) << ','
            << fmt(r.summary.median_objectives.aeg_j) << ','
            << fmt(r.summary.median_objectives.adg_s) << ',' << fmt(r.summary.hypervolume) << ','
            << fmt(r.compromise.teu_j) << ',' << fmt(r.compromise.aeg_j) << ','
            << fmt(r.compromise.adg_s) << '\n';
  }
  write_text_atomic(plan.out_dir + "/summary.csv", summary.str());

  // series.csv: seed-averaged objective series per (engine, users).
  std::ostringstream series;
  series << "engine,users,mean_min_f1,mean_min_f2,mean_min_f3,mean_compromise_f1,"
            "mean_compromise_f2,mean_compromise_f3,mean_hypervolume\n";
  for (const std::string& engine : plan.engines) {
    for (int users : user_counts) {
      std::array<double, 7> acc{};
      int count = 0;
      for (const RunRecord& r : records) {
        if (r.engine != engine || r.users != users) continue;
        acc[0] += r.summary.min_objectives.teu_j;
        acc[1] += r.summary.min_objectives.aeg_j;
        acc[2] += r.summary.min_objectives.adg_s;
        acc[3] += r.compromise.teu_j;
        acc[4] += r.compromise.aeg_j;
        acc[5] += r.compromise.adg_s;
        acc[6] += r.summary.hypervolume;
        ++count;
      }
      if (count == 0) continue;
      series << engine << ',' << users;
      for (double v : acc) series << ',' << fmt(v / count);
      series << '\n';
    }
  }
  write_text_atomic(plan.out_dir + "/series.csv", series.str());

  json jrecords = json::array();
  for (const RunRecord& r : records) jrecords.push_back(record_to_json(r));
  write_text_atomic(plan.out_dir + "/records.json",
                    json{{"format", "uswarm-records"}, {"records", std::move(jrecords)}}.dump(2) +
                        "\n");
  return records;
}

namespace {

struct LoadedSolution {
  ObjectiveVector objectives;
  std::vector<double> gu_powers;
  std::vector<double> hover_z;  // one entry per visited hover point
};

std::vector<LoadedSolution> load_solutions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  json j;
  in >> j;
  std::vector<LoadedSolution> out;
  for (const json& s : j.at("solutions")) {
    LoadedSolution sol;
    sol.objectives = {s.at("objectives").at("teu_j").get<double>(),
                      s.at("objectives").at("aeg_j").get<double>(),
                      s.at("objectives").at("adg_s").get<double>()};
    sol.gu_powers = s.at("gu_powers_w").get<std::vector<double>>();
    for (const json& t : s.at("tuavs"))
      for (const json& p : t.at("path")) sol.hover_z.push_back(p.at("z").get<double>());
    out.push_back(std::move(sol));
  }
  return out;
}

constexpr const char* kSolutionKinds[] = {"teu", "aeg", "adg", "compromise"};

int extreme_index(const std::vector<LoadedSolution>& solutions, int kind) {
  if (kind == 3) {
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(solutions.size());
    for (const LoadedSolution& s : solutions) objectives.push_back(s.objectives);
    return select_compromise(objectives);
  }
  int best = 0;
  for (std::size_t i = 1; i < solutions.size(); ++i)
    if (solutions[i].objectives[kind] < solutions[static_cast<std::size_t>(best)].objectives[kind])
      best = static_cast<int>(i);
  return best;
}

}  // namespace

void write_report(const std::string& records_json, const std::string& out_dir) {
  std::ifstream in(records_json);
  if (!in) throw ConfigError("cannot open '" + records_json + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in '") + records_json + "': " + e.what());
  }
  const json& records = j.at("records");
  if (records.empty()) throw ConfigError("write_report: no records");
  fs::create_directories(out_dir);
  const std::string base_dir = fs::path(records_json).parent_path().string();

  // (a) objective-vs-users series per engine.
  std::map<std::pair<std::string, int>, std::array<double, 7>> acc;
  std::map<std::pair<std::string, int>, int> counts;
  for (const json& r : records) {
    const auto key = std::make_pair(r.at("engine").get<std::string>(), r.at("users").get<int>());
    auto& a = acc[key];
    a[0] += r.at("min_objectives").at("teu_j").get<double>();
    a[1] += r.at("min_objectives").at("aeg_j").get<double>();
    a[2] += r.at("min_objectives").at("adg_s").get<double>();
    a[3] += r.at("compromise").at("teu_j").get<double>();
    a[4] += r.at("compromise").at("aeg_j").get<double>();
    a[5] += r.at("compromise").at("adg_s").get<double>();
    a[6] += r.at("wall_s").get<double>();
    ++counts[key];
  }
  std::ostringstream series;
  series << "engine,users,mean_min_f1,mean_min_f2,mean_min_f3,mean_compromise_f1,"
            "mean_compromise_f2,mean_compromise_f3\n";
  for (const auto& [key, a] : acc) {
    series << key.first << ',' << key.second;
    for (int k = 0; k < 6; ++k) series << ',' << fmt(a[static_cast<std::size_t>(k)] / counts[key]);
    series << '\n';
  }
  write_text_atomic(out_dir + "/report_series.csv", series.str());

  // (b) GU power histograms and (c) mean hover altitudes per selected member.
  const double bin_edges[] = {0.0, 0.25, 0.5, 0.75};
  std::ostringstream hist;
  hist << "engine,users,seed,solution,bin_low_w,bin_high_w,count\n";
  std::ostringstream alt;
  alt << "engine,users,seed,solution,mean_hover_z_m\n";
  for (const json& r : records) {
    const auto solutions =
        load_solutions(base_dir + "/" + r.at("trajectories_json").get<std::string>());
    if (solutions.empty()) continue;
    for (int kind = 0; kind < 4; ++kind) {
      const LoadedSolution& sol = solutions[static_cast<std::size_t>(extreme_index(solutions, kind))];
      int bins[4] = {0, 0, 0, 0};
      for (double p : sol.gu_powers) {
        int b = 3;
        for (int k = 0; k < 3; ++k)
          if (p < bin_edges[k + 1]) {
            b = k;
            break;
          }
        ++bins[b];
      }
      for (int b = 0; b < 4; ++b) {
        const double hi_edge = b == 3 ? 1.0 : bin_edges[b + 1];
        hist << r.at("engine").get<std::string>() << ',' << r.at("users").get<int>() << ','
             << r.at("seed").get<std::uint64_t>() << ',' << kSolutionKinds[kind] << ','
             << bin_edges[b] << ',' << hi_edge << ',' << bins[b] << '\n';
      }
      double mean_z = 0.0;
      if (!sol.hover_z.empty())
        mean_z = std::accumulate(sol.hover_z.begin(), sol.hover_z.end(), 0.0) /
                 static_cast<double>(sol.hover_z.size());
      alt << r.at("engine").get<std::string>() << ',' << r.at("users").get<int>() << ','
          << r.at("seed").get<std::uint64_t>() << ',' << kSolutionKinds[kind] << ','
          << fmt(mean_z) << '\n';
    }
  }
  write_text_atomic(out_dir + "/report_power_histogram.csv", hist.str());
  write_text_atomic(out_dir + "/report_altitude.csv", alt.str());

  // (d) wall-time-vs-users series.
  std::ostringstream wall;
  wall << "engine,users,mean_wall_s\n";
  for (const auto& [key, a] : acc)
    wall << key.first << ',' << key.second << ',' << fmt(a[6] / counts[key]) << '\n';
  write_text_atomic(out_dir + "/report_walltime.csv", wall.str());
}

}  // namespace uswarm
