#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "harness.hpp"

using namespace uswarm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ExperimentPlan tiny_plan(const std::string& out_dir) {
  ExperimentPlan plan;
  plan.base.num_swarms = 2;
  plan.base.num_tuavs = 4;
  plan.user_counts = {14};
  plan.engines = {"ins-woa", "nsga2"};
  plan.seeds = {1, 2};
  plan.woa.population = 12;
  plan.woa.iterations = 8;
  plan.woa.threads = 2;
  plan.out_dir = out_dir;
  return plan;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("compromise selection by min-max normalization") {
  {
    // Two symmetric members: both normalize to a sum of 1; index breaks the tie.
    std::vector<ObjectiveVector> archive = {{0, 1, 5}, {1, 0, 5}};
    CHECK(select_compromise(archive) == 0);
  }
  {
    std::vector<ObjectiveVector> archive = {{1, 1, 1}, {2, 2, 2}};
    CHECK(select_compromise(archive) == 0);
  }
  {
    // Hand-normalized: spans f1 in [10,30], f2 in [1,5], f3 in [0.2,0.8].
    // Sums: a: 0+1+1 = 2, b: 1+0+0 = 1, c: 0.5+0.25+0.5 = 1.25,
    //       d: 0.25+0.5+0 = 0.75 (min), e: 1+1+0.33 = 2.33.
    std::vector<ObjectiveVector> archive = {{10, 5, 0.8},
                                            {30, 1, 0.2},
                                            {20, 2, 0.5},
                                            {15, 3, 0.2},
                                            {30, 5, 0.4}};
    CHECK(select_compromise(archive) == 3);
  }
  std::vector<ObjectiveVector> empty;
  CHECK_THROWS_AS(select_compromise(empty), std::invalid_argument);
}

TEST_CASE("run plan produces records, files, and deterministic reruns") {
  const fs::path dir = fs::temp_directory_path() / "uswarm_harness_run";
  fs::remove_all(dir);

  const ExperimentPlan plan = tiny_plan(dir.string());
  const std::vector<RunRecord> records = run_plan(plan);
  CHECK(records.size() == 4);  // 2 engines x 2 seeds x 1 user count

  for (const RunRecord& r : records) {
    CHECK(fs::exists(dir / r.archive_csv));
    CHECK(fs::exists(dir / r.trajectories_json));
    CHECK(fs::exists(dir / r.scenario_file));
    CHECK(fs::exists(dir / r.deployment_file));
    CHECK(r.evaluations <= r.budget);
    CHECK(r.summary.size > 0);
  }
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "records.json"));

  // NSGA-II runs on exactly the budget INS-WOA spent.
  for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
    CHECK(records[i].engine == "ins-woa");
    CHECK(records[i + 1].engine == "nsga2");
    CHECK(records[i + 1].budget == records[i].evaluations);
  }

  // Rerunning the same plan reproduces every archive byte for byte.
  std::vector<std::string> before;
  for (const RunRecord& r : records) before.push_back(slurp(dir / r.archive_csv));
  const std::vector<RunRecord> again = run_plan(plan);
  for (std::size_t i = 0; i < records.size(); ++i)
    CHECK(before[i] == slurp(dir / again[i].archive_csv));

  fs::remove_all(dir);
}

TEST_CASE("report emits the four figure-data files") {
  const fs::path dir = fs::temp_directory_path() / "uswarm_harness_report";
  fs::remove_all(dir);

  ExperimentPlan plan = tiny_plan(dir.string());
  plan.seeds = {1};
  run_plan(plan);
  write_report((dir / "records.json").string(), dir.string());

  CHECK(fs::exists(dir / "report_series.csv"));
  CHECK(fs::exists(dir / "report_walltime.csv"));
  CHECK(fs::exists(dir / "report_altitude.csv"));
  const std::string hist = slurp(dir / "report_power_histogram.csv");

  // Histogram bin counts sum to the number of users for every solution kind.
  std::istringstream lines(hist);
  std::string line;
  std::getline(lines, line);  // header
  std::map<std::string, int> totals;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string engine, users, seed, kind, lo, hi, count;
    std::getline(cells, engine, ',');
    std::getline(cells, users, ',');
    std::getline(cells, seed, ',');
    std::getline(cells, kind, ',');
    std::getline(cells, lo, ',');
    std::getline(cells, hi, ',');
    std::getline(cells, count, ',');
    totals[engine + "/" + seed + "/" + kind] += std::stoi(count);
  }
  CHECK(totals.size() == 8);  // 2 engines x 1 seed x 4 solution kinds
  for (const auto& [key, total] : totals) CHECK(total == 14);

  fs::remove_all(dir);
}

TEST_CASE("exported solutions recompute to the exported objectives") {
  const fs::path dir = fs::temp_directory_path() / "uswarm_harness_recompute";
  fs::remove_all(dir);

  ExperimentPlan plan = tiny_plan(dir.string());
  plan.seeds = {3};
  plan.engines = {"ins-woa"};
  const std::vector<RunRecord> records = run_plan(plan);
  REQUIRE(records.size() == 1);

  const Scenario scenario = load_scenario((dir / records[0].scenario_file).string());
  const Deployment deployment = load_deployment((dir / records[0].deployment_file).string());

  json doc;
  {
    std::ifstream in(dir / records[0].trajectories_json);
    in >> doc;
  }
  REQUIRE(doc.at("solutions").size() > 0);
  for (const json& exported : doc.at("solutions")) {
    Solution sol;
    sol.gu_powers = exported.at("gu_powers_w").get<std::vector<double>>();
    sol.orderings.resize(deployment.tuavs.size());
    sol.hover_points.resize(deployment.tuavs.size());
    sol.relay_powers.assign(deployment.tuavs.size(), scenario.channel.p_m_min);
    for (const json& t : exported.at("tuavs")) {
      const auto m = t.at("tuav").get<std::size_t>();
      sol.relay_powers[m] = t.at("relay_power_w").get<double>();
      sol.hover_points[m].resize(deployment.tuavs[m].candidates.size());
      for (const json& hop : t.at("path")) {
        const int candidate = hop.at("candidate").get<int>();
        sol.orderings[m].push_back(candidate);
        sol.hover_points[m][static_cast<std::size_t>(candidate)] = {
            hop.at("x").get<double>(), hop.at("y").get<double>(), hop.at("z").get<double>()};
      }
    }

    const Evaluation eval = evaluate(scenario, deployment, sol);
    CHECK(eval.objectives.teu_j ==
          doctest::Approx(exported.at("objectives").at("teu_j").get<double>()).epsilon(1e-12));
    CHECK(eval.objectives.aeg_j ==
          doctest::Approx(exported.at("objectives").at("aeg_j").get<double>()).epsilon(1e-12));
    CHECK(eval.objectives.adg_s ==
          doctest::Approx(exported.at("objectives").at("adg_s").get<double>()).epsilon(1e-12));
  }

  fs::remove_all(dir);
}

TEST_CASE("a user sweep yields one aggregate row per engine per count") {
  const fs::path dir = fs::temp_directory_path() / "uswarm_harness_sweep";
  fs::remove_all(dir);

  ExperimentPlan plan = tiny_plan(dir.string());
  plan.user_counts = {12, 16};
  plan.engines = {"ins-woa"};
  plan.seeds = {1};
  plan.woa.iterations = 4;
  run_plan(plan);

  std::istringstream series(slurp(dir / "series.csv"));
  std::string line;
  std::getline(series, line);
  CHECK(line.find("engine,users,mean_min_f1") == 0);
  int rows = 0;
  while (std::getline(series, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
  fs::remove_all(dir);
}

TEST_CASE("plan validation errors") {
  ExperimentPlan plan;
  plan.out_dir = (fs::temp_directory_path() / "uswarm_harness_bad").string();
  plan.engines = {};
  plan.seeds = {1};
  CHECK_THROWS_AS(run_plan(plan), ConfigError);
  plan.engines = {"ins-woa"};
  plan.seeds = {};
  CHECK_THROWS_AS(run_plan(plan), ConfigError);
  plan.seeds = {1};
  plan.engines = {"simulated-annealing"};
  CHECK_THROWS_AS(run_plan(plan), ConfigError);
}

}  // TEST_SUITE
