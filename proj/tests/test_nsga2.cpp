#include <cmath>

#include <doctest.h>

#include "harness.hpp"
#include "moo/nsga2.hpp"
#include "moo/woa.hpp"
#include "predeploy.hpp"

using namespace uswarm;

namespace {

Scenario make_scenario(int num_gus, int num_swarms, int num_tuavs, std::uint64_t seed) {
  GenerateOptions options;
  options.num_gus = num_gus;
  options.num_swarms = num_swarms;
  options.num_tuavs = num_tuavs;
  options.seed = seed;
  return generate_scenario(options);
}

}  // namespace

TEST_SUITE("nsga2") {

TEST_CASE("same seed reproduces the archive bitwise") {
  const Scenario s = make_scenario(24, 2, 4, 15);
  const Deployment d = predeploy(s);
  Nsga2Params params;
  params.population = 20;
  params.generations = 30;
  params.seed = 6;
  params.threads = 4;
  const OptimizeResult a = nsga2(s, d, params);
  const OptimizeResult b = nsga2(s, d, params);
  CHECK(archive_to_csv(a.archive) == archive_to_csv(b.archive));

  params.threads = 1;
  const OptimizeResult serial = nsga2(s, d, params);
  CHECK(archive_to_csv(a.archive) == archive_to_csv(serial.archive));
}

TEST_CASE("budget accounting lands within one percent") {
  const Scenario s = make_scenario(24, 2, 4, 15);
  const Deployment d = predeploy(s);

  WoaParams woa;
  woa.population = 16;
  woa.iterations = 12;
  woa.seed = 2;
  const OptimizeResult reference = ins_woa(s, d, woa);

  Nsga2Params params;
  params.population = 16;
  params.eval_budget = reference.evaluations;
  params.seed = 2;
  const OptimizeResult run = nsga2(s, d, params);
  CHECK(std::abs(static_cast<double>(run.evaluations - reference.evaluations)) <=
        0.01 * static_cast<double>(reference.evaluations));
}

TEST_CASE("both engines agree on the single-GU toy") {
  // One GU, one hover candidate: 5 decision variables, effectively searchable
  // to convergence at this budget. Best AEG must agree within 5 percent.
  const Scenario s = make_scenario(1, 1, 1, 5);
  const Deployment d = predeploy(s);
  auto best_f2 = [](const ParetoArchive& archive) {
    double best = archive.members[0].objectives.aeg_j;
    for (const ArchiveMember& m : archive.members) best = std::min(best, m.objectives.aeg_j);
    return best;
  };

  for (std::uint64_t seed : {1, 2, 3}) {
    WoaParams woa;
    woa.population = 20;
    woa.iterations = 1500;
    woa.seed = seed;
    const OptimizeResult nested = ins_woa(s, d, woa);

    Nsga2Params params;
    params.population = 20;
    params.eval_budget = nested.evaluations;
    params.seed = seed;
    const OptimizeResult genetic = nsga2(s, d, params);

    REQUIRE(!nested.archive.members.empty());
    REQUIRE(!genetic.archive.members.empty());
    const double a = best_f2(nested.archive);
    const double b = best_f2(genetic.archive);
    CHECK(std::abs(a - b) <= 0.05 * std::max(a, b));
  }
}

TEST_CASE("archive solutions are feasible and within bounds on the toy") {
  const Scenario s = make_scenario(12, 1, 2, 8);
  const Deployment d = predeploy(s);
  Nsga2Params params;
  params.population = 20;
  params.generations = 40;
  params.seed = 4;
  const OptimizeResult run = nsga2(s, d, params);
  REQUIRE(!run.archive.members.empty());
  for (const ArchiveMember& m : run.archive.members) {
    const FeasibilityReport report = feasibility(s, d, m.solution);
    CHECK(report.violation == m.violation);
    for (const auto& ordering : m.solution.orderings) {
      std::vector<int> sorted = ordering;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == static_cast<int>(i));
    }
  }
}

TEST_CASE("parameter validation") {
  const Scenario s = make_scenario(12, 1, 2, 8);
  const Deployment d = predeploy(s);
  Nsga2Params params;
  params.population = 7;  // must be even
  params.generations = 5;
  CHECK_THROWS_AS(nsga2(s, d, params), ConfigError);
  params.population = 8;
  params.generations = 0;
  params.eval_budget = 0;
  CHECK_THROWS_AS(nsga2(s, d, params), ConfigError);
}

}  // TEST_SUITE
