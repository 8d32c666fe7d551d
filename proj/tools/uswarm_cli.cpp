// Command-line front end for the uswarm planning engine. Talks to the engine
// exclusively through the C API in uswarm/uswarm.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <uswarm/uswarm.h>

namespace {

int status_to_exit_code(usw_status status) {
  switch (status) {
    case USW_OK:
      return 0;
    case USW_ERR_INFEASIBLE:
      return 2;
    default:
      return 1;  // configuration, I/O, internal
  }
}

int bail(usw_status status) {
  std::fprintf(stderr, "error: %s\n", usw_last_error());
  return status_to_exit_code(status);
}

std::string json_array(const std::vector<std::string>& values, bool quoted) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    if (quoted) out << '"' << values[i] << '"';
    else out << values[i];
  }
  out << ']';
  return out.str();
}

struct OptimizeFlags {
  std::string scenario_path;
  std::string deployment_path;
  std::string engine = "ins-woa";
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int population = 30;
  int iterations = 50;
  long budget = 0;
  double offset_radius = 50.0;
  int threads = 0;
};

int run_optimize(const OptimizeFlags& flags) {
  std::error_code ec;
  std::filesystem::create_directories(flags.out_dir, ec);

  usw_scenario* scenario = nullptr;
  usw_status status = usw_scenario_load(flags.scenario_path.c_str(), &scenario);
  if (status != USW_OK) return bail(status);

  usw_deployment* deployment = nullptr;
  if (flags.deployment_path.empty()) {
    status = usw_predeploy(scenario, &deployment);
  } else {
    status = usw_deployment_load(flags.deployment_path.c_str(), &deployment);
  }
  if (status != USW_OK) {
    usw_scenario_free(scenario);
    return bail(status);
  }

  std::ostringstream params;
  params << "{\"population\":" << flags.population << ",\"iterations\":" << flags.iterations
         << ",\"seed\":" << flags.seed << ",\"budget\":" << flags.budget
         << ",\"offset_radius\":" << flags.offset_radius << ",\"threads\":" << flags.threads
         << "}";

  usw_archive* archive = nullptr;
  status = usw_optimize(scenario, deployment, flags.engine.c_str(), params.str().c_str(),
                        &archive);
  if (status != USW_OK) {
    usw_deployment_free(deployment);
    usw_scenario_free(scenario);
    return bail(status);
  }

  const std::string archive_path = flags.out_dir + "/archive.csv";
  const std::string trajectories_path = flags.out_dir + "/trajectories.json";
  if ((status = usw_archive_export_csv(archive, archive_path.c_str())) == USW_OK)
    status = usw_archive_export_trajectories(archive, trajectories_path.c_str());
  if (status != USW_OK) {
    usw_archive_free(archive);
    usw_deployment_free(deployment);
    usw_scenario_free(scenario);
    return bail(status);
  }

  const int size = usw_archive_size(archive);
  std::printf("engine=%s archive_size=%d evaluations=%lld\n", flags.engine.c_str(), size,
              usw_archive_evaluations(archive));
  int compromise = -1;
  if (size > 0 && usw_archive_compromise(archive, &compromise) == USW_OK) {
    double f[3] = {0, 0, 0};
    usw_archive_objectives(archive, compromise, f);
    std::printf("compromise[%d]: teu=%.6g J aeg=%.6g J adg=%.6g s\n", compromise, f[0], f[1],
                f[2]);
  }
  std::printf("wrote %s and %s\n", archive_path.c_str(), trajectories_path.c_str());

  usw_archive_free(archive);
  usw_deployment_free(deployment);
  usw_scenario_free(scenario);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uswarm - hierarchical UAV-swarm data-collection mission planner"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random scenario file");
  int users = 60, swarms = 3, tuavs = 8;
  std::uint64_t seed = 7;
  std::string config, out_path = "scenario.json";
  gen->add_option("--users", users, "Number of ground users");
  gen->add_option("--swarms", swarms, "Number of UAV swarms");
  gen->add_option("--tuavs", tuavs, "Total number of T-UAVs");
  gen->add_option("--seed", seed, "Generation seed");
  gen->add_option("--config", config, "Parameter override file (JSON)");
  gen->add_option("--out", out_path, "Scenario output path");

  // predeploy
  auto* pre = app.add_subcommand("predeploy", "Compute swarm sites, hover candidates, connections");
  std::string pre_scenario, pre_out = "deployment.json";
  pre->add_option("--scenario", pre_scenario, "Scenario file")->required();
  pre->add_option("--out", pre_out, "Deployment output path");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Search Pareto-optimal trajectories and powers");
  OptimizeFlags flags;
  opt->add_option("--scenario", flags.scenario_path, "Scenario file")->required();
  opt->add_option("--deployment", flags.deployment_path,
                  "Deployment file (computed on the fly when omitted)");
  opt->add_option("--engine", flags.engine, "ins-woa or nsga2");
  opt->add_option("--seed", flags.seed, "Engine seed");
  opt->add_option("--population", flags.population, "Population size");
  opt->add_option("--iterations", flags.iterations, "Inner iterations per hover step");
  opt->add_option("--budget", flags.budget, "Evaluation cap (0: from iterations)");
  opt->add_option("--offset-radius", flags.offset_radius, "Hover x-y freedom (m)");
  opt->add_option("--threads", flags.threads, "Evaluation threads (0: auto)");
  opt->add_option("--out", flags.out_dir, "Output directory");

  // compare
  auto* cmp = app.add_subcommand("compare", "Multi-engine sweep with budget parity");
  std::vector<std::string> cmp_users{"60"};
  std::vector<std::string> cmp_engines{"ins-woa", "nsga2"};
  std::vector<std::string> cmp_seeds{"1"};
  std::string cmp_config, cmp_out = "runs";
  int cmp_swarms = 3, cmp_tuavs = 8, cmp_population = 30, cmp_iterations = 50, cmp_threads = 0;
  long cmp_budget = 0;
  cmp->add_option("--users", cmp_users, "GU counts to sweep")->delimiter(',');
  cmp->add_option("--engine,--engines", cmp_engines, "Engines to run")->delimiter(',');
  cmp->add_option("--seed,--seeds", cmp_seeds, "Replication seeds")->delimiter(',');
  cmp->add_option("--swarms", cmp_swarms, "Number of UAV swarms");
  cmp->add_option("--tuavs", cmp_tuavs, "Total number of T-UAVs");
  cmp->add_option("--population", cmp_population, "Population size");
  cmp->add_option("--iterations", cmp_iterations, "Inner iterations per hover step");
  cmp->add_option("--budget", cmp_budget, "Evaluation cap (0: from iterations)");
  cmp->add_option("--threads", cmp_threads, "Evaluation threads (0: auto)");
  cmp->add_option("--config", cmp_config, "Parameter override file (JSON)");
  cmp->add_option("--out", cmp_out, "Output directory");

  // report
  auto* rep = app.add_subcommand("report", "Figure-data files from a compare run");
  std::string rep_records = "runs/records.json", rep_out = "runs";
  rep->add_option("--records", rep_records, "records.json from compare");
  rep->add_option("--out", rep_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    usw_scenario* scenario = nullptr;
    usw_status status = usw_scenario_generate(users, swarms, tuavs, seed,
                                              config.empty() ? nullptr : config.c_str(),
                                              &scenario);
    if (status != USW_OK) return bail(status);
    status = usw_scenario_save(scenario, out_path.c_str());
    usw_scenario_free(scenario);
    if (status != USW_OK) return bail(status);
    std::printf("wrote %s (%d GUs)\n", out_path.c_str(), users);
    return 0;
  }

  if (pre->parsed()) {
    usw_scenario* scenario = nullptr;
    usw_status status = usw_scenario_load(pre_scenario.c_str(), &scenario);
    if (status != USW_OK) return bail(status);
    char* report = nullptr;
    if (usw_scenario_validate(scenario, &report) == USW_OK && report && *report)
      std::fprintf(stderr, "scenario violations:\n%s", report);
    usw_string_free(report);
    usw_deployment* deployment = nullptr;
    status = usw_predeploy(scenario, &deployment);
    if (status == USW_OK) status = usw_deployment_save(deployment, pre_out.c_str());
    if (status == USW_OK) {
      const int count = usw_deployment_num_tuavs(deployment);
      int candidates = 0;
      for (int m = 0; m < count; ++m) candidates += usw_deployment_num_candidates(deployment, m);
      std::printf("wrote %s (%d T-UAVs, %d hover candidates)\n", pre_out.c_str(), count,
                  candidates);
    }
    usw_deployment_free(deployment);
    usw_scenario_free(scenario);
    return status == USW_OK ? 0 : bail(status);
  }

  if (opt->parsed()) return run_optimize(flags);

  if (cmp->parsed()) {
    std::ostringstream plan;
    plan << "{\"users\":" << json_array(cmp_users, false)
         << ",\"engines\":" << json_array(cmp_engines, true)
         << ",\"seeds\":" << json_array(cmp_seeds, false) << ",\"swarms\":" << cmp_swarms
         << ",\"tuavs\":" << cmp_tuavs << ",\"population\":" << cmp_population
         << ",\"iterations\":" << cmp_iterations << ",\"budget\":" << cmp_budget
         << ",\"threads\":" << cmp_threads;
    if (!cmp_config.empty()) plan << ",\"config\":\"" << cmp_config << "\"";
    plan << "}";
    const usw_status status = usw_run_compare(plan.str().c_str(), cmp_out.c_str());
    if (status != USW_OK) return bail(status);
    std::printf("wrote %s/{summary.csv,series.csv,records.json} and per-run files\n",
                cmp_out.c_str());
    return 0;
  }

  if (rep->parsed()) {
    const usw_status status = usw_write_report(rep_records.c_str(), rep_out.c_str());
    if (status != USW_OK) return bail(status);
    std::printf("wrote %s/report_{series,power_histogram,altitude,walltime}.csv\n",
                rep_out.c_str());
    return 0;
  }
  return 1;
}
