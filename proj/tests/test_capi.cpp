#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include <doctest.h>

#include <uswarm/uswarm.h>

namespace fs = std::filesystem;

namespace {

std::string temp_file(const char* name) { return (fs::temp_directory_path() / name).string(); }

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("full pipeline through the shared-library interface") {
  usw_scenario* scenario = nullptr;
  REQUIRE(usw_scenario_generate(16, 2, 4, 7, nullptr, &scenario) == USW_OK);
  REQUIRE(scenario != nullptr);
  CHECK(usw_scenario_num_gus(scenario) == 16);

  char* report = nullptr;
  REQUIRE(usw_scenario_validate(scenario, &report) == USW_OK);
  CHECK(std::strlen(report) == 0);
  usw_string_free(report);

  const std::string scenario_path = temp_file("usw_capi_scenario.json");
  REQUIRE(usw_scenario_save(scenario, scenario_path.c_str()) == USW_OK);
  usw_scenario* loaded = nullptr;
  REQUIRE(usw_scenario_load(scenario_path.c_str(), &loaded) == USW_OK);
  CHECK(usw_scenario_num_gus(loaded) == 16);

  usw_deployment* deployment = nullptr;
  REQUIRE(usw_predeploy(loaded, &deployment) == USW_OK);
  const int num_tuavs = usw_deployment_num_tuavs(deployment);
  CHECK(num_tuavs == 4);
  int candidates = 0;
  for (int m = 0; m < num_tuavs; ++m) {
    const int c = usw_deployment_num_candidates(deployment, m);
    CHECK(c >= 0);
    candidates += c;
  }
  CHECK(candidates >= 3);
  CHECK(usw_deployment_num_candidates(deployment, 99) == -1);

  const std::string deployment_path = temp_file("usw_capi_deployment.json");
  REQUIRE(usw_deployment_save(deployment, deployment_path.c_str()) == USW_OK);

  usw_archive* archive = nullptr;
  const char* params = "{\"population\":12,\"iterations\":8,\"seed\":3,\"threads\":2}";
  REQUIRE(usw_optimize(loaded, deployment, "ins-woa", params, &archive) == USW_OK);
  const int size = usw_archive_size(archive);
  REQUIRE(size > 0);
  CHECK(usw_archive_evaluations(archive) > 0);

  double objectives[3] = {0, 0, 0};
  REQUIRE(usw_archive_objectives(archive, 0, objectives) == USW_OK);
  CHECK(objectives[0] > 0.0);
  CHECK(objectives[1] > 0.0);
  CHECK(objectives[2] > 0.0);
  double violation = -1.0;
  REQUIRE(usw_archive_violation(archive, 0, &violation) == USW_OK);
  CHECK(violation >= 0.0);

  int compromise = -1;
  REQUIRE(usw_archive_compromise(archive, &compromise) == USW_OK);
  CHECK(compromise >= 0);
  CHECK(compromise < size);

  // Hypervolume against a reference beyond every member.
  double ref[3] = {0, 0, 0};
  for (int i = 0; i < size; ++i) {
    double f[3];
    usw_archive_objectives(archive, i, f);
    for (int k = 0; k < 3; ++k) ref[k] = std::max(ref[k], f[k] * 1.1 + 1.0);
  }
  double hv = -1.0;
  REQUIRE(usw_archive_hypervolume(archive, ref, &hv) == USW_OK);
  CHECK(hv >= 0.0);

  const std::string archive_path = temp_file("usw_capi_archive.csv");
  const std::string traj_path = temp_file("usw_capi_traj.json");
  REQUIRE(usw_archive_export_csv(archive, archive_path.c_str()) == USW_OK);
  REQUIRE(usw_archive_export_trajectories(archive, traj_path.c_str()) == USW_OK);
  CHECK(fs::file_size(archive_path) > 0);
  CHECK(fs::file_size(traj_path) > 0);

  usw_archive_free(archive);
  usw_deployment_free(deployment);
  usw_scenario_free(loaded);
  usw_scenario_free(scenario);
  std::remove(scenario_path.c_str());
  std::remove(deployment_path.c_str());
  std::remove(archive_path.c_str());
  std::remove(traj_path.c_str());
}

TEST_CASE("error taxonomy and messages") {
  usw_scenario* scenario = nullptr;
  // 10 T-UAVs cannot split across 3 swarms of at most 3.
  CHECK(usw_scenario_generate(60, 3, 10, 1, nullptr, &scenario) == USW_ERR_CONFIG);
  CHECK(std::strlen(usw_last_error()) > 0);

  CHECK(usw_scenario_load("/nonexistent/uswarm.json", &scenario) != USW_OK);

  REQUIRE(usw_scenario_generate(12, 2, 3, 1, nullptr, &scenario) == USW_OK);
  usw_deployment* deployment = nullptr;
  REQUIRE(usw_predeploy(scenario, &deployment) == USW_OK);

  usw_archive* archive = nullptr;
  CHECK(usw_optimize(scenario, deployment, "gradient-descent", nullptr, &archive) ==
        USW_ERR_CONFIG);
  CHECK(std::string(usw_last_error()).find("engine") != std::string::npos);
  CHECK(usw_optimize(scenario, deployment, "ins-woa", "{not json", &archive) == USW_ERR_CONFIG);

  CHECK(usw_scenario_generate(12, 2, 3, 1, nullptr, nullptr) == USW_ERR_CONFIG);
  CHECK(usw_predeploy(nullptr, &deployment) == USW_ERR_CONFIG);

  usw_deployment_free(deployment);
  usw_scenario_free(scenario);
}

TEST_CASE("compare and report through the C surface") {
  const fs::path dir = fs::temp_directory_path() / "usw_capi_compare";
  fs::remove_all(dir);
  const char* plan =
      "{\"users\":[12],\"engines\":[\"ins-woa\",\"nsga2\"],\"seeds\":[1],"
      "\"swarms\":2,\"tuavs\":3,\"population\":12,\"iterations\":6,\"threads\":2}";
  REQUIRE(usw_run_compare(plan, dir.string().c_str()) == USW_OK);
  CHECK(fs::exists(dir / "records.json"));
  CHECK(fs::exists(dir / "summary.csv"));

  REQUIRE(usw_write_report((dir / "records.json").string().c_str(), dir.string().c_str()) ==
          USW_OK);
  CHECK(fs::exists(dir / "report_series.csv"));
  CHECK(fs::exists(dir / "report_power_histogram.csv"));
  CHECK(fs::exists(dir / "report_altitude.csv"));
  CHECK(fs::exists(dir / "report_walltime.csv"));
  fs::remove_all(dir);

  CHECK(usw_run_compare("{\"engines\":[]}", dir.string().c_str()) == USW_ERR_CONFIG);
  CHECK(usw_write_report("/nonexistent/records.json", dir.string().c_str()) != USW_OK);
}

TEST_CASE("version string present") {
  CHECK(usw_version() != nullptr);
  CHECK(std::strlen(usw_version()) > 0);
}

}  // TEST_SUITE
