#include "uswarm/uswarm.h"

#include <cstring>
#include <exception>
#include <string>

#include <json.hpp>

#include "harness.hpp"
#include "moo/nsga2.hpp"
#include "moo/woa.hpp"
#include "predeploy.hpp"
#include "scenario.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

usw_status fail(usw_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Translates the core exception taxonomy onto the C status codes.
usw_status guard(const std::exception& e) {
  if (dynamic_cast<const uswarm::InfeasibleError*>(&e))
    return fail(USW_ERR_INFEASIBLE, e.what());
  if (dynamic_cast<const uswarm::ParseError*>(&e)) return fail(USW_ERR_IO, e.what());
  if (dynamic_cast<const uswarm::ConfigError*>(&e)) return fail(USW_ERR_CONFIG, e.what());
  if (dynamic_cast<const std::invalid_argument*>(&e)) return fail(USW_ERR_CONFIG, e.what());
  return fail(USW_ERR_INTERNAL, e.what());
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct usw_scenario {
  uswarm::Scenario value;
};

struct usw_deployment {
  uswarm::Deployment value;
};

struct usw_archive {
  uswarm::ParetoArchive archive;
  uswarm::Deployment deployment;  // needed by the trajectory export
  std::string engine;
  std::uint64_t seed = 0;
  int users = 0;
  long evaluations = 0;
};

extern "C" {

const char* usw_version(void) { return "1.0.0"; }

const char* usw_last_error(void) { return g_last_error.c_str(); }

void usw_string_free(char* s) { delete[] s; }

usw_status usw_scenario_generate(int num_gus, int num_swarms, int num_tuavs, uint64_t seed,
                                 const char* config_path, usw_scenario** out) {
  if (!out) return fail(USW_ERR_CONFIG, "null output pointer");
  try {
    uswarm::GenerateOptions options;
    options.num_gus = num_gus;
    options.num_swarms = num_swarms;
    options.num_tuavs = num_tuavs;
    options.seed = seed;
    if (config_path && *config_path) uswarm::apply_config_file(options, config_path);
    *out = new usw_scenario{uswarm::generate_scenario(options)};
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_scenario_load(const char* path, usw_scenario** out) {
  if (!out || !path) return fail(USW_ERR_CONFIG, "null argument");
  try {
    *out = new usw_scenario{uswarm::load_scenario(path)};
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_scenario_save(const usw_scenario* scenario, const char* path) {
  if (!scenario || !path) return fail(USW_ERR_CONFIG, "null argument");
  try {
    uswarm::save_scenario(scenario->value, path);
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_scenario_validate(const usw_scenario* scenario, char** report) {
  if (!scenario || !report) return fail(USW_ERR_CONFIG, "null argument");
  try {
    const uswarm::FeasibilityNote note = uswarm::validate_scenario(scenario->value);
    std::string text;
    for (const std::string& v : note.violations) {
      text += v;
      text += '\n';
    }
    *report = copy_string(text);
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

int usw_scenario_num_gus(const usw_scenario* scenario) {
  return scenario ? static_cast<int>(scenario->value.gus.size()) : -1;
}

void usw_scenario_free(usw_scenario* scenario) { delete scenario; }

usw_status usw_predeploy(const usw_scenario* scenario, usw_deployment** out) {
  if (!scenario || !out) return fail(USW_ERR_CONFIG, "null argument");
  try {
    *out = new usw_deployment{uswarm::predeploy(scenario->value)};
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_deployment_load(const char* path, usw_deployment** out) {
  if (!out || !path) return fail(USW_ERR_CONFIG, "null argument");
  try {
    *out = new usw_deployment{uswarm::load_deployment(path)};
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_deployment_save(const usw_deployment* deployment, const char* path) {
  if (!deployment || !path) return fail(USW_ERR_CONFIG, "null argument");
  try {
    uswarm::save_deployment(deployment->value, path);
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

int usw_deployment_num_tuavs(const usw_deployment* deployment) {
  return deployment ? deployment->value.num_tuavs() : -1;
}

int usw_deployment_num_candidates(const usw_deployment* deployment, int tuav) {
  if (!deployment || tuav < 0 || tuav >= deployment->value.num_tuavs()) return -1;
  return static_cast<int>(deployment->value.tuavs[static_cast<std::size_t>(tuav)].candidates.size());
}

void usw_deployment_free(usw_deployment* deployment) { delete deployment; }

usw_status usw_optimize(const usw_scenario* scenario, const usw_deployment* deployment,
                        const char* engine, const char* params_json, usw_archive** out) {
  if (!scenario || !deployment || !engine || !out)
    return fail(USW_ERR_CONFIG, "null argument");
  try {
    uswarm::WoaParams params;
    if (params_json && *params_json) {
      json j;
      try {
        j = json::parse(params_json);
      } catch (const json::exception& e) {
        return fail(USW_ERR_CONFIG, (std::string("bad params_json: ") + e.what()).c_str());
      }
      params.population = j.value("population", params.population);
      params.iterations = j.value("iterations", params.iterations);
      params.seed = j.value("seed", params.seed);
      params.offset_radius = j.value("offset_radius", params.offset_radius);
      params.eval_budget = j.value("budget", params.eval_budget);
      params.threads = j.value("threads", params.threads);
      params.spiral_b = j.value("spiral_b", params.spiral_b);
    }

    uswarm::OptimizeResult result;
    const std::string name = engine;
    if (name == "ins-woa") {
      result = uswarm::ins_woa(scenario->value, deployment->value, params);
    } else if (name == "nsga2") {
      uswarm::Nsga2Params np;
      np.population = params.population;
      np.seed = params.seed;
      np.offset_radius = params.offset_radius;
      np.threads = params.threads;
      if (params.eval_budget > 0) {
        np.eval_budget = params.eval_budget;
      } else {
        long steps = 0;
        for (const auto& t : deployment->value.tuavs)
          steps += static_cast<long>(t.candidates.size());
        np.eval_budget =
            static_cast<long>(params.population) * steps * (params.iterations + 1) +
            params.population;
      }
      result = uswarm::nsga2(scenario->value, deployment->value, np);
    } else {
      return fail(USW_ERR_CONFIG, "unknown engine (expected ins-woa or nsga2)");
    }

    auto* handle = new usw_archive;
    handle->archive = std::move(result.archive);
    handle->deployment = deployment->value;
    handle->engine = name;
    handle->seed = params.seed;
    handle->users = static_cast<int>(scenario->value.gus.size());
    handle->evaluations = result.evaluations;
    *out = handle;
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

int usw_archive_size(const usw_archive* archive) {
  return archive ? static_cast<int>(archive->archive.members.size()) : -1;
}

long long usw_archive_evaluations(const usw_archive* archive) {
  return archive ? archive->evaluations : -1;
}

usw_status usw_archive_objectives(const usw_archive* archive, int index, double out_f[3]) {
  if (!archive || !out_f) return fail(USW_ERR_CONFIG, "null argument");
  if (index < 0 || static_cast<std::size_t>(index) >= archive->archive.members.size())
    return fail(USW_ERR_CONFIG, "archive index out of range");
  const uswarm::ObjectiveVector& o =
      archive->archive.members[static_cast<std::size_t>(index)].objectives;
  out_f[0] = o.teu_j;
  out_f[1] = o.aeg_j;
  out_f[2] = o.adg_s;
  return USW_OK;
}

usw_status usw_archive_violation(const usw_archive* archive, int index, double* out) {
  if (!archive || !out) return fail(USW_ERR_CONFIG, "null argument");
  if (index < 0 || static_cast<std::size_t>(index) >= archive->archive.members.size())
    return fail(USW_ERR_CONFIG, "archive index out of range");
  *out = archive->archive.members[static_cast<std::size_t>(index)].violation;
  return USW_OK;
}

usw_status usw_archive_compromise(const usw_archive* archive, int* index) {
  if (!archive || !index) return fail(USW_ERR_CONFIG, "null argument");
  try {
    std::vector<uswarm::ObjectiveVector> objectives;
    objectives.reserve(archive->archive.members.size());
    for (const auto& m : archive->archive.members) objectives.push_back(m.objectives);
    *index = uswarm::select_compromise(objectives);
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_archive_hypervolume(const usw_archive* archive, const double reference[3],
                                   double* out) {
  if (!archive || !reference || !out) return fail(USW_ERR_CONFIG, "null argument");
  try {
    std::vector<uswarm::ObjectiveVector> objectives;
    objectives.reserve(archive->archive.members.size());
    for (const auto& m : archive->archive.members) objectives.push_back(m.objectives);
    *out = uswarm::hypervolume(objectives, {reference[0], reference[1], reference[2]});
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_archive_export_csv(const usw_archive* archive, const char* path) {
  if (!archive || !path) return fail(USW_ERR_CONFIG, "null argument");
  try {
    uswarm::write_text_atomic(path, uswarm::archive_to_csv(archive->archive));
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_archive_export_trajectories(const usw_archive* archive, const char* path) {
  if (!archive || !path) return fail(USW_ERR_CONFIG, "null argument");
  try {
    uswarm::write_text_atomic(
        path, uswarm::trajectories_document(archive->engine, archive->seed, archive->users,
                                            archive->deployment, archive->archive));
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

void usw_archive_free(usw_archive* archive) { delete archive; }

usw_status usw_run_compare(const char* plan_json, const char* out_dir) {
  if (!plan_json || !out_dir) return fail(USW_ERR_CONFIG, "null argument");
  try {
    json j;
    try {
      j = json::parse(plan_json);
    } catch (const json::exception& e) {
      return fail(USW_ERR_CONFIG, (std::string("bad plan_json: ") + e.what()).c_str());
    }

    uswarm::ExperimentPlan plan;
    plan.out_dir = out_dir;
    if (j.contains("config")) {
      const std::string config = j.at("config").get<std::string>();
      if (!config.empty()) uswarm::apply_config_file(plan.base, config);
    }
    plan.user_counts = j.value("users", plan.user_counts);
    plan.engines = j.value("engines", std::vector<std::string>{"ins-woa", "nsga2"});
    for (const auto& s : j.value("seeds", std::vector<std::uint64_t>{1}))
      plan.seeds.push_back(s);
    plan.base.num_swarms = j.value("swarms", plan.base.num_swarms);
    plan.base.num_tuavs = j.value("tuavs", plan.base.num_tuavs);
    plan.woa.population = j.value("population", plan.woa.population);
    plan.woa.iterations = j.value("iterations", plan.woa.iterations);
    plan.woa.offset_radius = j.value("offset_radius", plan.woa.offset_radius);
    plan.woa.threads = j.value("threads", plan.woa.threads);
    plan.budget = j.value("budget", plan.budget);

    uswarm::run_plan(plan);
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

usw_status usw_write_report(const char* records_json, const char* out_dir) {
  if (!records_json || !out_dir) return fail(USW_ERR_CONFIG, "null argument");
  try {
    uswarm::write_report(records_json, out_dir);
    return USW_OK;
  } catch (const std::exception& e) {
    return guard(e);
  }
}

}  // extern "C"
