#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moo/nsga2.hpp"
#include "moo/woa.hpp"
#include "predeploy.hpp"
#include "scenario.hpp"

namespace uswarm {

struct ExperimentPlan {
  GenerateOptions base;             // parameters shared by every scenario in the sweep
  std::vector<int> user_counts;     // GU sweep; empty means {base.num_gus}
  std::vector<std::string> engines; // subset of {"ins-woa", "nsga2"}
  std::vector<std::uint64_t> seeds;
  WoaParams woa;                    // population/iterations/offset/threads
  long budget = 0;                  // evaluation cap; 0 derives it from the WOA settings
  std::string out_dir;
};

struct ArchiveSummary {
  ObjectiveVector min_objectives;
  ObjectiveVector median_objectives;
  double hypervolume = 0.0;  // self-normalized, reference (1.1, 1.1, 1.1)
  int size = 0;
};

struct RunRecord {
  std::string engine;
  std::uint64_t seed = 0;
  int users = 0;
  double wall_s = 0.0;
  long evaluations = 0;
  long budget = 0;
  ArchiveSummary summary;
  ObjectiveVector compromise;
  int compromise_index = -1;
  std::string scenario_file;
  std::string deployment_file;
  std::string archive_csv;
  std::string trajectories_json;
};

// Index of the compromise member: min-max normalize each objective over the
// archive to [0, 1] (a spread-less objective contributes 0) and take the
// argmin of the normalized sum, lowest index on ties.
int select_compromise(std::span<const ObjectiveVector> objectives);

// Hypervolume of the archive after per-objective min-max normalization over
// its own members, against reference (1.1, 1.1, 1.1).
double normalized_hypervolume(std::span<const ObjectiveVector> objectives);

// Executes every (scenario, engine, seed) cell: generate, predeploy, optimize,
// export. Writes per-run archive/trajectory files (byte-stable across reruns),
// summary.csv, series.csv and records.json into plan.out_dir. When both
// engines run, NSGA-II receives exactly the evaluation budget INS-WOA spent.
std::vector<RunRecord> run_plan(const ExperimentPlan& plan);

// Emits the figure-data files from a finished run directory: objective-vs-U
// series, GU power histograms and mean hover altitudes of the extreme and
// compromise archive members, and wall-time-vs-U.
void write_report(const std::string& records_json, const std::string& out_dir);

// Archive export shared by the harness and the C API.
std::string archive_to_csv(const ParetoArchive& archive);
std::string trajectories_document(const std::string& engine, std::uint64_t seed, int users,
                                  const Deployment& deployment, const ParetoArchive& archive);
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace uswarm
