#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shadowbench/stats.hpp"
#include "shadowbench/types.hpp"

namespace shadowbench {

/// One flat bag of parameters for every experiment; each runner validates
/// the subset it reads and rejects out-of-range values with config_error.
struct ExperimentConfig {
  std::string experiment;
  int n = 0;
  int d = 0;
  double sigma = 0.0;
  long long trials = 0;
  std::uint64_t master_seed = 1;
  std::vector<double> eps_list;
  std::vector<double> t_list;
  std::string ensemble = "gaussian";
  bool random_plane = false;
  std::string out_path;
  std::string centers_path;  // optional center file for polytope samplers
  int threads = 1;
  double epsilon = 1.0 / 3.0;  // deformed-cube deformation
  double center_value = 0.0;   // constant shift added to matrix entries
  std::string mode = "auto";   // singularity: exact | mc | auto
  bool long_run = false;       // allows exact singularity at n = 5
  long long budget = 0;        // walk pivot budget; 0 = per-operation default
};

struct ExperimentReport {
  TrialStats stats;     // primary per-experiment statistic
  std::string csv;      // header + rows; byte-identical across thread counts
  std::string summary;  // human-readable lines, embedded in the manifest too
  std::map<std::string, double> metrics;  // named summary values
  bool pass = true;     // self-test commands clear this on failure
  ExperimentConfig resolved;  // config with defaults filled in, as actually run
};

ExperimentReport run_section_size(const ExperimentConfig& cfg);
ExperimentReport run_shadow_walk(const ExperimentConfig& cfg);
ExperimentReport run_km(const ExperimentConfig& cfg);
ExperimentReport run_sv_tail(const ExperimentConfig& cfg);
ExperimentReport run_sv_bounds(const ExperimentConfig& cfg);
ExperimentReport run_singularity(const ExperimentConfig& cfg);
ExperimentReport run_submatrix_min(const ExperimentConfig& cfg);
ExperimentReport run_diameter(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment; unknown name -> config_error.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Flat `key = value` file, '#' comments, blank lines ignored.
std::map<std::string, std::string> read_config_file(const std::string& path);

std::string manifest_text(const ExperimentConfig& cfg, const ExperimentReport& rep,
                          double duration_seconds);

/// Writes cfg.out_path and cfg.out_path + ".manifest" (no-op when unset).
void write_outputs(const ExperimentConfig& cfg, const ExperimentReport& rep,
                   double duration_seconds);

}  // namespace shadowbench
