// Experiment runner. Each subcommand maps onto one run_* entry point; flags
// shared by several experiments live on every subcommand and the runner
// validates the subset it actually reads.
//
// Exit codes: 0 ok, 1 bad configuration, 2 self-test reported failure,
// 3 budget or numerical trouble while running.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadowbench/experiments.hpp"
#include "shadowbench/types.hpp"
#include "shadowbench/version.hpp"

namespace {

using shadowbench::ExperimentConfig;
using shadowbench::config_error;

long long parse_ll(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key " + key + " has a non-integer value: " + val);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key " + key + " has a non-integer value: " + val);
  }
}

double parse_d(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key " + key + " has a non-numeric value: " + val);
  }
}

bool parse_b(const std::string& key, const std::string& val) {
  if (val == "1" || val == "true" || val == "yes") return true;
  if (val == "0" || val == "false" || val == "no") return false;
  throw config_error("config key " + key + " has a non-boolean value: " + val);
}

std::vector<double> parse_list(const std::string& key, const std::string& val) {
  std::vector<double> out;
  std::istringstream in(val);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_d(key, item));
  return out;
}

/// File values fill in only the flags the command line left untouched.
void apply_config_file(ExperimentConfig& cfg, const CLI::App* sub, const std::string& path) {
  const auto kv = shadowbench::read_config_file(path);
  auto unset = [&](const std::string& flag) { return sub->count(flag) == 0; };
  for (const auto& [key, val] : kv) {
    if (key == "n") {
      if (unset("--n")) cfg.n = static_cast<int>(parse_ll(key, val));
    } else if (key == "d") {
      if (unset("--d")) cfg.d = static_cast<int>(parse_ll(key, val));
    } else if (key == "sigma") {
      if (unset("--sigma")) cfg.sigma = parse_d(key, val);
    } else if (key == "trials") {
      if (unset("--trials")) cfg.trials = parse_ll(key, val);
    } else if (key == "seed") {
      if (unset("--seed")) cfg.master_seed = parse_u64(key, val);
    } else if (key == "eps") {
      if (unset("--eps")) cfg.eps_list = parse_list(key, val);
    } else if (key == "t") {
      if (unset("--t")) cfg.t_list = parse_list(key, val);
    } else if (key == "ensemble") {
      if (unset("--ensemble")) cfg.ensemble = val;
    } else if (key == "random_plane") {
      if (unset("--random-plane")) cfg.random_plane = parse_b(key, val);
    } else if (key == "out") {
      if (unset("--out")) cfg.out_path = val;
    } else if (key == "centers") {
      if (unset("--centers")) cfg.centers_path = val;
    } else if (key == "threads") {
      if (unset("--threads")) cfg.threads = static_cast<int>(parse_ll(key, val));
    } else if (key == "epsilon") {
      if (unset("--epsilon")) cfg.epsilon = parse_d(key, val);
    } else if (key == "center_value") {
      if (unset("--center-value")) cfg.center_value = parse_d(key, val);
    } else if (key == "mode") {
      if (unset("--mode")) cfg.mode = val;
    } else if (key == "long_run") {
      if (unset("--long-run")) cfg.long_run = parse_b(key, val);
    } else if (key == "budget") {
      if (unset("--budget")) cfg.budget = parse_ll(key, val);
    } else {
      throw config_error("unknown config key: " + key);
    }
  }
}

struct SubState {
  CLI::App* sub = nullptr;
  std::string config_path;
};

SubState add_experiment(CLI::App& app, ExperimentConfig& cfg, const std::string& name,
                        const std::string& blurb) {
  SubState st;
  st.sub = app.add_subcommand(name, blurb);
  CLI::App* s = st.sub;
  s->add_option("--config", st.config_path, "key = value file; explicit flags win");
  s->add_option("--n", cfg.n, "instance count / matrix rows (0 = experiment default)");
  s->add_option("--d", cfg.d, "dimension / matrix columns (0 = experiment default)");
  s->add_option("--sigma", cfg.sigma, "noise level (0 = experiment default)");
  s->add_option("--trials", cfg.trials, "trial count (0 = experiment default)");
  s->add_option("--seed", cfg.master_seed, "master seed for all derived streams");
  s->add_option("--eps", cfg.eps_list, "tail thresholds")->delimiter(',');
  s->add_option("--t", cfg.t_list, "deviation levels")->delimiter(',');
  s->add_option("--ensemble", cfg.ensemble, "gaussian | rademacher | uniform");
  s->add_flag("--random-plane", cfg.random_plane, "draw a fresh section plane per trial");
  s->add_option("--out", cfg.out_path, "CSV path; a .manifest side file is written too");
  s->add_option("--centers", cfg.centers_path, "whitespace-separated center file, one row each");
  s->add_option("--threads", cfg.threads, "worker threads (output is thread-count invariant)");
  s->add_option("--epsilon", cfg.epsilon, "deformed-cube deformation in (0, 1/2)");
  s->add_option("--center-value", cfg.center_value, "constant added to every matrix entry");
  s->add_option("--mode", cfg.mode, "singularity: exact | mc | auto");
  s->add_flag("--long-run", cfg.long_run, "allow the slow exact case");
  s->add_option("--budget", cfg.budget, "pivot budget per walk (0 = default)");
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shadow-vertex simplex and random-matrix experiment runner"};
  app.set_version_flag("--version", shadowbench::kVersion);
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::vector<SubState> subs;
  subs.push_back(add_experiment(app, cfg, "section-size",
                                "edge count of a random planar section of a noisy polytope"));
  subs.push_back(add_experiment(app, cfg, "shadow-walk",
                                "rotation-path length on sign-flipped polytope programs"));
  subs.push_back(add_experiment(app, cfg, "km-cube",
                                "self-test: least-gain walk visits every deformed-cube vertex"));
  subs.push_back(add_experiment(app, cfg, "sv-tail",
                                "small singular values of square random matrices"));
  subs.push_back(add_experiment(app, cfg, "sv-bounds",
                                "extreme singular values of tall random matrices"));
  subs.push_back(add_experiment(app, cfg, "singularity",
                                "singularity of random sign matrices, exact or Monte Carlo"));
  subs.push_back(add_experiment(app, cfg, "submatrix-min",
                                "smallest singular value over all square row submatrices"));
  subs.push_back(add_experiment(app, cfg, "diameter",
                                "vertex-edge graph diameter of polar polytopes"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const SubState& st : subs) {
      if (!st.sub->parsed()) continue;
      cfg.experiment = st.sub->get_name();
      if (!st.config_path.empty()) apply_config_file(cfg, st.sub, st.config_path);
    }

    const auto t0 = std::chrono::steady_clock::now();
    const shadowbench::ExperimentReport rep = shadowbench::run_experiment(cfg);
    const double dur = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    shadowbench::write_outputs(cfg, rep, dur);
    std::cout << rep.summary;
    if (!cfg.out_path.empty())
      std::cout << "wrote " << cfg.out_path << " and " << cfg.out_path << ".manifest\n";
    return rep.pass ? 0 : 2;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const shadowbench::budget_error& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
