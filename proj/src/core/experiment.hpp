#pragma once

#include "config.hpp"
#include "constants.hpp"
#include "model.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hl {

using Json = nlohmann::ordered_json;

struct RunResult {
  Json json;
  std::string csv; // empty when the subcommand has no table
  bool pass = false;
};

// Subcommands: check-scale, capacity, constants, simulate-hit, simulate-exit,
// simulate-itbal, simulate-cj, harnack, report. "simulate hit" etc. are
// accepted as well. Throws ConfigError for unknown subcommands.
RunResult run_experiment(const std::string &subcommand, const ExperimentConfig &config);

std::vector<std::string> subcommands();

// Non-finite numbers become the strings "inf", "-inf", "nan".
Json number(double x);
Json point_json(const Point &p);

// c0 from the config or c * C_G; cJ from the config or the measured jump
// comparison constant at the pipeline's alpha (1 for Brownian motion).
struct ResolvedConstants {
  HarnackConstants constants;
  double C_G = 0.0;
  bool c0_measured = false;
  bool cJ_measured = false;
};

ResolvedConstants resolve_constants(const ExperimentConfig &config, const ProcessModel &model);

Json constants_json(const HarnackConstants &k);

} // namespace hl
