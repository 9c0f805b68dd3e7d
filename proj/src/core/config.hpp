#pragma once

#include "model.hpp"
#include "point.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hl {

struct ModelBlock {
  std::string kind = "stable";
  int dim = 3;
  double alpha = 1.0;
  std::string scale_file; // tabulated kind; relative to the config file
};

struct GeometryBlock {
  std::vector<double> x0; // defaults to the origin
  double R = 1.0;
};

struct McBlock {
  std::int64_t n = 100000;
  std::uint64_t seed = 42;
  std::int64_t max_steps = 10000;
  double boundary_shrink = 0.5;
  int threads = 1;
};

struct ConstantsBlock {
  std::optional<double> c0;
  std::optional<double> cJ;
  double R1 = kInfinity;
};

struct CapacityBlock {
  double radius = 1.0;
  int n_points = 4096;
};

struct SimulateBlock {
  double target_radius = 1.0;
  double domain_radius = 4.0;
  std::vector<double> start; // defaults to x0 + 2 e_1
  double r_small = 1.0;
  double r_large = 2.0;
  int bins = 10;
  double alpha_ratio = 1.0 / 16.0;
  int n_y = 64;
  int n_z = 256;
};

struct HarnackBlock {
  std::string family = "poles"; // poles | cells
  int count = 200;
  int grid_n = 4096;
};

struct ScaleBlock {
  double grid_lo = 0.0; // 0: default grid
  double grid_hi = 0.0;
  int grid_n = 256;
};

struct OutputBlock {
  std::string format = "json";
  std::string path;
};

struct ExperimentConfig {
  ModelBlock model;
  GeometryBlock geometry;
  McBlock mc;
  ConstantsBlock constants;
  CapacityBlock capacity;
  SimulateBlock simulate;
  HarnackBlock harnack;
  ScaleBlock scale;
  OutputBlock output;
  std::string source = "<config>";
  std::string base_dir = ".";

  ProcessModel make_model() const;
  Point origin() const; // x0
  Point start() const;
};

// INI text with the sections above. Errors are ConfigError with
// "source:line: message". A [model] section is required.
ExperimentConfig parse_config(const std::string &text, const std::string &source = "<config>");
ExperimentConfig load_config(const std::string &path);

// Documented defaults as INI text (the committed reference config).
std::string default_config_text();

} // namespace hl
