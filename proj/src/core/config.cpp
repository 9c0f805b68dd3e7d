#include "config.hpp"

#include "errors.hpp"
#include "scale.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hl {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model", {"kind", "d", "alpha", "scale_file"}},
    {"geometry", {"x0", "R"}},
    {"mc", {"n", "seed", "max_steps", "boundary_shrink", "threads"}},
    {"constants", {"c0", "cJ", "R1"}},
    {"capacity", {"radius", "n_points"}},
    {"simulate",
     {"target_radius", "domain_radius", "start", "r_small", "r_large", "bins", "alpha_ratio",
      "n_y", "n_z"}},
    {"harnack", {"family", "count", "grid_n"}},
    {"scale", {"grid_lo", "grid_hi", "grid_n"}},
    {"output", {"format", "path"}},
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

class Reader {
public:
  Reader(const std::string &text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    try {
      pt::read_ini(in, tree_);
    } catch (const pt::ini_parser_error &e) {
      throw ConfigError(source_ + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    // The property tree does not keep positions; recover them for messages.
    std::istringstream lines(text);
    std::string line, section;
    for (int no = 1; std::getline(lines, line); ++no) {
      line = trim(line);
      if (line.empty() || line[0] == ';' || line[0] == '#')
        continue;
      if (line.front() == '[') {
        section = trim(line.substr(1, line.find(']') - 1));
        where_[section] = no;
        sections_.insert(section);
      } else if (auto eq = line.find('='); eq != std::string::npos) {
        const std::string key = trim(line.substr(0, eq));
        if (section.empty())
          throw ConfigError(source_ + ":" + std::to_string(no) + ": key '" + key +
                            "' outside any section");
        where_[section + "." + key] = no;
      }
    }
    for (const auto &[name, body] : tree_) {
      const auto it = kSchema.find(name);
      if (it == kSchema.end())
        fail(name, "unknown section [" + name + "]");
      for (const auto &[key, value] : body)
        if (!it->second.count(key))
          fail(name + "." + key, "unknown key '" + key + "' in [" + name + "]");
    }
  }

  bool has_section(const std::string &s) const { return sections_.count(s) > 0; }

  std::optional<std::string> raw(const std::string &section, const std::string &key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
    if (!v)
      return std::nullopt;
    return trim(*v);
  }

  [[noreturn]] void fail(const std::string &path, const std::string &msg) const {
    const auto it = where_.find(path);
    const std::string line = it == where_.end() ? "" : ":" + std::to_string(it->second);
    throw ConfigError(source_ + line + ": " + msg);
  }

  template <class T> void get(const std::string &section, const std::string &key, T &out) const {
    const auto v = raw(section, key);
    if (!v)
      return;
    const std::string path = section + "." + key;
    if constexpr (std::is_same_v<T, std::string>) {
      out = *v;
    } else if constexpr (std::is_floating_point_v<T>) {
      if (*v == "inf" || *v == "infinity") {
        out = kInfinity;
        return;
      }
      std::size_t used = 0;
      try {
        out = std::stod(*v, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != v->size() || v->empty())
        fail(path, "'" + key + "' must be a number, got '" + *v + "'");
    } else {
      T value{};
      const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
      if (ec != std::errc() || ptr != v->data() + v->size()) {
        // Accept integral values written in exponent form, e.g. 1e5.
        std::size_t used = 0;
        double d = 0.0;
        try {
          d = std::stod(*v, &used);
        } catch (const std::exception &) {
          used = 0;
        }
        if (used != v->size() || d != std::floor(d) || d < 0.0 || d > 9.0e18)
          fail(path, "'" + key + "' must be an integer, got '" + *v + "'");
        value = static_cast<T>(d);
      }
      out = value;
    }
  }

  void get(const std::string &section, const std::string &key, std::optional<double> &out) const {
    if (raw(section, key)) {
      double v = 0.0;
      get(section, key, v);
      out = v;
    }
  }

  void get(const std::string &section, const std::string &key, std::vector<double> &out) const {
    const auto v = raw(section, key);
    if (!v)
      return;
    std::string s = *v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    out.clear();
    std::string tok;
    while (in >> tok) {
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(tok, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != tok.size())
        fail(section + "." + key, "'" + key + "' must be a list of numbers, got '" + *v + "'");
      out.push_back(d);
    }
  }

private:
  std::string source_;
  pt::ptree tree_;
  std::map<std::string, int> where_;
  std::set<std::string> sections_;
};

void require(const Reader &r, bool ok, const std::string &path, const std::string &msg) {
  if (!ok)
    r.fail(path, msg);
}

} // namespace

ExperimentConfig parse_config(const std::string &text, const std::string &source) {
  const Reader r(text, source);
  if (!r.has_section("model"))
    throw ConfigError(source + ": missing required section [model]");
  ExperimentConfig c;
  c.source = source;

  r.get("model", "kind", c.model.kind);
  r.get("model", "d", c.model.dim);
  r.get("model", "alpha", c.model.alpha);
  r.get("model", "scale_file", c.model.scale_file);
  require(r, c.model.kind == "stable" || c.model.kind == "brownian" || c.model.kind == "tabulated",
          "model.kind", "kind must be stable, brownian or tabulated");
  require(r, c.model.dim >= 1 && c.model.dim <= kMaxDim, "model.d",
          "d must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (c.model.kind == "stable")
    require(r, c.model.alpha > 0.0 && c.model.alpha < 2.0, "model.alpha", "alpha must lie in (0, 2)");
  if (c.model.kind == "brownian")
    require(r, c.model.dim >= 3, "model.d", "Brownian models need d >= 3");
  if (c.model.kind == "tabulated")
    require(r, !c.model.scale_file.empty(), "model.kind", "tabulated models need scale_file");

  r.get("geometry", "x0", c.geometry.x0);
  r.get("geometry", "R", c.geometry.R);
  if (c.geometry.x0.empty())
    c.geometry.x0.assign(static_cast<std::size_t>(c.model.dim), 0.0);
  require(r, static_cast<int>(c.geometry.x0.size()) == c.model.dim, "geometry.x0",
          "x0 needs " + std::to_string(c.model.dim) + " coordinates");
  require(r, c.geometry.R > 0.0 && std::isfinite(c.geometry.R), "geometry.R", "R must be positive");

  r.get("mc", "n", c.mc.n);
  r.get("mc", "seed", c.mc.seed);
  r.get("mc", "max_steps", c.mc.max_steps);
  r.get("mc", "boundary_shrink", c.mc.boundary_shrink);
  r.get("mc", "threads", c.mc.threads);
  require(r, c.mc.n >= 1, "mc.n", "n must be >= 1");
  require(r, c.mc.max_steps >= 1, "mc.max_steps", "max_steps must be >= 1");
  require(r, c.mc.boundary_shrink > 0.0 && c.mc.boundary_shrink < 1.0, "mc.boundary_shrink",
          "boundary_shrink must lie in (0, 1)");
  require(r, c.mc.threads >= 1, "mc.threads", "threads must be >= 1");

  r.get("constants", "c0", c.constants.c0);
  r.get("constants", "cJ", c.constants.cJ);
  r.get("constants", "R1", c.constants.R1);
  if (c.constants.c0)
    require(r, *c.constants.c0 >= 1.0, "constants.c0", "c0 must be >= 1");
  if (c.constants.cJ)
    require(r, *c.constants.cJ > 0.0, "constants.cJ", "cJ must be > 0");
  require(r, c.constants.R1 > 0.0, "constants.R1", "R1 must be > 0");

  r.get("capacity", "radius", c.capacity.radius);
  r.get("capacity", "n_points", c.capacity.n_points);
  require(r, c.capacity.radius > 0.0, "capacity.radius", "radius must be > 0");
  require(r, c.capacity.n_points >= 8 && c.capacity.n_points <= 20000, "capacity.n_points",
          "n_points must lie in [8, 20000]");

  auto &s = c.simulate;
  r.get("simulate", "target_radius", s.target_radius);
  r.get("simulate", "domain_radius", s.domain_radius);
  r.get("simulate", "start", s.start);
  r.get("simulate", "r_small", s.r_small);
  r.get("simulate", "r_large", s.r_large);
  r.get("simulate", "bins", s.bins);
  r.get("simulate", "alpha_ratio", s.alpha_ratio);
  r.get("simulate", "n_y", s.n_y);
  r.get("simulate", "n_z", s.n_z);
  require(r, s.target_radius > 0.0 && s.target_radius < s.domain_radius, "simulate.target_radius",
          "need 0 < target_radius < domain_radius");
  if (s.start.empty()) {
    s.start = c.geometry.x0;
    s.start[0] += 0.5 * (s.target_radius + s.domain_radius);
  }
  require(r, static_cast<int>(s.start.size()) == c.model.dim, "simulate.start",
          "start needs " + std::to_string(c.model.dim) + " coordinates");
  require(r, s.r_small > 0.0 && s.r_small <= s.r_large, "simulate.r_small",
          "need 0 < r_small <= r_large");
  require(r, s.bins >= 1, "simulate.bins", "bins must be >= 1");
  require(r, s.alpha_ratio > 0.0 && s.alpha_ratio < 1.0, "simulate.alpha_ratio",
          "alpha_ratio must lie in (0, 1)");
  require(r, s.n_y >= 2 && s.n_z >= 2, "simulate.n_y", "n_y and n_z must be >= 2");

  r.get("harnack", "family", c.harnack.family);
  r.get("harnack", "count", c.harnack.count);
  r.get("harnack", "grid_n", c.harnack.grid_n);
  require(r, c.harnack.family == "poles" || c.harnack.family == "cells", "harnack.family",
          "family must be poles or cells");
  require(r, c.harnack.count >= 1, "harnack.count", "count must be >= 1");
  require(r, c.harnack.grid_n >= 1, "harnack.grid_n", "grid_n must be >= 1");

  r.get("scale", "grid_lo", c.scale.grid_lo);
  r.get("scale", "grid_hi", c.scale.grid_hi);
  r.get("scale", "grid_n", c.scale.grid_n);
  require(r, c.scale.grid_n >= 2, "scale.grid_n", "grid_n must be >= 2");
  require(r, c.scale.grid_lo >= 0.0 && (c.scale.grid_lo == 0.0 || c.scale.grid_lo < c.scale.grid_hi),
          "scale.grid_lo", "need 0 < grid_lo < grid_hi (or both 0 for the default grid)");

  r.get("output", "format", c.output.format);
  r.get("output", "path", c.output.path);
  require(r, c.output.format == "json" || c.output.format == "csv", "output.format",
          "format must be json or csv");
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig c = parse_config(buf.str(), path);
  c.base_dir = std::filesystem::path(path).parent_path().string();
  if (c.base_dir.empty())
    c.base_dir = ".";
  return c;
}

ProcessModel ExperimentConfig::make_model() const {
  if (model.kind == "brownian")
    return ProcessModel::brownian(model.dim);
  if (model.kind == "stable")
    return ProcessModel::stable(model.dim, model.alpha);
  std::filesystem::path p(model.scale_file);
  if (p.is_relative())
    p = std::filesystem::path(base_dir) / p;
  if (!std::filesystem::exists(p))
    throw ConfigError(source + ": scale_file '" + p.string() + "' does not exist");
  return ProcessModel::tabulated(model.dim, load_scale_file(p.string()));
}

Point ExperimentConfig::origin() const { return Point::from_span(geometry.x0); }

Point ExperimentConfig::start() const { return Point::from_span(simulate.start); }

std::string default_config_text() {
  return R"(# Reference configuration. Every key is optional except [model].

[model]
# stable | brownian | tabulated
kind = stable
d = 3
alpha = 1
# tabulated only: two-column "radius value" file, relative to this file
# scale_file = scale.txt

[geometry]
# centre x0 (default: origin) and radius R
x0 = 0, 0, 0
R = 1

[mc]
n = 100000
seed = 42
max_steps = 10000
boundary_shrink = 0.5
threads = 1

[constants]
# c0 defaults to c * C_G, cJ to the measured jump comparison constant
# c0 = 3
# cJ = 16
R1 = inf

[capacity]
radius = 1
n_points = 4096

[simulate]
target_radius = 1
domain_radius = 4
# start defaults to x0 + (target_radius + domain_radius) / 2 e_1
start = 2, 0, 0
r_small = 1
r_large = 2
bins = 10
alpha_ratio = 0.0625
n_y = 64
n_z = 256

[harnack]
# poles | cells
family = poles
count = 200
grid_n = 4096

[scale]
# verification grid; 0 selects 256 log-spaced radii below R0
grid_lo = 0
grid_hi = 0
grid_n = 256

[output]
# json | csv
format = json
path =
)";
}

} // namespace hl
