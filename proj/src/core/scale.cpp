#include "scale.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace hl {

namespace {

constexpr int kDyadicRange = 100;
constexpr int kBracketSteps = 2000;

double checked_value(const GreenScale &scale, double r) {
  const double v = scale(r);
  if (!std::isfinite(v) || std::isnan(v))
    throw DomainError("scale '" + scale.label + "' is not finite at r = " + std::to_string(r));
  return v;
}

std::string format_interval(double lo, double hi) {
  std::ostringstream os;
  os.precision(10);
  os << '[' << lo << ", " << hi << ']';
  return os.str();
}

} // namespace

GreenScale power_law_scale(double amplitude, double exponent, std::string label) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw ConfigError("power-law amplitude must be positive and finite");
  if (!(exponent > 0.0))
    throw ConfigError("power-law exponent must be positive");
  GreenScale s;
  s.evaluator = [amplitude, exponent](double r) { return amplitude * std::pow(r, -exponent); };
  s.cD = std::exp2(exponent);
  s.alpha0 = 0.5;
  s.eta0 = std::exp2(-exponent);
  s.c = 1.0;
  s.continuous = true;
  s.label = label.empty() ? "power law r^-" + std::to_string(exponent) : std::move(label);
  return s;
}

GreenScale tabulated_scale(std::vector<double> radii, std::vector<double> values,
                           std::string label) {
  if (radii.size() < 2 || radii.size() != values.size())
    throw ConfigError("scale table needs at least two (radius, value) rows");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i]))
      throw ConfigError("scale table row " + std::to_string(i + 1) +
                        ": radius and value must be positive and finite");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw ConfigError("scale table row " + std::to_string(i + 1) +
                        ": radii must be strictly increasing");
    if (i > 0 && values[i] > values[i - 1])
      throw ConfigError("scale table row " + std::to_string(i + 1) + ": values must decrease");
  }
  auto lr = std::make_shared<std::vector<double>>();
  auto lv = std::make_shared<std::vector<double>>();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    lr->push_back(std::log(radii[i]));
    lv->push_back(std::log(values[i]));
  }
  GreenScale s;
  s.evaluator = [lr, lv](double r) {
    const double x = std::log(r);
    const auto &R = *lr;
    const auto &V = *lv;
    if (x >= R.back())
      return std::exp(V.back());
    std::size_t k = 0;
    if (x > R.front())
      k = static_cast<std::size_t>(std::upper_bound(R.begin(), R.end(), x) - R.begin()) - 1;
    const double t = (x - R[k]) / (R[k + 1] - R[k]);
    return std::exp(V[k] + t * (V[k + 1] - V[k]));
  };
  s.R0 = radii.back();
  s.c = 1.0;
  s.alpha0 = 0.5;
  s.continuous = true;
  s.label = label.empty() ? "tabulated" : std::move(label);

  // Constants measured on a grid reaching below the table.
  const auto grid = log_grid(radii.front() / 1024.0, radii.back() * (1.0 - 1e-12), 512);
  double cd = 1.0, eta = 0.0;
  for (double r : grid) {
    const double ratio = s(r / 2.0) / s(r);
    cd = std::max(cd, ratio);
    eta = std::max(eta, 1.0 / ratio);
  }
  s.cD = cd;
  s.eta0 = eta;
  if (!(cd > 1.0) || !(eta < 1.0))
    throw ConfigError("scale table '" + s.label +
                      "' has no doubling/decay constants (values do not grow towards 0)");
  return s;
}

GreenScale parse_scale_table(std::istream &in, const std::string &source) {
  std::vector<double> radii, values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    double r = 0.0, v = 0.0;
    if (!(ls >> r)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'radius value'");
    }
    std::string extra;
    if (!(ls >> v) || (ls >> extra))
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected two columns");
    if (!(r > 0.0) || !(v > 0.0) || !std::isfinite(v))
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": radius and value must be positive");
    if (!radii.empty() && !(r > radii.back()))
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": radii must be strictly increasing");
    if (!values.empty() && v > values.back())
      throw ConfigError(source + ":" + std::to_string(lineno) + ": values must decrease");
    radii.push_back(r);
    values.push_back(v);
  }
  if (radii.size() < 2)
    throw ConfigError(source + ": scale table needs at least two rows");
  return tabulated_scale(std::move(radii), std::move(values), source);
}

GreenScale load_scale_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open scale file '" + path + "'");
  return parse_scale_table(in, path);
}

std::string to_string(ScaleInvariant inv) {
  switch (inv) {
  case ScaleInvariant::Decreasing:
    return "decreasing";
  case ScaleInvariant::Doubling:
    return "doubling";
  case ScaleInvariant::Decay:
    return "decay";
  case ScaleInvariant::SingularAtZero:
    return "singular_at_zero";
  }
  return "unknown";
}

std::size_t ValidationReport::count(ScaleInvariant inv) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(),
      [inv](const ScaleViolation &v) { return v.invariant == inv; }));
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1)
    throw ConfigError("log grid needs 0 < lo <= hi and n >= 1");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

std::vector<double> default_grid(const GreenScale &scale) {
  const double top = std::isinf(scale.R0) ? 1.0 : scale.R0;
  return log_grid(top * std::exp2(-20.0), top * (1.0 - 1e-9), 256);
}

ValidationReport verify_scale(const GreenScale &scale, std::span<const double> grid) {
  if (grid.empty())
    throw ConfigError("verify_scale needs a nonempty grid");
  std::vector<double> radii(grid.begin(), grid.end());
  std::sort(radii.begin(), radii.end());
  if (!(radii.front() > 0.0) || !(radii.back() < scale.R0))
    throw ConfigError("verify_scale grid radii must lie in (0, R0)");

  ValidationReport report;
  report.grid_size = radii.size();
  std::vector<double> values(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    values[i] = checked_value(scale, radii[i]);

  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const double g = values[i];
    if (i + 1 < radii.size() && values[i + 1] > g)
      report.violations.push_back({ScaleInvariant::Decreasing, r, values[i + 1], g});
    const double half = checked_value(scale, r / 2.0);
    if (half > scale.cD * g * (1.0 + kScaleCheckTolerance))
      report.violations.push_back({ScaleInvariant::Doubling, r, half, scale.cD * g});
    const double shrunk = checked_value(scale, scale.alpha0 * r);
    if (g > scale.eta0 * shrunk * (1.0 + kScaleCheckTolerance))
      report.violations.push_back({ScaleInvariant::Decay, r, g, scale.eta0 * shrunk});
  }

  // g must be unbounded near 0: every level M = 10^k g(r_min) is exceeded
  // somewhere below the grid.
  const double base = values.front();
  for (int k = 1; k <= 6; ++k) {
    const double level = base * std::pow(10.0, k);
    bool exceeded = false;
    double r = radii.front();
    for (int step = 0; step < 1000 && r > 0.0; ++step, r *= 0.5) {
      const double v = scale(r);
      if (std::isnan(v))
        break;
      if (v > level) {
        exceeded = true;
        break;
      }
    }
    if (!exceeded) {
      report.violations.push_back({ScaleInvariant::SingularAtZero, radii.front(), base, level});
      break;
    }
  }
  return report;
}

double measured_doubling_constant(const GreenScale &scale, std::span<const double> grid) {
  double cd = 0.0;
  for (double r : grid)
    cd = std::max(cd, checked_value(scale, r / 2.0) / checked_value(scale, r));
  return cd;
}

DecayChoice decay_alpha(const GreenScale &scale, double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    throw ConfigError("decay_alpha needs 0 < eta < 1");
  if (!(scale.eta0 > 0.0 && scale.eta0 < 1.0) || !(scale.alpha0 > 0.0 && scale.alpha0 < 1.0))
    throw ConfigError("scale decay constants must lie in (0, 1)");
  int m = 1;
  double eta_m = scale.eta0;
  double alpha = scale.alpha0;
  while (eta_m > eta) {
    eta_m *= scale.eta0;
    alpha *= scale.alpha0;
    ++m;
  }
  return {m, alpha};
}

GreenScale regularize(const GreenScale &scale) {
  GreenScale out = scale;
  const GreenScale base = scale;
  if (std::isinf(scale.R0)) {
    out.evaluator = [base](double r) {
      int e = 0;
      std::frexp(r, &e); // r in [2^(e-1), 2^e)
      const int n = e - 1;
      if (n < -kDyadicRange || n >= kDyadicRange)
        return base(r);
      const double lo = std::ldexp(1.0, n);
      const double hi = std::ldexp(1.0, n + 1);
      const double t = (r - lo) / (hi - lo);
      return (1.0 - t) * base(lo) + t * base(hi);
    };
  } else {
    const double R0 = scale.R0;
    out.evaluator = [base, R0](double r) {
      auto node = [&](int n) {
        return n == 0 ? base(std::nextafter(R0, 0.0)) : base(std::ldexp(R0, -n));
      };
      if (r >= R0)
        return node(0);
      // r in [R0 2^-(n+1), R0 2^-n)
      const int n = static_cast<int>(std::floor(-std::log2(r / R0)));
      if (n >= kDyadicRange)
        return base(r);
      const double hi = std::ldexp(R0, -n);
      const double lo = std::ldexp(R0, -(n + 1));
      const double t = (r - lo) / (hi - lo);
      return (1.0 - t) * node(n + 1) + t * node(n);
    };
  }
  out.continuous = true;
  out.label = scale.label + " (regularized)";
  return out;
}

double invert(const GreenScale &scale, double v, double rel_tol) {
  if (!scale.continuous)
    throw DomainError("invert needs a continuous scale; regularize '" + scale.label + "' first");
  if (!(v > 0.0) || !std::isfinite(v))
    throw OutOfRangeError("invert: target value must be positive and finite");

  const bool bounded = std::isfinite(scale.R0);
  const double top = bounded ? scale.R0 * (1.0 - 1e-15) : 0.0;
  double lo = bounded ? std::min(1.0, scale.R0 / 2.0) : 1.0;
  double hi = lo;

  // Bracket: g(lo) >= v >= g(hi).
  int steps = 0;
  while (scale(lo) < v) {
    lo *= 0.5;
    if (++steps > kBracketSteps || lo == 0.0)
      throw OutOfRangeError("invert: value " + std::to_string(v) +
                            " exceeds the attainable interval " +
                            format_interval(bounded ? scale(top) : 0.0, scale(std::ldexp(1.0, -1000))));
  }
  steps = 0;
  while (scale(hi) > v) {
    if (bounded) {
      if (hi >= top) {
        throw OutOfRangeError("invert: value " + std::to_string(v) +
                              " is below the attainable interval " +
                              format_interval(scale(top), scale(std::ldexp(lo, -1000))));
      }
      hi = std::min(hi * 2.0, top);
    } else {
      hi *= 2.0;
      if (++steps > kBracketSteps || std::isinf(hi))
        throw OutOfRangeError("invert: value " + std::to_string(v) +
                              " is below the attainable interval " +
                              format_interval(0.0, scale(std::ldexp(1.0, -1000))));
    }
  }

  double a = lo, b = hi;
  for (int it = 0; it < kInvertMaxIterations; ++it) {
    const double mid = std::sqrt(a) * std::sqrt(b);
    const double gm = scale(mid);
    if (std::abs(gm - v) <= rel_tol * v)
      return mid;
    if (gm > v)
      a = mid;
    else
      b = mid;
  }
  for (double r : {a, b})
    if (std::abs(scale(r) - v) <= rel_tol * v)
      return r;
  throw NumericalError("invert: bisection did not reach tolerance for value " + std::to_string(v) +
                       " (scale may be discontinuous)");
}

} // namespace hl
