#include "harnacklab/harnacklab.h"

#include "capacity.hpp"
#include "config.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "model.hpp"
#include "montecarlo.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

struct hl_model {
  hl::ProcessModel model;
};

namespace {

thread_local std::string last_error;

char *copy_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hl_status fail(hl_status status, const char *message) {
  last_error = message;
  return status;
}

template <class F> hl_status guarded(F &&f) {
  try {
    last_error.clear();
    return f();
  } catch (const hl::ConfigError &e) {
    return fail(HL_CONFIG_ERROR, e.what());
  } catch (const hl::NumericalError &e) {
    return fail(HL_NUMERICAL_ERROR, e.what());
  } catch (const hl::DomainError &e) {
    return fail(HL_DOMAIN_ERROR, e.what());
  } catch (const hl::OutOfRangeError &e) {
    return fail(HL_OUT_OF_RANGE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(HL_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception &e) {
    return fail(HL_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(HL_INTERNAL_ERROR, "unknown error");
  }
}

hl_status null_argument(const char *name) {
  last_error = std::string("null argument: ") + name;
  return HL_INVALID_ARGUMENT;
}

hl::Point to_point(const hl_model *m, const double *p) {
  return hl::Point::from_span({p, static_cast<std::size_t>(m->model.dim())});
}

hl_status make_model(hl_model **out, hl::ProcessModel (*factory)(int, double), int dim, double a) {
  if (!out)
    return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new hl_model{factory(dim, a)};
    return HL_OK;
  });
}

} // namespace

extern "C" {

const char *hl_version(void) { return "1.0.0"; }

const char *hl_last_error(void) { return last_error.c_str(); }

const char *hl_status_name(hl_status status) {
  switch (status) {
  case HL_OK:
    return "ok";
  case HL_CHECK_FAILED:
    return "check failed";
  case HL_CONFIG_ERROR:
    return "config error";
  case HL_NUMERICAL_ERROR:
    return "numerical error";
  case HL_DOMAIN_ERROR:
    return "domain error";
  case HL_OUT_OF_RANGE:
    return "out of range";
  case HL_INVALID_ARGUMENT:
    return "invalid argument";
  case HL_INTERNAL_ERROR:
    return "internal error";
  }
  return "unknown status";
}

hl_status hl_model_stable(int dim, double alpha, hl_model **out) {
  return make_model(out, [](int d, double a) { return hl::ProcessModel::stable(d, a); }, dim, alpha);
}

hl_status hl_model_brownian(int dim, hl_model **out) {
  return make_model(out, [](int d, double) { return hl::ProcessModel::brownian(d); }, dim, 0.0);
}

hl_status hl_model_tabulated(int dim, const char *scale_file, hl_model **out) {
  if (!out)
    return null_argument("out");
  *out = nullptr;
  if (!scale_file)
    return null_argument("scale_file");
  return guarded([&] {
    *out = new hl_model{hl::ProcessModel::tabulated(dim, hl::load_scale_file(scale_file))};
    return HL_OK;
  });
}

void hl_model_free(hl_model *model) { delete model; }

int hl_model_dim(const hl_model *model) { return model ? model->model.dim() : 0; }

int hl_model_has_green(const hl_model *model) { return model && model->model.has_green() ? 1 : 0; }

hl_status hl_green(const hl_model *model, const double *x, const double *y, double *out) {
  if (!model || !x || !y || !out)
    return null_argument("model, x, y or out");
  return guarded([&] {
    *out = model->model.green(to_point(model, x), to_point(model, y));
    return HL_OK;
  });
}

hl_status hl_poisson_kernel(const hl_model *model, const double *center, double radius,
                            const double *x, const double *z, double *out) {
  if (!model || !center || !x || !z || !out)
    return null_argument("model, center, x, z or out");
  return guarded([&] {
    const hl::Ball ball(to_point(model, center), radius);
    *out = model->model.poisson_kernel(ball, to_point(model, x), to_point(model, z));
    return HL_OK;
  });
}

hl_status hl_ball_green(const hl_model *model, const double *center, double radius,
                        const double *x, const double *y, double *out) {
  if (!model || !center || !x || !y || !out)
    return null_argument("model, center, x, y or out");
  return guarded([&] {
    const hl::Ball ball(to_point(model, center), radius);
    *out = model->model.ball_green(ball, to_point(model, x), to_point(model, y));
    return HL_OK;
  });
}

hl_status hl_scale_value(const hl_model *model, double r, double *out) {
  if (!model || !out)
    return null_argument("model or out");
  return guarded([&] {
    if (!(r > 0.0))
      throw hl::DomainError("scale value needs r > 0");
    *out = model->model.scale()(r);
    return HL_OK;
  });
}

hl_status hl_scale_invert(const hl_model *model, double value, double *out) {
  if (!model || !out)
    return null_argument("model or out");
  return guarded([&] {
    *out = hl::invert(model->model.scale(), value);
    return HL_OK;
  });
}

hl_status hl_scale_verify(const hl_model *model, size_t *violations) {
  if (!model || !violations)
    return null_argument("model or violations");
  return guarded([&] {
    const hl::GreenScale &g = model->model.scale();
    *violations = hl::verify_scale(g, hl::default_grid(g)).violations.size();
    return HL_OK;
  });
}

hl_status hl_ball_capacity(const hl_model *model, const double *center, double radius,
                           int n_points, double c0, hl_capacity_result *out) {
  if (!model || !center || !out)
    return null_argument("model, center or out");
  return guarded([&] {
    const hl::CapacityResult r =
        hl::ball_capacity(model->model, hl::Ball(to_point(model, center), radius), n_points);
    const hl::CapacityBounds b = hl::capacity_bounds(model->model.scale(), radius, c0);
    *out = {r.capacity, r.duality_gap, r.slack, b.lower, b.upper, r.n_points};
    return HL_OK;
  });
}

hl_status hl_build_constants(const hl_model *model, double c0, double cJ, double R1,
                             hl_constants *out) {
  if (!model || !out)
    return null_argument("model or out");
  return guarded([&] {
    const hl::HarnackConstants k = hl::build_constants(model->model.scale(), c0, cJ, R1);
    *out = {k.eta, k.alpha, k.beta, k.gamma, k.kappa, k.j0, k.m0, k.m1, k.K};
    return HL_OK;
  });
}

hl_status hl_hitting_probability(const hl_model *model, const double *center, double target_radius,
                                 double domain_radius, const double *x, int64_t n, uint64_t seed,
                                 int threads, hl_estimate *out) {
  if (!model || !center || !x || !out)
    return null_argument("model, center, x or out");
  return guarded([&] {
    const hl::Point c = to_point(model, center);
    const hl::Ball target[] = {hl::Ball(c, target_radius)};
    hl::WosConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    const hl::HittingEstimate h = hl::hitting_probability(model->model, target,
                                                          hl::Ball(c, domain_radius),
                                                          to_point(model, x), n, cfg);
    *out = {h.estimate.mean, h.estimate.std_error, h.estimate.n, h.censored};
    return HL_OK;
  });
}

hl_status hl_run(const char *subcommand, const char *config_text, const char *source,
                 const hl_run_options *options, hl_run_output *out) {
  if (!subcommand || !config_text || !out)
    return null_argument("subcommand, config_text or out");
  *out = {nullptr, nullptr, nullptr, nullptr};
  return guarded([&] {
    const std::string src = source ? source : "<config>";
    hl::ExperimentConfig config = hl::parse_config(config_text, src);
    if (source) {
      config.base_dir = std::filesystem::path(source).parent_path().string();
      if (config.base_dir.empty())
        config.base_dir = ".";
    }
    if (options) {
      if (options->has_seed)
        config.mc.seed = options->seed;
      if (options->threads > 0)
        config.mc.threads = options->threads;
      if (options->format) {
        const std::string f = options->format;
        if (f != "json" && f != "csv")
          throw hl::ConfigError("format must be json or csv, got '" + f + "'");
        config.output.format = f;
      }
      if (options->out_path)
        config.output.path = options->out_path;
    }
    const hl::RunResult r = hl::run_experiment(subcommand, config);
    try {
      out->json = copy_string(r.json.dump(2) + "\n");
      if (!r.csv.empty())
        out->csv = copy_string(r.csv);
      out->format = copy_string(config.output.format);
      out->path = copy_string(config.output.path);
    } catch (...) {
      hl_run_output_free(out);
      throw;
    }
    return r.pass ? HL_OK : HL_CHECK_FAILED;
  });
}

void hl_run_output_free(hl_run_output *out) {
  if (!out)
    return;
  std::free(out->json);
  std::free(out->csv);
  std::free(out->format);
  std::free(out->path);
  *out = {nullptr, nullptr, nullptr, nullptr};
}

hl_status hl_default_config(char **out) {
  if (!out)
    return null_argument("out");
  return guarded([&] {
    *out = copy_string(hl::default_config_text());
    return HL_OK;
  });
}

void hl_string_free(char *s) { std::free(s); }

} // extern "C"
