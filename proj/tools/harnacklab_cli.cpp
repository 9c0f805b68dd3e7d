#include "harnacklab/harnacklab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum ExitCode { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

int exit_code(hl_status s) {
  switch (s) {
  case HL_OK:
    return kPass;
  case HL_CHECK_FAILED:
    return kCheckFailed;
  case HL_CONFIG_ERROR:
  case HL_DOMAIN_ERROR:
  case HL_OUT_OF_RANGE:
  case HL_INVALID_ARGUMENT:
    return kConfigError;
  case HL_NUMERICAL_ERROR:
  case HL_INTERNAL_ERROR:
    return kNumericalError;
  }
  return kNumericalError;
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  std::string format;
};

std::string reference_config() {
  char *text = nullptr;
  if (hl_default_config(&text) != HL_OK)
    return {};
  std::string s = text;
  hl_string_free(text);
  return s;
}

bool write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

int run(const std::string &subcommand, const Options &o) {
  std::string text;
  std::string source;
  if (o.config.empty()) {
    if (subcommand != "report") {
      std::cerr << "error: --config is required for " << subcommand << "\n";
      return kConfigError;
    }
    text = reference_config();
    source = "<reference config>";
  } else {
    std::ifstream in(o.config, std::ios::binary);
    if (!in) {
      std::cerr << "error: " << o.config << ": cannot open config file\n";
      return kConfigError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    source = o.config;
  }

  hl_run_options opts{};
  opts.has_seed = o.seed.has_value() ? 1 : 0;
  opts.seed = o.seed.value_or(0);
  opts.threads = o.threads;
  opts.format = o.format.empty() ? nullptr : o.format.c_str();
  opts.out_path = o.out.empty() ? nullptr : o.out.c_str();

  hl_run_output out{};
  const hl_status s = hl_run(subcommand.c_str(), text.c_str(), source.c_str(), &opts, &out);
  if (s != HL_OK && s != HL_CHECK_FAILED) {
    std::cerr << "error (" << hl_status_name(s) << "): " << hl_last_error() << "\n";
    return exit_code(s);
  }
  const std::string format = out.format;
  const std::string path = out.path;
  bool ok = true;
  if (format == "csv" && out.csv) {
    ok = write_text(path, out.csv);
    if (!path.empty())
      ok = ok && write_text("", out.json);
  } else {
    if (format == "csv")
      std::cerr << "note: " << subcommand << " has no table; writing JSON\n";
    ok = write_text(path, out.json);
  }
  hl_run_output_free(&out);
  if (!ok)
    return kConfigError;
  if (s == HL_CHECK_FAILED)
    std::cerr << subcommand << ": checks failed\n";
  return exit_code(s);
}

void add_common(CLI::App *app, Options &o) {
  app->add_option("--config", o.config, "INI experiment config")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "Override [mc] seed");
  app->add_option("--threads", o.threads, "Override [mc] threads")->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "Output file (default: [output] path, else stdout)");
  app->add_option("--format", o.format, "json | csv (default: [output] format)")
      ->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Numerical checks for scale-invariant Harnack inequalities"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 all checks pass, 1 a check failed, 2 config error, 3 numerical "
             "error.\n\nReference configuration with every default:\n\n" +
             reference_config());
  app.set_version_flag("--version", std::string(hl_version()));

  Options o;
  std::string selected;
  auto plain = [&](const char *name, const char *help) {
    CLI::App *sub = app.add_subcommand(name, help);
    add_common(sub, o);
    sub->callback([&selected, name] { selected = name; });
  };
  plain("check-scale", "Verify the scale invariants on a radius grid");
  plain("capacity", "Equilibrium LP capacity of a ball with the two-sided bounds");
  plain("constants", "Harnack constant pipeline and the sum of radii check");
  plain("harnack", "sup/inf ratios of a harmonic family against K");
  plain("report", "Full acceptance matrix");

  CLI::App *sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  sim->require_subcommand(1);
  for (const char *kind : {"hit", "exit", "itbal", "cj"}) {
    CLI::App *sub = sim->add_subcommand(kind, std::string("simulate ") + kind);
    add_common(sub, o);
    sub->callback([&selected, kind] { selected = std::string("simulate-") + kind; });
  }
  app.add_subcommand("default-config", "Print the reference configuration")
      ->callback([&selected] { selected = "default-config"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  if (selected == "default-config") {
    std::cout << reference_config();
    return kPass;
  }
  return run(selected, o);
}
