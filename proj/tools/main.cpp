// riccicheck command line: configuration-driven verification runs and the
// built-in reproduction suite.  Talks to the engine only through the public
// C API.
//
// Exit codes for `run`: 0 all checks passed, 1 at least one check failed,
// 2 configuration or I/O problem.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riccicheck.h"

namespace {

int emit(rck_report* rep, const std::string& out_path, const std::string& format) {
  const int machine = format == "machine" ? 1 : 0;
  char* text = nullptr;
  if (rck_report_render(rep, machine, &text) != RCK_OK) {
    std::fprintf(stderr, "error: %s\n", rck_last_error());
    return 2;
  }
  std::fputs(text, stdout);
  rck_string_free(text);
  if (!out_path.empty()) {
    // Files default to the machine format so they stay diffable.
    if (rck_report_write_file(rep, out_path.c_str(), 1) != RCK_OK) {
      std::fprintf(stderr, "error: %s\n", rck_last_error());
      return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical curvature, soliton, and self-duality verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rck_version()));

  std::string config_path, out_path, format = "human", filter;
  unsigned long long seed = 0;
  bool seed_set = false;
  std::vector<std::string> tolerances;

  CLI::App* run = app.add_subcommand("run", "execute the checks a config file requests");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_path, "also write the machine-format report here");
  run->add_option("--format", format, "stdout format: human or machine")
      ->check(CLI::IsMember({"human", "machine"}));
  run->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--tolerance", tolerances,
                  "override a tolerance as CHECK=VALUE (repeatable)");

  CLI::App* suite = app.add_subcommand("suite", "run the built-in reproduction suite");
  suite->add_option("--filter", filter, "only rows whose name contains this");
  suite->add_option("--out", out_path, "also write the machine-format report here");
  suite->add_option("--format", format, "stdout format: human or machine")
      ->check(CLI::IsMember({"human", "machine"}));

  CLI::App* checks = app.add_subcommand("checks", "list the available check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (checks->parsed()) {
    for (int i = 0; i < rck_check_count(); ++i)
      std::printf("  %-18s %s\n", rck_check_name(i), rck_check_description(i));
    return 0;
  }

  if (suite->parsed()) {
    rck_report* rep = nullptr;
    if (rck_paper_suite(filter.empty() ? nullptr : filter.c_str(), &rep) != RCK_OK) {
      std::fprintf(stderr, "error: %s\n", rck_last_error());
      return 2;
    }
    const int rc = emit(rep, out_path, format);
    rck_report_free(rep);
    return rc;  // the suite always completes; failures are report content
  }

  rck_config* cfg = nullptr;
  if (rck_config_load(config_path.c_str(), &cfg) != RCK_OK) {
    std::fprintf(stderr, "config error: %s\n", rck_last_error());
    return 2;
  }
  if (seed_set) rck_config_set_seed(cfg, seed);
  for (const std::string& t : tolerances) {
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "config error: --tolerance wants CHECK=VALUE, got '%s'\n",
                   t.c_str());
      rck_config_free(cfg);
      return 2;
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str() + eq + 1, &end);
    if (end == t.c_str() + eq + 1 || *end != '\0') {
      std::fprintf(stderr, "config error: bad tolerance value in '%s'\n", t.c_str());
      rck_config_free(cfg);
      return 2;
    }
    if (rck_config_set_tolerance(cfg, t.substr(0, eq).c_str(), v) != RCK_OK) {
      std::fprintf(stderr, "config error: %s\n", rck_last_error());
      rck_config_free(cfg);
      return 2;
    }
  }

  rck_report* rep = nullptr;
  const rck_status st = rck_run(cfg, &rep);
  rck_config_free(cfg);
  if (st != RCK_OK) {
    std::fprintf(stderr, "%s: %s\n", st == RCK_ERROR_CONFIG ? "config error" : "error",
                 rck_last_error());
    return 2;
  }
  int rc = emit(rep, out_path, format);
  if (rc == 0) rc = rck_report_passed(rep) ? 0 : 1;
  rck_report_free(rep);
  return rc;
}
