#include "riccicheck.h"

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "config.hpp"
#include "report.hpp"
#include "suite.hpp"

struct rck_config {
  rck::RunConfig cfg;
};

struct rck_report {
  rck::Report rep;
};

namespace {

thread_local std::string t_last_error;

rck_status status_of(const rck::Error& e) {
  using rck::ErrorKind;
  switch (e.kind()) {
    case ErrorKind::ConfigError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::SyntaxError:
    case ErrorKind::NonConstantExponent:
      return RCK_ERROR_CONFIG;
    case ErrorKind::IoError:
      return RCK_ERROR_IO;
    case ErrorKind::InvalidArgument:
      return RCK_ERROR_ARGUMENT;
    default:
      return RCK_ERROR_DOMAIN;
  }
}

template <typename Fn>
rck_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const rck::Error& e) {
    t_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RCK_ERROR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return RCK_ERROR_INTERNAL;
  }
}

rck_status require(bool ok, const char* what) {
  if (ok) return RCK_OK;
  t_last_error = what;
  return RCK_ERROR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* rck_version(void) { return rck::kEngineVersion; }

const char* rck_last_error(void) { return t_last_error.c_str(); }

rck_status rck_config_load(const char* path, rck_config** out) {
  if (rck_status s = require(path && out, "null argument"); s != RCK_OK) return s;
  *out = nullptr;
  return guarded([&] {
    auto* c = new rck_config{rck::load_config(path)};
    *out = c;
    return RCK_OK;
  });
}

rck_status rck_config_parse(const char* text, rck_config** out) {
  if (rck_status s = require(text && out, "null argument"); s != RCK_OK) return s;
  *out = nullptr;
  return guarded([&] {
    auto* c = new rck_config{rck::parse_config(text)};
    *out = c;
    return RCK_OK;
  });
}

void rck_config_free(rck_config* cfg) { delete cfg; }

rck_status rck_config_set_seed(rck_config* cfg, unsigned long long seed) {
  if (rck_status s = require(cfg != nullptr, "null config"); s != RCK_OK) return s;
  cfg->cfg.seed = seed;
  return RCK_OK;
}

rck_status rck_config_set_tolerance(rck_config* cfg, const char* check, double tol) {
  if (rck_status s = require(cfg && check, "null argument"); s != RCK_OK) return s;
  if (!rck::check_exists(check)) {
    t_last_error = std::string("unknown check name '") + check + "'";
    return RCK_ERROR_CONFIG;
  }
  cfg->cfg.tolerances.emplace_back(check, tol);
  return RCK_OK;
}

int rck_check_count(void) {
  return static_cast<int>(rck::check_catalog().size());
}

const char* rck_check_name(int index) {
  const auto& cat = rck::check_catalog();
  if (index < 0 || index >= static_cast<int>(cat.size())) return nullptr;
  return cat[static_cast<size_t>(index)].name.c_str();
}

const char* rck_check_description(int index) {
  const auto& cat = rck::check_catalog();
  if (index < 0 || index >= static_cast<int>(cat.size())) return nullptr;
  return cat[static_cast<size_t>(index)].description;
}

rck_status rck_run(const rck_config* cfg, rck_report** out) {
  if (rck_status s = require(cfg && out, "null argument"); s != RCK_OK) return s;
  *out = nullptr;
  return guarded([&] {
    auto* r = new rck_report{rck::run_config(cfg->cfg)};
    *out = r;
    return RCK_OK;
  });
}

rck_status rck_paper_suite(const char* filter, rck_report** out) {
  if (rck_status s = require(out != nullptr, "null argument"); s != RCK_OK) return s;
  *out = nullptr;
  return guarded([&] {
    auto* r = new rck_report{rck::paper_suite(filter ? filter : "")};
    *out = r;
    return RCK_OK;
  });
}

int rck_report_passed(const rck_report* rep) {
  return rep && rep->rep.passed() ? 1 : 0;
}

int rck_report_check_count(const rck_report* rep) {
  return rep ? static_cast<int>(rep->rep.checks.size()) : 0;
}

rck_status rck_report_render(const rck_report* rep, int machine, char** out) {
  if (rck_status s = require(rep && out, "null argument"); s != RCK_OK) return s;
  *out = nullptr;
  return guarded([&] {
    const std::string text =
        machine ? rck::render_machine(rep->rep) : rck::render_human(rep->rep);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) {
      t_last_error = "out of memory";
      return RCK_ERROR_INTERNAL;
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return RCK_OK;
  });
}

rck_status rck_report_write_file(const rck_report* rep, const char* path, int machine) {
  if (rck_status s = require(rep && path, "null argument"); s != RCK_OK) return s;
  return guarded([&] {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      t_last_error = std::string("cannot open '") + path + "' for writing";
      return RCK_ERROR_IO;
    }
    const std::string text =
        machine ? rck::render_machine(rep->rep) : rck::render_human(rep->rep);
    f << text;
    if (!f) {
      t_last_error = std::string("failed writing '") + path + "'";
      return RCK_ERROR_IO;
    }
    return RCK_OK;
  });
}

void rck_report_free(rck_report* rep) { delete rep; }

void rck_string_free(char* text) { std::free(text); }

}  // extern "C"
