#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rck {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": " + what);
}

std::vector<Token> tokenize_line(const std::string& line, int lineno) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      const size_t end = line.find('"', i + 1);
      if (end == std::string::npos) fail(lineno, "unterminated string");
      out.push_back({line.substr(i + 1, end - i - 1), true});
      i = end + 1;
      continue;
    }
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '#' && line[j] != '"')
      ++j;
    out.push_back({line.substr(i, j - i), false});
    i = j;
  }
  return out;
}

double parse_number(const Token& t, int lineno) {
  double v = 0;
  const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
    fail(lineno, "expected a number, got '" + t.text + "'");
  return v;
}

long long parse_int(const Token& t, int lineno) {
  long long v = 0;
  const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
    fail(lineno, "expected an integer, got '" + t.text + "'");
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool saw_version = false;

  auto read_matrix_block = [&](std::vector<std::vector<std::string>>& into) {
    into.clear();
    while (std::getline(is, line)) {
      ++lineno;
      const auto toks = tokenize_line(line, lineno);
      if (toks.empty()) continue;
      if (toks.size() == 1 && !toks[0].quoted && toks[0].text == "}") return;
      std::vector<std::string> row;
      for (const auto& t : toks) {
        if (!t.quoted) fail(lineno, "metric entries must be quoted expressions");
        row.push_back(t.text);
      }
      into.push_back(std::move(row));
    }
    fail(lineno, "unterminated metric block");
  };

  while (std::getline(is, line)) {
    ++lineno;
    auto toks = tokenize_line(line, lineno);
    if (toks.empty()) continue;
    const std::string key = toks[0].text;
    if (toks[0].quoted) fail(lineno, "keys must be unquoted");
    const size_t nargs = toks.size() - 1;
    auto arg = [&](size_t i) -> const Token& { return toks[i + 1]; };
    auto need = [&](size_t n) {
      if (nargs != n) fail(lineno, "key '" + key + "' takes " + std::to_string(n) + " value(s)");
    };

    if (key == "format_version") {
      need(1);
      if (parse_int(arg(0), lineno) != 1) fail(lineno, "unsupported format_version");
      saw_version = true;
    } else if (key == "chart" || key == "base_chart" || key == "fiber_chart") {
      if (nargs < 1) fail(lineno, "chart needs coordinate names");
      std::vector<std::string> names;
      for (size_t i = 0; i < nargs; ++i) names.push_back(arg(i).text);
      if (key == "chart") cfg.chart = names;
      else if (key == "base_chart") cfg.base_chart = names;
      else cfg.fiber_chart = names;
    } else if (key == "metric" || key == "base_metric" || key == "fiber_metric") {
      need(1);
      if (arg(0).text != "{") fail(lineno, "expected '{' after " + key);
      if (key == "metric") read_matrix_block(cfg.metric);
      else if (key == "base_metric") read_matrix_block(cfg.base_metric);
      else read_matrix_block(cfg.fiber_metric);
    } else if (key == "f") {
      need(1);
      if (!arg(0).quoted) fail(lineno, "f must be a quoted expression");
      cfg.f = arg(0).text;
    } else if (key == "f_file") {
      need(1);
      cfg.f_file = arg(0).text;
    } else if (key == "phi") {
      need(1);
      if (!arg(0).quoted) fail(lineno, "phi must be a quoted expression");
      cfg.phi = arg(0).text;
    } else if (key == "h") {
      need(1);
      cfg.h = arg(0).text;
      cfg.h_is_marker = !arg(0).quoted;
      if (cfg.h_is_marker && arg(0).text != "1" && arg(0).text != "f")
        fail(lineno, "h must be 1, f, or a quoted expression");
    } else if (key == "lambda") {
      need(1);
      if (arg(0).quoted) cfg.lambda_expr = arg(0).text;
      else cfg.lambda_const = parse_number(arg(0), lineno);
    } else if (key == "construction") {
      need(1);
      cfg.construction = arg(0).text;
      if (cfg.construction != "none" && cfg.construction != "warped" &&
          cfg.construction != "sss" && cfg.construction != "walker")
        fail(lineno, "construction must be none, warped, sss, or walker");
    } else if (key == "warp_phi") {
      need(1);
      if (!arg(0).quoted) fail(lineno, "warp_phi must be a quoted expression");
      cfg.warp_phi = arg(0).text;
    } else if (key == "warp_mu") {
      need(1);
      cfg.warp_mu = parse_number(arg(0), lineno);
    } else if (key == "sss_h") {
      need(1);
      if (!arg(0).quoted) fail(lineno, "sss_h must be a quoted expression");
      cfg.sss_h = arg(0).text;
    } else if (key == "sss_time") {
      need(1);
      cfg.sss_time = arg(0).text;
    } else if (key == "walker_a" || key == "walker_b" || key == "walker_c") {
      need(1);
      if (!arg(0).quoted) fail(lineno, key + " must be a quoted expression");
      if (key == "walker_a") cfg.walker_a = arg(0).text;
      else if (key == "walker_b") cfg.walker_b = arg(0).text;
      else cfg.walker_c = arg(0).text;
    } else if (key == "region") {
      need(3);
      const double lo = parse_number(arg(1), lineno), hi = parse_number(arg(2), lineno);
      if (!(lo < hi)) fail(lineno, "region needs lo < hi");
      if (!std::isfinite(lo) || !std::isfinite(hi)) fail(lineno, "region bounds must be finite");
      cfg.region.emplace_back(arg(0).text, std::make_pair(lo, hi));
    } else if (key == "samples") {
      need(1);
      const long long v = parse_int(arg(0), lineno);
      if (v < 1) fail(lineno, "samples must be >= 1");
      cfg.samples = static_cast<int>(v);
    } else if (key == "seed") {
      need(1);
      cfg.seed = static_cast<uint64_t>(parse_int(arg(0), lineno));
    } else if (key == "orientation") {
      need(1);
      const long long v = parse_int(arg(0), lineno);
      if (v != 1 && v != -1) fail(lineno, "orientation must be 1 or -1");
      cfg.orientation = static_cast<int>(v);
    } else if (key == "gqe_m") {
      need(1);
      cfg.gqe_m = parse_number(arg(0), lineno);
      if (!(cfg.gqe_m > 0)) fail(lineno, "gqe_m must be positive");
    } else if (key == "checks") {
      if (nargs < 1) fail(lineno, "checks needs at least one name");
      for (size_t i = 0; i < nargs; ++i) {
        if (!check_exists(arg(i).text))
          fail(lineno, "unknown check name '" + arg(i).text + "'");
        cfg.checks.push_back(arg(i).text);
      }
    } else if (key == "tolerance") {
      need(2);
      if (!check_exists(arg(0).text))
        fail(lineno, "unknown check name '" + arg(0).text + "'");
      cfg.tolerances.emplace_back(arg(0).text, parse_number(arg(1), lineno));
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (!saw_version)
    throw Error(ErrorKind::ConfigError, "missing format_version");
  if (cfg.checks.empty())
    throw Error(ErrorKind::ConfigError, "config requests no checks");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Instance build_instance(const RunConfig& cfg) {
  Instance inst;
  inst.orientation = cfg.orientation;
  inst.gqe_m = cfg.gqe_m;

  auto metric_from = [](const std::vector<std::string>& names,
                        const std::vector<std::vector<std::string>>& entries,
                        const char* what) {
    if (names.empty())
      throw Error(ErrorKind::ConfigError, std::string(what) + " chart missing");
    if (entries.size() != names.size())
      throw Error(ErrorKind::ConfigError, std::string(what) + " metric is not n x n");
    for (const auto& row : entries)
      if (row.size() != names.size())
        throw Error(ErrorKind::ConfigError, std::string(what) + " metric is not n x n");
    return parse_metric(Chart(names), entries);
  };

  if (cfg.construction == "none") {
    inst.metric = metric_from(cfg.chart, cfg.metric, "main");
  } else if (cfg.construction == "walker") {
    WalkerSpec ws;
    const auto& coords = walker_chart().coords;
    if (cfg.walker_a) ws.a = parse(*cfg.walker_a, coords);
    if (cfg.walker_b) ws.b = parse(*cfg.walker_b, coords);
    if (cfg.walker_c) ws.c = parse(*cfg.walker_c, coords);
    inst.metric = walker_build(ws);
    inst.walker_b = ws.b ? ws.b : make_constant(0.0);
  } else if (cfg.construction == "warped") {
    WarpedSpec ws;
    ws.base = metric_from(cfg.base_chart, cfg.base_metric, "base");
    ws.fiber = metric_from(cfg.fiber_chart, cfg.fiber_metric, "fiber");
    if (!cfg.warp_phi) throw Error(ErrorKind::ConfigError, "warped construction needs warp_phi");
    ws.phi = ScalarField(parse(*cfg.warp_phi, cfg.base_chart));
    ws.mu = cfg.warp_mu;
    inst.warped = warped_build(ws);
    inst.warped_mu = cfg.warp_mu;
    inst.metric = inst.warped->product;
  } else if (cfg.construction == "sss") {
    SssSpec ss;
    ss.fiber = metric_from(cfg.fiber_chart, cfg.fiber_metric, "fiber");
    if (!cfg.sss_h) throw Error(ErrorKind::ConfigError, "sss construction needs sss_h");
    ss.lapse = ScalarField(parse(*cfg.sss_h, cfg.fiber_chart));
    ss.time_coord = cfg.sss_time;
    inst.sss_spec = ss;
    inst.sss = sss_build(ss);
    inst.metric = inst.sss->product;
  }

  const auto& coords = inst.metric.chart().coords;
  if (cfg.f && cfg.f_file)
    throw Error(ErrorKind::ConfigError, "give f or f_file, not both");
  if (cfg.f) inst.f = ScalarField(parse(*cfg.f, coords));
  if (cfg.f_file) {
    std::ifstream in(*cfg.f_file);
    if (!in) throw Error(ErrorKind::IoError, "cannot open f_file '" + *cfg.f_file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    inst.f = ScalarField::radial(RadialSpline::deserialize(ss.str()), coords);
  }
  if (cfg.phi) inst.phi = ScalarField(parse(*cfg.phi, coords));
  if (cfg.h) {
    if (cfg.h_is_marker)
      inst.h = (*cfg.h == "f") ? HSpec::equal_to_f() : HSpec::one();
    else
      inst.h = HSpec::of(ScalarField(parse(*cfg.h, coords)));
  }
  if (cfg.lambda_const) inst.lambda = LambdaSpec::of_constant(*cfg.lambda_const);
  if (cfg.lambda_expr) inst.lambda = LambdaSpec::of_field(ScalarField(parse(*cfg.lambda_expr, coords)));

  inst.region.bounds.assign(coords.size(), {-1.0, 1.0});
  for (const auto& [name, bounds] : cfg.region) {
    const int idx = inst.metric.chart().index_of(name);
    if (idx < 0)
      throw Error(ErrorKind::ConfigError,
                  "region coordinate '" + name + "' not in the chart (product charts "
                  "use mangled names)");
    inst.region.bounds[static_cast<size_t>(idx)] = bounds;
  }
  return inst;
}

Report run_config(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  Report rep;
  rep.meta.kappa = measured_kappa();
  rep.meta.orientation = cfg.orientation;
  for (const auto& name : cfg.checks) {
    std::optional<double> tol;
    for (const auto& [k, v] : cfg.tolerances)
      if (k == name) tol = v;
    rep.checks.push_back(run_named_check(name, inst, cfg.samples, cfg.seed, tol));
  }
  return rep;
}

}  // namespace rck
