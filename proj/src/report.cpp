#include "report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace rck {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

std::string render_human(const Report& r) {
  std::string out;
  out += "riccicheck " + r.meta.version + "\n";
  out += "conventions: " + r.meta.riemann_sign + "; Ricci trace: " +
         r.meta.ricci_trace_slot + "; div W: " + r.meta.divweyl_contraction +
         "; kappa = " + fmt(r.meta.kappa) +
         "; orientation = " + std::to_string(r.meta.orientation) + "\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-36s %6s %5s %11s %10s  %s\n", "check", "pts",
                "skip", "max defect", "tolerance", "result");
  out += line;
  for (const auto& c : r.checks) {
    std::string result;
    if (!c.claim_status.empty()) result = c.claim_status;
    else result = c.pass ? "pass" : "FAIL";
    std::snprintf(line, sizeof(line), "%-36s %6d %5d %11s %10s  %s\n", c.name.c_str(),
                  c.points_evaluated, c.points_skipped, fmt(c.max_defect).c_str(),
                  fmt(c.tolerance).c_str(), result.c_str());
    out += line;
    for (const auto& [k, v] : c.skip_reasons) {
      std::snprintf(line, sizeof(line), "    skipped %d: %s\n", v, k.c_str());
      out += line;
    }
    for (const auto& [k, v] : c.extras) {
      std::snprintf(line, sizeof(line), "    %s = %s\n", k.c_str(), fmt(v).c_str());
      out += line;
    }
    if (!c.note.empty()) out += "    note: " + c.note + "\n";
  }
  out += "\noverall: ";
  out += r.passed() ? "pass" : "FAIL";
  out += "\n";
  return out;
}

std::string render_machine(const Report& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["format_version"] = r.format_version;
  j["engine"] = {
      {"version", r.meta.version},
      {"riemann_sign", r.meta.riemann_sign},
      {"ricci_trace_slot", r.meta.ricci_trace_slot},
      {"divweyl_contraction", r.meta.divweyl_contraction},
      {"kappa", r.meta.kappa},
      {"orientation", r.meta.orientation},
  };
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json jc;
    jc["name"] = c.name;
    jc["points_evaluated"] = c.points_evaluated;
    jc["points_skipped"] = c.points_skipped;
    json reasons = json::object();
    for (const auto& [k, v] : c.skip_reasons) reasons[k] = v;
    jc["skip_reasons"] = reasons;
    jc["max_defect"] = c.max_defect;
    jc["defect_location"] = c.defect_location;
    jc["tolerance"] = std::isinf(c.tolerance) ? json("inf") : json(c.tolerance);
    jc["pass"] = c.pass;
    if (!c.claim_status.empty()) jc["claim_status"] = c.claim_status;
    if (!c.extras.empty()) {
      json ex = json::object();
      for (const auto& [k, v] : c.extras) ex[k] = v;
      jc["extras"] = ex;
    }
    if (!c.note.empty()) jc["note"] = c.note;
    j["checks"].push_back(jc);
  }
  j["passed"] = r.passed();
  return j.dump(2) + "\n";
}

}  // namespace rck
