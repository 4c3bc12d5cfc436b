#pragma once

#include <string>
#include <vector>

#include "checks.hpp"

namespace rck {

inline constexpr const char* kEngineVersion = "0.1.0";

// Convention stamp carried by every report so numbers are comparable across
// tools: curvature sign, Ricci trace slot, div W contraction slot, the
// measured Cotton proportionality constant, and the orientation used.
struct EngineMeta {
  std::string version = kEngineVersion;
  std::string riemann_sign = "R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]";
  std::string ricci_trace_slot = "first-argument";
  std::string divweyl_contraction = "fourth-slot";
  double kappa = 0;
  int orientation = 1;
};

struct Report {
  int format_version = 1;
  EngineMeta meta;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.claim_status.empty() && !c.pass) return false;
    return true;
  }
};

std::string render_human(const Report& r);
std::string render_machine(const Report& r);  // JSON with stable key order

}  // namespace rck
