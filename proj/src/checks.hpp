#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "duality.hpp"
#include "geometry.hpp"
#include "sampling.hpp"
#include "soliton.hpp"

namespace rck {

// One executed check over a sample of points.  max_defect is normalized by
// the check's scale convention (1 + magnitude of the tensors involved) for
// curvature identities, and is the raw max-abs for residual checks; each
// check documents which in the catalog.  pass <=> max_defect <= tolerance
// over non-skipped points and at least one point evaluated.
struct CheckResult {
  std::string name;
  int points_evaluated = 0;
  int points_skipped = 0;
  std::vector<std::pair<std::string, int>> skip_reasons;  // sorted by reason
  double max_defect = 0;
  std::vector<double> defect_location;
  double tolerance = 0;
  bool pass = false;
  std::string claim_status;  // CONFIRMED / REFUTED-AT-MEASURED-RESIDUAL for claims
  std::vector<std::pair<std::string, double>> extras;
  std::string note;
};

struct PointOutcome {
  bool skipped = false;
  std::string skip_reason;
  double defect = 0;
  // Merged across points: keys ending in "_points" are summed, the rest
  // max-merged.  Deterministic regardless of the worker count.
  std::vector<std::pair<std::string, double>> extras;
};

using PointCheck = std::function<PointOutcome(std::span<const double>)>;

// Evaluates `check` on a deterministic sample, fanning out over a thread
// pool; the reduction (max + lowest-index tie break, skip histogram) is
// order-insensitive so results do not depend on the thread count.
CheckResult run_point_check(const std::string& name, double tolerance,
                            const Region& region, int samples, uint64_t seed,
                            const PointCheck& check);

// Everything a named check can draw on, assembled from a run configuration
// or built programmatically by the suite.
struct Instance {
  MetricField metric;
  Region region;
  std::optional<ScalarField> f, phi;
  std::optional<HSpec> h;
  std::optional<LambdaSpec> lambda;
  double gqe_m = 4.0;
  int orientation = 1;
  std::optional<WarpedProduct> warped;
  std::optional<double> warped_mu;
  std::optional<SssProduct> sss;
  std::optional<SssSpec> sss_spec;  // original (unmangled) fiber + lapse
  std::optional<ExprPtr> walker_b;
  std::optional<double> kappa_fixed;  // pin the Cotton/div W ratio
};

struct CheckSpec {
  std::string name;
  double default_tolerance;
  const char* description;
};

const std::vector<CheckSpec>& check_catalog();
bool check_exists(const std::string& name);

// Runs one named catalog check against an instance.
CheckResult run_named_check(const std::string& name, const Instance& inst,
                            int samples, uint64_t seed,
                            std::optional<double> tolerance_override);

// Measured Cotton/divergence-of-Weyl proportionality constant: fitted once
// on a fixed Walker polynomial oracle metric and cached for the process.
double measured_kappa();

// Pointwise invariant defects, normalized by 1 + tensor magnitude.  Shared
// by the named checks, the built-in suite, and the tests.
double bianchi1_defect(const GeometryEvaluation& ge);
double symmetry_defect(const GeometryEvaluation& ge);
double bianchi2_defect(const GeometryEvaluation& ge);
double metric_compat_defect(const GeometryEvaluation& ge);
double weyl_trace_defect(const GeometryEvaluation& ge);
double cotton_trace_defect(const GeometryEvaluation& ge);
double div_identities_defect(const GeometryEvaluation& ge, const ScalarField& phi);

}  // namespace rck
