#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "config.hpp"
#include "report.hpp"
#include "suite.hpp"

using namespace rck;

namespace {

const char* kFlatConfig = R"(# flat neutral space, curvature invariants
format_version 1
chart x1 x2 x3 x4
metric {
  "-1" "0" "0" "0"
  "0" "-1" "0" "0"
  "0" "0" "1" "0"
  "0" "0" "0" "1"
}
samples 20
seed 7
checks bianchi symmetries weyl_zero
)";

}  // namespace

TEST_CASE("config parsing: happy path") {
  const RunConfig cfg = parse_config(kFlatConfig);
  CHECK(cfg.chart.size() == 4);
  CHECK(cfg.metric.size() == 4);
  CHECK(cfg.samples == 20);
  CHECK(cfg.seed == 7);
  CHECK(cfg.checks == std::vector<std::string>{"bianchi", "symmetries", "weyl_zero"});
  const Report rep = run_config(cfg);
  CHECK(rep.checks.size() == 3);
  CHECK(rep.passed());
  for (const auto& c : rep.checks) {
    CHECK(c.points_evaluated == 20);
    CHECK(c.pass);
  }
}

TEST_CASE("config parsing: every rejection carries a line number") {
  auto expect_config_error = [](const std::string& text, const char* tag) {
    try {
      parse_config(text);
      FAIL_CHECK("expected ConfigError for ", tag);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  };
  expect_config_error("format_version 1\nbogus_key 3\nchecks bianchi\n", "unknown key");
  expect_config_error("format_version 1\nchecks not_a_check\n", "unknown check");
  expect_config_error("format_version 1\nregion x 2 1\nchecks bianchi\n", "bad region");
  expect_config_error("format_version 1\nsamples 0\nchecks bianchi\n", "bad samples");
  expect_config_error("format_version 1\norientation 2\nchecks bianchi\n", "bad orientation");
  expect_config_error("format_version 1\nmetric {\n\"1\"\n", "unterminated block");
  expect_config_error("format_version 1\nf \"x1\nchecks bianchi\n", "unterminated string");
  expect_config_error("checks bianchi\n", "missing version");
  expect_config_error("format_version 1\n", "no checks");
  expect_config_error("format_version 2\nchecks bianchi\n", "wrong version");
  expect_config_error("format_version 1\nh g\nchecks bianchi\n", "bad h marker");
}

TEST_CASE("instance assembly from constructions") {
  {
    const RunConfig cfg = parse_config(
        "format_version 1\nconstruction walker\nwalker_b \"x*y^2*z+1\"\n"
        "f \"x*z\"\nh f\nlambda \"x*z\"\nsamples 10\nchecks soliton_residual walker_system\n");
    const Report rep = run_config(cfg);
    CHECK(rep.checks.size() == 2);
    CHECK(rep.checks[0].max_defect > 0.1);  // the claim under test fails
  }
  {
    const RunConfig cfg = parse_config(
        "format_version 1\nconstruction sss\nfiber_chart x1 x2 x3\nfiber_metric {\n"
        "\"1\" \"0\" \"0\"\n\"0\" \"1\" \"0\"\n\"0\" \"0\" \"1\"\n}\n"
        "sss_h \"exp(x1)\"\nsamples 15\nchecks sss_formulas\n");
    const Report rep = run_config(cfg);
    CHECK(rep.passed());
  }
  {
    const RunConfig cfg = parse_config(
        "format_version 1\nconstruction warped\nbase_chart s\nbase_metric {\n\"1\"\n}\n"
        "fiber_chart th ph\nfiber_metric {\n\"1\" \"0\"\n\"0\" \"sin(th)^2\"\n}\n"
        "warp_phi \"sin(s)\"\nwarp_mu 1\nregion base_s 0.4 2.7\nregion fiber_th 0.4 2.7\n"
        "samples 15\nchecks warped_formulas\n");
    const Report rep = run_config(cfg);
    CHECK(rep.passed());
    bool saw_probe = false;
    for (const auto& [k, v] : rep.checks[0].extras)
      if (k == "einstein_probe") {
        saw_probe = true;
        CHECK(v <= 1e-10);
      }
    CHECK(saw_probe);
  }
  // region names must belong to the effective chart
  CHECK_THROWS_AS(run_config(parse_config(
                      "format_version 1\nconstruction walker\nwalker_b \"y^2\"\n"
                      "region q 0 1\nchecks bianchi\n")),
                  Error);
}

TEST_CASE("per-point failures become skip reasons") {
  // ln(x1) is undefined on half the sample region
  const RunConfig cfg = parse_config(
      "format_version 1\nchart x1 x2\nmetric {\n\"2+sin(x1)\" \"0\"\n\"0\" \"ln(x1)\"\n}\n"
      "samples 40\nseed 3\nchecks bianchi\n");
  const Report rep = run_config(cfg);
  const CheckResult& c = rep.checks[0];
  CHECK(c.points_skipped > 0);
  CHECK(c.points_evaluated + c.points_skipped == 40);
  bool reason_seen = false;
  for (const auto& [k, v] : c.skip_reasons)
    if (v > 0) reason_seen = true;
  CHECK(reason_seen);
}

TEST_CASE("reports render deterministically") {
  const RunConfig cfg = parse_config(kFlatConfig);
  const std::string a = render_machine(run_config(cfg));
  const std::string b = render_machine(run_config(cfg));
  CHECK(a == b);
  CHECK(a.find("\"format_version\": 1") != std::string::npos);
  CHECK(a.find("\"kappa\": 0.5") != std::string::npos);
  const std::string h = render_human(run_config(cfg));
  CHECK(h.find("overall: pass") != std::string::npos);
}

TEST_CASE("the built-in suite filters and stays deterministic") {
  const Report small = paper_suite("c7");
  CHECK(small.checks.size() == 2);
  const std::string a = render_machine(paper_suite("c9"));
  const std::string b = render_machine(paper_suite("c9"));
  CHECK(a == b);
}

TEST_CASE("check catalog sanity") {
  CHECK(check_exists("bianchi"));
  CHECK(!check_exists("bogus"));
  for (const auto& spec : check_catalog()) {
    int count = 0;
    for (const auto& other : check_catalog())
      if (other.name == spec.name) ++count;
    CHECK(count == 1);
  }
}

TEST_CASE("sampling is deterministic and seed-sensitive") {
  Region r;
  r.bounds = {{-1, 1}, {0, 2}};
  const auto a = sample_points(r, 5, 11);
  const auto b = sample_points(r, 5, 11);
  const auto c = sample_points(r, 5, 12);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& p : a) {
    CHECK(p[0] >= -1.0);
    CHECK(p[0] <= 1.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[1] <= 2.0);
  }
}
