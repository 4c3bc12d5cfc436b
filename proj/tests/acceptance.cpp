// Acceptance gate: runs the built-in suite and checks every criterion at its
// pinned tolerance, then drives the installed CLI for the exit-code and
// determinism contracts.  Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "report.hpp"
#include "suite.hpp"

using namespace rck;

namespace {

bool g_all_pass = true;

void criterion(int number, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) g_all_pass = false;
}

const CheckResult* find_row(const Report& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

// All rows with the given prefix must pass; returns a summary of the worst.
bool rows_pass(const Report& rep, const std::string& prefix, std::string& detail) {
  bool ok = true;
  double worst = -1;
  std::string worst_name;
  int count = 0;
  for (const auto& c : rep.checks) {
    if (c.name.rfind(prefix, 0) != 0) continue;
    ++count;
    if (c.claim_status.empty() && !c.pass) {
      ok = false;
      detail = "row " + c.name + " failed with defect " + std::to_string(c.max_defect);
    }
    if (c.max_defect > worst) {
      worst = c.max_defect;
      worst_name = c.name;
    }
  }
  if (count == 0) {
    ok = false;
    detail = "no rows matched prefix " + prefix;
  } else if (ok) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d rows, worst %s at %.3e", count, worst_name.c_str(),
                  worst);
    detail = buf;
  }
  return ok;
}

double extra_of(const CheckResult& c, const std::string& key, double fallback) {
  for (const auto& [k, v] : c.extras)
    if (k == key) return v;
  return fallback;
}

int run_cli(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef RCK_CLI_PATH
  std::string cli = RCK_CLI_PATH;
#else
  std::string cli;
#endif
  if (argc > 1) cli = argv[1];

  std::printf("running the built-in suite...\n");
  const Report rep = paper_suite();
  std::string detail;

  // 1. curvature-core invariants on the five fixed metrics, <= 1e-9 * scale
  criterion(1, "curvature-core invariants (Bianchi, symmetries, trace-freeness)",
            rows_pass(rep, "c1.", detail), detail);

  // 2. Walker reproduction: displayed components and Ricci completeness
  criterion(2, "Walker displayed curvature reproduced, Ricci list exhaustive",
            rows_pass(rep, "c2.", detail), detail);

  // 3. exact solitons: residual 1e-11, identities 1e-10, non-vacuous cancellation
  {
    bool ok = rows_pass(rep, "c3.", detail);
    for (const char* tag : {"euclidean", "neutral"}) {
      const CheckResult* l2 = find_row(rep, std::string("c3.soliton.") + tag + ".lemma2");
      if (!l2) { ok = false; detail = "missing lemma2 row"; continue; }
      for (const char* key : {"term_df_hess", "term_lap_df", "term_dnorm"}) {
        if (extra_of(*l2, key, 0.0) < 1e-6) {
          ok = false;
          detail = std::string("cancellation term ") + key + " is vacuous";
        }
      }
    }
    criterion(3, "quadratic-potential solitons exact, identity terms non-vacuous", ok, detail);
  }

  // 4. claim adjudication rows
  {
    const CheckResult* steady = find_row(rep, "c4.steady.claim");
    const CheckResult* nonsteady = find_row(rep, "c4.nonsteady.claim");
    const CheckResult* prediction = find_row(rep, "c4.nonsteady.prediction");
    bool ok = steady && steady->claim_status == "CONFIRMED";
    ok = ok && nonsteady &&
         (nonsteady->claim_status == "CONFIRMED" ||
          nonsteady->claim_status == "REFUTED-AT-MEASURED-RESIDUAL");
    ok = ok && prediction && prediction->pass;
    detail.clear();
    if (steady && nonsteady) {
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "steady %s at %.3e; non-steady %s at %.3e, components match prediction",
                    steady->claim_status.c_str(), steady->max_defect,
                    nonsteady->claim_status.c_str(), nonsteady->max_defect);
      detail = buf;
    }
    criterion(4, "claim adjudication (steady / non-steady soliton candidates)", ok, detail);
  }

  // 5. warped and static block formulas at 1e-9 * scale over 200 points
  criterion(5, "warped-product and static-metric block formulas",
            rows_pass(rep, "c5.", detail), detail);

  // 6. Hodge machinery, split algebra, self-duality criteria agreement
  {
    bool ok = rows_pass(rep, "c6.", detail);
    const CheckResult* agree = find_row(rep, "c6.selfdual.agreement");
    if (!agree || extra_of(*agree, "selfdual_points", 0.0) < 1.0) {
      ok = false;
      detail = "agreement test never saw a self-dual instance";
    }
    criterion(6, "Hodge star, self-dual split, frame criteria agreement", ok, detail);
  }

  // 7. kappa magnitude 1/2 within 1e-9 and constancy across random metrics
  criterion(7, "Cotton / div W proportionality with |kappa| = 1/2",
            rows_pass(rep, "c7.", detail), detail);

  // 8. generalized quasi-Einstein machinery and the conditional construction
  criterion(8, "quasi-Einstein transform, radial example, static construction",
            rows_pass(rep, "c8.", detail), detail);

  // 9. jets against finite differences and exact polynomials
  criterion(9, "differentiation substrate vs Richardson differences",
            rows_pass(rep, "c9.", detail), detail);

  // 10. CLI determinism and exit codes
  {
    bool ok = true;
    detail.clear();
    const std::string a = render_machine(paper_suite());
    const std::string b = render_machine(paper_suite());
    if (a != b) {
      ok = false;
      detail = "suite reports differ between in-process runs";
    }
    if (cli.empty()) {
      ok = false;
      detail = "CLI path not provided";
    } else {
      namespace fs = std::filesystem;
      const fs::path dir =
          fs::temp_directory_path() / ("riccicheck_accept_" + std::to_string(::getpid()));
      fs::create_directories(dir);
      const auto write = [&](const char* name, const std::string& text) {
        std::ofstream f(dir / name);
        f << text;
        return (dir / name).string();
      };
      const std::string pass_cfg = write("pass.cfg",
          "format_version 1\nchart x1 x2 x3 x4\nmetric {\n\"-1\" \"0\" \"0\" \"0\"\n"
          "\"0\" \"-1\" \"0\" \"0\"\n\"0\" \"0\" \"1\" \"0\"\n\"0\" \"0\" \"0\" \"1\"\n}\n"
          "samples 10\nchecks bianchi weyl_zero\n");
      const std::string fail_cfg = write("fail.cfg",
          "format_version 1\nchart x1 x2 x3 x4\nmetric {\n\"-1\" \"0\" \"0\" \"0\"\n"
          "\"0\" \"-1\" \"0\" \"0\"\n\"0\" \"0\" \"1\" \"0\"\n\"0\" \"0\" \"0\" \"1\"\n}\n"
          "f \"x1^3\"\nh 1\nlambda 0\nsamples 10\nchecks soliton_residual\n");
      const std::string bad_cfg = write("bad.cfg", "format_version 1\nnot_a_key 1\n");
      const std::string null_out = " > /dev/null 2>&1";
      const int rc_pass = run_cli(cli + " run --config " + pass_cfg + null_out);
      const int rc_fail = run_cli(cli + " run --config " + fail_cfg + null_out);
      const int rc_bad = run_cli(cli + " run --config " + bad_cfg + null_out);
      if (rc_pass != 0 || rc_fail != 1 || rc_bad != 2) {
        ok = false;
        char buf[120];
        std::snprintf(buf, sizeof(buf), "exit codes pass/fail/malformed = %d/%d/%d want 0/1/2",
                      rc_pass, rc_fail, rc_bad);
        detail = buf;
      }
      const std::string out1 = (dir / "suite1.json").string();
      const std::string out2 = (dir / "suite2.json").string();
      const int rc_s1 = run_cli(cli + " suite --format machine > " + out1 + " 2>/dev/null");
      const int rc_s2 = run_cli(cli + " suite --format machine > " + out2 + " 2>/dev/null");
      auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
      };
      if (rc_s1 != 0 || rc_s2 != 0 || slurp(out1).empty() || slurp(out1) != slurp(out2)) {
        ok = false;
        detail = "CLI suite reports are not byte-identical";
      }
      fs::remove_all(dir);
      if (ok && detail.empty()) detail = "exit codes 0/1/2 and byte-identical suite reports";
    }
    criterion(10, "CLI determinism and exit-code contract", ok, detail);
  }

  std::printf("%s\n", g_all_pass ? "ACCEPTANCE: all criteria pass"
                                 : "ACCEPTANCE: at least one criterion failed");
  return g_all_pass ? 0 : 1;
}
