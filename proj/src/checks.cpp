#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace rck {

namespace {

void merge_extra(std::vector<std::pair<std::string, double>>& into,
                 const std::string& key, double value) {
  const bool additive = key.size() > 7 && key.rfind("_points") == key.size() - 7;
  for (auto& [k, v] : into)
    if (k == key) {
      v = additive ? v + value : std::max(v, value);
      return;
    }
  into.emplace_back(key, value);
}

}  // namespace

CheckResult run_point_check(const std::string& name, double tolerance,
                            const Region& region, int samples, uint64_t seed,
                            const PointCheck& check) {
  const auto pts = sample_points(region, samples, seed);
  std::vector<PointOutcome> outs(pts.size());
  std::vector<bool> errored(pts.size(), false);
  std::vector<std::string> errs(pts.size());

  auto eval_range = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      try {
        outs[i] = check(pts[i]);
      } catch (const Error& e) {
        errored[i] = true;
        errs[i] = e.kind_name();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned nthreads =
      pts.size() < 16 ? 1u : std::min({hw, 8u, static_cast<unsigned>(pts.size())});
  if (nthreads <= 1) {
    eval_range(0, pts.size());
  } else {
    std::vector<std::thread> workers;
    const size_t chunk = (pts.size() + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
      const size_t lo = t * chunk, hi = std::min(pts.size(), lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(eval_range, lo, hi);
    }
    for (auto& w : workers) w.join();
  }

  // Order-insensitive merge, walked in index order for determinism.
  CheckResult res;
  res.name = name;
  res.tolerance = tolerance;
  std::map<std::string, int> reasons;
  int arg = -1;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (errored[i]) {
      res.points_skipped++;
      reasons[errs[i]]++;
      continue;
    }
    if (outs[i].skipped) {
      res.points_skipped++;
      reasons[outs[i].skip_reason.empty() ? "skipped" : outs[i].skip_reason]++;
      continue;
    }
    res.points_evaluated++;
    if (arg < 0 || outs[i].defect > res.max_defect) {
      res.max_defect = outs[i].defect;
      arg = static_cast<int>(i);
    }
    for (const auto& [k, v] : outs[i].extras) merge_extra(res.extras, k, v);
  }
  if (arg >= 0) res.defect_location = pts[static_cast<size_t>(arg)];
  for (const auto& [k, v] : reasons) res.skip_reasons.emplace_back(k, v);
  res.pass = res.points_evaluated > 0 && res.max_defect <= tolerance;
  return res;
}

// --- per-point invariant defects, normalized by 1 + tensor magnitude ---

double bianchi1_defect(const GeometryEvaluation& ge) {
  const auto& r = ge.curvature().riem_lo;
  const int n = ge.dim();
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst,
                           std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return worst / (1.0 + max_abs(r));
}

double symmetry_defect(const GeometryEvaluation& ge) {
  const auto& r = ge.curvature().riem_lo;
  const auto& ric = ge.curvature().ric;
  const int n = ge.dim();
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(ric(i, j) - ric(j, i)));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(j, i, k, l)));
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(i, j, l, k)));
          worst = std::max(worst, std::abs(r(i, j, k, l) - r(k, l, i, j)));
        }
    }
  return worst / (1.0 + std::max(max_abs(r), max_abs(ric)));
}

double bianchi2_defect(const GeometryEvaluation& ge) {
  // 2 (div Ric)_j = d_j r
  const auto& cb = ge.curvature();
  const auto& gi = ge.metric_value().g_inv;
  const int n = ge.dim();
  double worst = 0, scale = 0;
  for (int j = 0; j < n; ++j) {
    double div = 0;
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) div += gi(l, m) * cb.grad_ric(l, m, j);
    const double dr = ge.r_jet().derivative(j).value();
    scale = std::max({scale, std::abs(div), std::abs(dr)});
    worst = std::max(worst, std::abs(2.0 * div - dr));
  }
  return worst / (1.0 + scale);
}

double metric_compat_defect(const GeometryEvaluation& ge) {
  const int n = ge.dim();
  const auto& gam = ge.curvature().gamma;
  double worst = 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = ge.g_jet(i, j).derivative(k).value();
        for (int m = 0; m < n; ++m)
          d -= gam(m, k, i) * ge.g_jet(m, j).value() +
               gam(m, k, j) * ge.g_jet(i, m).value();
        worst = std::max(worst, std::abs(d));
      }
  return worst / (1.0 + max_abs(ge.metric_value().g));
}

double weyl_trace_defect(const GeometryEvaluation& ge) {
  const Ten4& w = ge.weyl();
  const auto& gi = ge.metric_value().g_inv;
  const int n = ge.dim();
  double worst = 0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double t13 = 0, t14 = 0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          t13 += gi(i, k) * w(i, j, k, l);
          t14 += gi(i, k) * w(i, j, l, k);
        }
      worst = std::max({worst, std::abs(t13), std::abs(t14)});
    }
  return worst / (1.0 + max_abs(w));
}

double cotton_trace_defect(const GeometryEvaluation& ge) {
  const Ten3& c = ge.cotton();
  const auto& gi = ge.metric_value().g_inv;
  const int n = ge.dim();
  double worst = 0;
  for (int j = 0; j < n; ++j) {
    double t1 = 0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) t1 += gi(i, k) * c(i, j, k);
    worst = std::max(worst, std::abs(t1));
  }
  for (int i = 0; i < n; ++i) {
    double t2 = 0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t2 += gi(j, k) * c(i, j, k);
    worst = std::max(worst, std::abs(t2));
  }
  for (int i = 0; i < n; ++i)  // (i,j) skew pair
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(c(i, j, k) + c(j, i, k)));
  return worst / (1.0 + max_abs(c));
}

double div_identities_defect(const GeometryEvaluation& ge, const ScalarField& phi) {
  const int n = ge.dim();
  const auto fe = ge.field_eval(phi);
  const auto& ric = ge.curvature().ric;
  double worst = 0, scale = 0;

  // div(phi T) = phi div T + T(grad phi, .) with T = Ric.
  std::vector<Jet> ric_jets(static_cast<size_t>(n * n));
  std::vector<Jet> phit(static_cast<size_t>(n * n));
  const Jet phi1 = fe.f3.truncated(1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ric_jets[static_cast<size_t>(i * n + j)] = ge.ric_jet(i, j);
      phit[static_cast<size_t>(i * n + j)] = phi1 * ge.ric_jet(i, j);
    }
  const Vec div_phit = ge.divergence02(phit);
  const Vec div_t = ge.divergence02(ric_jets);
  for (int j = 0; j < n; ++j) {
    double tgrad = 0;
    for (int k = 0; k < n; ++k) tgrad += ric(k, j) * fe.grad[k];
    const double lhs = div_phit[j];
    const double rhs = fe.f3.value() * div_t[j] + tgrad;
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    worst = std::max(worst, std::abs(lhs - rhs));
  }

  // div(Hess phi) = Ric(grad phi, .) + d(lap phi), and
  // (1/2) d|grad phi|^2 = Hess phi(grad phi, .).
  const Vec div_hess = ge.divergence02(fe.hess_jet);
  for (int j = 0; j < n; ++j) {
    double ricgrad = 0, hessgrad = 0;
    for (int k = 0; k < n; ++k) {
      ricgrad += ric(j, k) * fe.grad[k];
      hessgrad += fe.hess(j, k) * fe.grad[k];
    }
    const double dlap = fe.lap_jet.derivative(j).value();
    scale = std::max({scale, std::abs(div_hess[j]), std::abs(ricgrad + dlap)});
    worst = std::max(worst, std::abs(div_hess[j] - ricgrad - dlap));
    const double dnorm = fe.gradnorm2_jet.derivative(j).value();
    scale = std::max({scale, std::abs(0.5 * dnorm), std::abs(hessgrad)});
    worst = std::max(worst, std::abs(0.5 * dnorm - hessgrad));
  }
  return worst / (1.0 + scale);
}

namespace {

MetricField conformal_metric(const MetricField& m, const ScalarField& sigma) {
  const int n = m.dim();
  const ExprPtr factor = make_unary(
      UnaryOp::Exp, make_binary(BinaryOp::Mul, make_constant(2.0), sigma.expr()));
  std::vector<std::vector<ExprPtr>> comps(static_cast<size_t>(n),
                                          std::vector<ExprPtr>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      comps[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          make_binary(BinaryOp::Mul, factor, m.component(i, j));
      comps[static_cast<size_t>(j)][static_cast<size_t>(i)] =
          comps[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  return MetricField(m.chart(), std::move(comps));
}

Ten4 weyl_one_up(const GeometryEvaluation& ge) {
  const Ten4& w = ge.weyl();
  const auto& gi = ge.metric_value().g_inv;
  const int n = ge.dim();
  Ten4 up;
  up.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0;
          for (int m = 0; m < n; ++m) s += gi(i, m) * w(m, j, k, l);
          up(i, j, k, l) = s;
        }
  return up;
}

struct SelfDualVerdicts {
  bool ortho = false, null = false, wminus = false;
  double wplus_norm = 0, wminus_norm = 0;
};

SelfDualVerdicts selfdual_verdicts(const GeometryEvaluation& ge, int orientation) {
  const auto& mv = ge.metric_value();
  const HodgeOperator h = hodge_star(mv, orientation);
  const WeylEndomorphism split = weyl_split(ge.weyl(), mv, h);
  const Frame on = orthonormal_frame(mv, orientation);
  const SelfDualReport r1 = selfdual_check(ge.weyl(), mv, on, split);
  const Frame nf = null_frame(mv, orientation);
  const SelfDualReport r2 = selfdual_check(ge.weyl(), mv, nf, split);
  SelfDualVerdicts v;
  v.ortho = r1.frame_defect <= r1.tolerance;
  v.null = r2.frame_defect <= r2.tolerance;
  v.wminus = r1.wminus_norm <= r1.tolerance;
  v.wplus_norm = r1.wplus_norm;
  v.wminus_norm = r1.wminus_norm;
  return v;
}

}  // namespace

const std::vector<CheckSpec>& check_catalog() {
  static const std::vector<CheckSpec> catalog = {
      {"bianchi", 1e-10, "first Bianchi identity of the lowered curvature"},
      {"symmetries", 1e-12, "pair symmetries of curvature and Ricci"},
      {"bianchi2", 1e-9, "contracted second Bianchi identity 2 div Ric = dr"},
      {"metric_compat", 1e-12, "covariant constancy of the metric"},
      {"weyl_trace", 1e-10, "Weyl tensor is trace-free"},
      {"weyl_zero", 1e-9, "Weyl tensor vanishes (conformally flat inputs)"},
      {"weyl_conformal", 1e-8, "conformal invariance of the (1,3) Weyl tensor (needs phi)"},
      {"cotton_trace", 1e-10, "Cotton tensor is trace-free and skew"},
      {"cotton_weyl", 1e-8, "div W is a constant multiple of the Cotton tensor"},
      {"div_identities", 1e-8, "divergence identities for phi Ric and Hess phi (needs phi)"},
      {"soliton_residual", 1e-8, "Ric + h Hess f - lambda g (needs f, h, lambda)"},
      {"lemma1", 1e-10, "trace/gradient/curvature identities of the f-soliton"},
      {"lemma2", 1e-10, "Weyl-contraction identity of the f-soliton"},
      {"isotropy", std::numeric_limits<double>::infinity(),
       "gradient norm, Q grad f - lambda grad f, scalar relation (diagnostic)"},
      {"solve_lambda", 1e-8, "least-squares soliton function fit (needs f, h)"},
      {"gqe_residual", 1e-10, "Ric + Hess f - (1/m) df df - lambda g (needs f, lambda)"},
      {"gqe_transform", 1e-12, "phi = e^{-f/m} Hessian transformation identity (needs f)"},
      {"hodge", 1e-10, "Hodge star squared is +/- identity"},
      {"weyl_split", 1e-10, "self-dual split algebra of the Weyl endomorphism"},
      {"selfdual", 0.5, "agreement of the frame criteria with the anti-self-dual norm"},
      {"log_hessian", 1e-10, "Hessian of ln h identity (needs phi > 0)"},
      {"warped_formulas", 1e-9, "warped-product Ricci block formulas (construction warped)"},
      {"sss_formulas", 1e-9, "static-metric connection/Ricci/scalar formulas (construction sss)"},
      {"walker_curvature", 1e-10, "displayed Walker curvature components (construction walker)"},
      {"walker_system", 1e-8, "printed Walker soliton system lines (construction walker, f, lambda)"},
      {"sss_soliton", 1e-8, "static-spacetime soliton construction residual (construction sss, phi)"},
  };
  return catalog;
}

bool check_exists(const std::string& name) {
  for (const auto& c : check_catalog())
    if (c.name == name) return true;
  return false;
}

double measured_kappa() {
  static const double kappa = [] {
    WalkerSpec ws;
    ws.b = parse("x*y^2*z", walker_chart().coords);
    const MetricField g = walker_build(ws);
    Region region;
    region.bounds = {{0.3, 1.2}, {0.3, 1.2}, {0.3, 1.2}, {0.3, 1.2}};
    const auto pts = sample_points(region, 10, 0xA11CEULL);
    double num = 0, den = 0;
    for (const auto& p : pts) {
      GeometryEvaluation ge(g, p);
      const Ten3& dw = ge.div_weyl();
      const Ten3& c = ge.cotton();
      for (int i = 0; i < 64; ++i) {
        num += dw.v[static_cast<size_t>(i)] * c.v[static_cast<size_t>(i)];
        den += c.v[static_cast<size_t>(i)] * c.v[static_cast<size_t>(i)];
      }
    }
    return num / den;
  }();
  return kappa;
}

CheckResult run_named_check(const std::string& name, const Instance& inst,
                            int samples, uint64_t seed,
                            std::optional<double> tolerance_override) {
  const CheckSpec* spec = nullptr;
  for (const auto& c : check_catalog())
    if (c.name == name) spec = &c;
  if (!spec) throw Error(ErrorKind::ConfigError, "unknown check name '" + name + "'");
  const double tol = tolerance_override.value_or(spec->default_tolerance);
  const MetricField& metric = inst.metric;

  auto need_f = [&]() -> const ScalarField& {
    if (!inst.f) throw Error(ErrorKind::ConfigError, "check '" + name + "' needs f");
    return *inst.f;
  };
  auto need_phi = [&]() -> const ScalarField& {
    if (!inst.phi) throw Error(ErrorKind::ConfigError, "check '" + name + "' needs phi");
    return *inst.phi;
  };
  auto need_lambda = [&]() -> const LambdaSpec& {
    if (!inst.lambda) throw Error(ErrorKind::ConfigError, "check '" + name + "' needs lambda");
    return *inst.lambda;
  };

  PointCheck fn;
  std::vector<std::pair<std::string, double>> pre_extras;

  if (name == "bianchi") {
    fn = [&metric](std::span<const double> p) {
      return PointOutcome{false, "", bianchi1_defect(GeometryEvaluation(metric, p)), {}};
    };
  } else if (name == "symmetries") {
    fn = [&metric](std::span<const double> p) {
      return PointOutcome{false, "", symmetry_defect(GeometryEvaluation(metric, p)), {}};
    };
  } else if (name == "bianchi2") {
    fn = [&metric](std::span<const double> p) {
      return PointOutcome{false, "", bianchi2_defect(GeometryEvaluation(metric, p)), {}};
    };
  } else if (name == "metric_compat") {
    fn = [&metric](std::span<const double> p) {
      return PointOutcome{false, "", metric_compat_defect(GeometryEvaluation(metric, p)), {}};
    };
  } else if (name == "weyl_trace") {
    fn = [&metric](std::span<const double> p) {
      return PointOutcome{false, "", weyl_trace_defect(GeometryEvaluation(metric, p)), {}};
    };
  } else if (name == "weyl_zero") {
    fn = [&metric](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      return PointOutcome{
          false, "", max_abs(ge.weyl()) / (1.0 + max_abs(ge.curvature().riem_lo)), {}};
    };
  } else if (name == "weyl_conformal") {
    const MetricField conf = conformal_metric(metric, need_phi());
    fn = [&metric, conf](std::span<const double> p) {
      GeometryEvaluation ge1(metric, p);
      GeometryEvaluation ge2(conf, p);
      const Ten4 w1 = weyl_one_up(ge1), w2 = weyl_one_up(ge2);
      double worst = 0;
      const int n = ge1.dim();
      for (int i = 0; i < n * n * n * n; ++i)
        worst = std::max(worst, std::abs(w1.v[static_cast<size_t>(i)] -
                                         w2.v[static_cast<size_t>(i)]));
      return PointOutcome{false, "", worst / (1.0 + max_abs(w1)), {}};
    };
  } else if (name == "cotton_trace") {
    fn = [&metric](std::span<const double> p) {
      return PointOutcome{false, "", cotton_trace_defect(GeometryEvaluation(metric, p)), {}};
    };
  } else if (name == "cotton_weyl") {
    double kappa;
    if (inst.kappa_fixed) {
      kappa = *inst.kappa_fixed;
    } else {
      // Fit the ratio over this run's own sample first.
      const auto pts = sample_points(inst.region, samples, seed);
      double num = 0, den = 0;
      for (const auto& p : pts) {
        try {
          GeometryEvaluation ge(metric, p);
          const Ten3& dw = ge.div_weyl();
          const Ten3& c = ge.cotton();
          const int sz = ge.dim() * ge.dim() * ge.dim();
          for (int i = 0; i < sz; ++i) {
            num += dw.v[static_cast<size_t>(i)] * c.v[static_cast<size_t>(i)];
            den += c.v[static_cast<size_t>(i)] * c.v[static_cast<size_t>(i)];
          }
        } catch (const Error&) {
        }
      }
      kappa = den > 1e-24 ? num / den : std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isnan(kappa)) pre_extras.emplace_back("kappa", kappa);
    fn = [&metric, kappa](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      const Ten3& dw = ge.div_weyl();
      const Ten3& c = ge.cotton();
      PointOutcome out;
      if (std::isnan(kappa)) {
        // ratio undefined: then div W itself must vanish
        out.defect = max_abs(dw) / (1.0 + max_abs(ge.curvature().riem_lo));
        return out;
      }
      double worst = 0;
      const int sz = ge.dim() * ge.dim() * ge.dim();
      for (int i = 0; i < sz; ++i)
        worst = std::max(worst, std::abs(dw.v[static_cast<size_t>(i)] -
                                         kappa * c.v[static_cast<size_t>(i)]));
      out.defect = worst / (1.0 + std::max(max_abs(dw), max_abs(c)));
      return out;
    };
  } else if (name == "div_identities") {
    const ScalarField& phi = need_phi();
    fn = [&metric, &phi](std::span<const double> p) {
      return PointOutcome{
          false, "", div_identities_defect(GeometryEvaluation(metric, p), phi), {}};
    };
  } else if (name == "soliton_residual") {
    SolitonInstance s{metric, need_f(), inst.h.value_or(HSpec::one()), need_lambda()};
    fn = [s](std::span<const double> p) {
      GeometryEvaluation ge(s.metric, p);
      PointOutcome out;
      out.defect = soliton_residual(ge, s).max_abs;
      return out;
    };
  } else if (name == "lemma1" || name == "lemma2") {
    SolitonInstance s{metric, need_f(), inst.h.value_or(HSpec::equal_to_f()), need_lambda()};
    const bool second = name == "lemma2";
    fn = [s, second](std::span<const double> p) {
      GeometryEvaluation ge(s.metric, p);
      PointOutcome out;
      if (second) {
        const Lemma2Result r = lemma2_check(ge, s);
        out.defect = r.defect;
        if (r.advisory) out.extras.emplace_back("advisory_points", 1.0);
        out.extras.emplace_back("term_df_hess", r.term_magnitudes[3]);
        out.extras.emplace_back("term_lap_df", r.term_magnitudes[4]);
        out.extras.emplace_back("term_dnorm", r.term_magnitudes[5]);
      } else {
        const Lemma1Result r = lemma1_check(ge, s);
        out.defect = std::max({r.defects[0], r.defects[1], r.defects[2]});
        if (r.advisory) out.extras.emplace_back("advisory_points", 1.0);
      }
      return out;
    };
  } else if (name == "isotropy") {
    SolitonInstance s{metric, need_f(), inst.h.value_or(HSpec::equal_to_f()), need_lambda()};
    fn = [s](std::span<const double> p) {
      GeometryEvaluation ge(s.metric, p);
      const IsotropyDiagnostics d = isotropy_diagnostics(ge, s);
      PointOutcome out;
      out.defect = std::max(d.qgradf_defect, d.scalar_relation_defect);
      out.extras.emplace_back("max_gradnorm2_abs", std::abs(d.gradnorm2));
      return out;
    };
  } else if (name == "solve_lambda") {
    const ScalarField& f = need_f();
    const HSpec h = inst.h.value_or(HSpec::one());
    const std::optional<LambdaSpec> lam = inst.lambda;
    fn = [&metric, &f, h, lam](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      const LambdaFit fit = solve_lambda(ge, f, h);
      PointOutcome out;
      out.defect = fit.defect;
      if (lam)
        out.defect = std::max(out.defect, std::abs(fit.lambda_fit - lambda_value(ge, *lam)));
      out.extras.emplace_back("max_lambda_fit_abs", std::abs(fit.lambda_fit));
      return out;
    };
  } else if (name == "gqe_residual") {
    GqeInstance q{metric, need_f(), 1.0 / inst.gqe_m, need_lambda()};
    fn = [q](std::span<const double> p) {
      GeometryEvaluation ge(q.metric, p);
      PointOutcome out;
      out.defect = gqe_residual(ge, q).max_abs;
      return out;
    };
  } else if (name == "gqe_transform") {
    const ScalarField& f = need_f();
    fn = [&metric, &f](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      double worst = 0;
      for (double m : {1.0, 2.0, 4.0}) worst = std::max(worst, gqe_transform_defect(ge, f, m));
      return PointOutcome{false, "", worst, {}};
    };
  } else if (name == "hodge") {
    const int orient = inst.orientation;
    fn = [&metric, orient](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      const HodgeOperator h = hodge_star(ge.metric_value(), orient);
      double worst = 0;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          double sq = 0;
          for (int k = 0; k < 6; ++k) sq += h.star(i, k) * h.star(k, j);
          worst = std::max(worst, std::abs(sq - (i == j ? h.s : 0.0)));
        }
      PointOutcome out;
      out.defect = worst / (1.0 + max_abs(h.star));
      out.extras.emplace_back("star_squared_sign", h.s);
      return out;
    };
  } else if (name == "weyl_split") {
    const int orient = inst.orientation;
    fn = [&metric, orient](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      const auto& mv = ge.metric_value();
      const HodgeOperator h = hodge_star(mv, orient);
      const WeylEndomorphism we = weyl_split(ge.weyl(), mv, h);
      const TwoFormBasis basis = two_form_basis(mv, orient);
      double worst = 0;
      const double wscale = 1.0 + max_abs(we.w);
      const double oscale = 1.0 + max_abs(we.plus) * max_abs(we.minus) * max_abs(basis.g2);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          worst = std::max(worst,
                           std::abs(we.plus(i, j) + we.minus(i, j) - we.w(i, j)) / wscale);
          double ortho = 0, sa1 = 0, sa2 = 0;
          for (int k = 0; k < 6; ++k) {
            for (int l = 0; l < 6; ++l)
              ortho += we.plus(k, i) * basis.g2(k, l) * we.minus(l, j);
            sa1 += h.star(k, i) * basis.g2(k, j);
            sa2 += basis.g2(i, k) * h.star(k, j);
          }
          worst = std::max(worst, std::abs(ortho) / oscale);
          worst = std::max(worst, std::abs(sa1 - sa2) / (1.0 + max_abs(basis.g2)));
        }
      double tr = 0;
      for (int i = 0; i < 6; ++i) tr += h.star(i, i);
      worst = std::max(worst, std::abs(tr) / 6.0);  // the +/-1 eigenspaces are 3+3
      return PointOutcome{false, "", worst, {}};
    };
  } else if (name == "selfdual") {
    const int orient = inst.orientation;
    fn = [&metric, orient](std::span<const double> p) {
      GeometryEvaluation ge(metric, p);
      const SelfDualVerdicts v = selfdual_verdicts(ge, orient);
      PointOutcome out;
      const bool agree = v.ortho == v.null && v.null == v.wminus;
      out.defect = agree ? 0.0 : 1.0;
      out.extras.emplace_back("selfdual_points", v.wminus ? 1.0 : 0.0);
      out.extras.emplace_back("max_wminus_norm", v.wminus_norm);
      out.extras.emplace_back("max_wplus_norm", v.wplus_norm);
      return out;
    };
  } else if (name == "log_hessian") {
    const ScalarField& phi = need_phi();
    fn = [&metric, &phi](std::span<const double> p) {
      return PointOutcome{false, "", log_hessian_identity(metric, phi, p), {}};
    };
  } else if (name == "warped_formulas") {
    if (!inst.warped) throw Error(ErrorKind::ConfigError, "check needs construction warped");
    const WarpedProduct& wp = *inst.warped;
    const std::optional<double> mu = inst.warped_mu;
    fn = [&wp, mu](std::span<const double> p) {
      const WarpedRicciDefects d = warped_ricci_check(wp, p);
      PointOutcome out;
      out.defect = std::max({d.horizontal, d.mixed, d.vertical}) / d.scale;
      if (mu) out.extras.emplace_back("einstein_probe", warped_einstein_probe(wp, *mu, p));
      return out;
    };
  } else if (name == "sss_formulas") {
    if (!inst.sss) throw Error(ErrorKind::ConfigError, "check needs construction sss");
    const SssProduct& sp = *inst.sss;
    fn = [&sp](std::span<const double> p) {
      const SssFormulaDefects d = sss_formula_check(sp, p);
      PointOutcome out;
      out.defect =
          std::max({d.tt_ricci, d.mixed_ricci, d.fiber_ricci, d.connection, d.scalar}) / d.scale;
      return out;
    };
  } else if (name == "walker_curvature") {
    if (!inst.walker_b) throw Error(ErrorKind::ConfigError, "check needs construction walker");
    const ExprPtr b = *inst.walker_b;
    fn = [b](std::span<const double> p) {
      const WalkerCurvatureDefects d = walker_curvature_check(b, p);
      PointOutcome out;
      out.defect = std::max(d.display_defect / d.scale, d.unlisted_ricci_max);
      out.extras.emplace_back("max_extra_riemann", d.extra_riemann_max);
      return out;
    };
  } else if (name == "walker_system") {
    if (!inst.walker_b) throw Error(ErrorKind::ConfigError, "check needs construction walker");
    const ExprPtr b = *inst.walker_b;
    const ScalarField& f = need_f();
    const LambdaSpec& lam = need_lambda();
    fn = [b, &f, &lam](std::span<const double> p) {
      const WalkerSystemResidual r = walker_system_residual(f, lam, b, p);
      PointOutcome out;
      out.defect = r.max_abs;
      static const char* kComp[10] = {"xx", "xy", "xz", "xt", "yy",
                                      "yz", "yt", "zz", "zt", "tt"};
      for (int i = 0; i < 10; ++i)
        out.extras.emplace_back(std::string("line_") + kComp[i],
                                std::abs(r.lines[static_cast<size_t>(i)]));
      return out;
    };
  } else if (name == "sss_soliton") {
    if (!inst.sss_spec) throw Error(ErrorKind::ConfigError, "check needs construction sss");
    const MetricField fiber = inst.sss_spec->fiber;
    const std::string time_coord = inst.sss_spec->time_coord;
    const ScalarField& phi = need_phi();
    fn = [fiber, time_coord, &phi](std::span<const double> p) {
      const SssSolitonResult r = sss_soliton_check(fiber, phi, time_coord, p);
      PointOutcome out;
      out.defect = r.conclusion_residual;
      out.extras.emplace_back("max_hypothesis_residual", r.hypothesis_residual);
      out.extras.emplace_back("max_abs_lambda", std::abs(r.lambda));
      return out;
    };
  } else {
    throw Error(ErrorKind::ConfigError, "check '" + name + "' is not wired");
  }

  CheckResult res = run_point_check(name, tol, inst.region, samples, seed, fn);
  for (const auto& [k, v] : pre_extras) merge_extra(res.extras, k, v);
  return res;
}

}  // namespace rck
