#pragma once

#include <optional>
#include <string>

#include "geometry.hpp"
#include "soliton.hpp"

namespace rck {

// Builders for warped products g_B + phi^2 g_F, standard static metrics
// -h^2 dt^2 (+) g_bar, and canonical Walker metrics, together with checks of
// the corresponding block curvature formulas against the direct engine.
//
// Product charts mangle coordinate names with base_/fiber_ prefixes (the
// time coordinate keeps its own name) so expression namespaces stay disjoint.

struct WarpedSpec {
  MetricField base;   // dim k
  MetricField fiber;  // dim m
  ScalarField phi;    // on the base chart, > 0
  std::optional<double> mu;  // fiber Einstein constant, when known
};

struct WarpedProduct {
  MetricField product;      // chart: base_* then fiber_*
  Chart base_chart, fiber_chart;  // mangled sub-charts
  MetricField base, fiber;  // renamed onto the sub-charts
  ScalarField phi;          // renamed onto the base sub-chart
  int k = 0, m = 0;
};

struct WarpedRicciDefects {
  double horizontal = 0;  // Ric = Ric_B - (m/phi) Hess_B phi
  double mixed = 0;       // Ric(X,V) = 0
  double vertical = 0;    // Ric = Ric_F - [lap phi/phi + (m-1)|grad phi|^2/phi^2] g
  double scale = 0;
};

WarpedProduct warped_build(const WarpedSpec& ws);
WarpedRicciDefects warped_ricci_check(const WarpedProduct& wp, std::span<const double> p);
// | mu - (phi lap phi + (m-1)||grad phi||^2 + lambda phi^2) | with lambda
// fitted pointwise from the base block equation.
double warped_einstein_probe(const WarpedProduct& wp, double mu, std::span<const double> p);

struct SssSpec {
  MetricField fiber;   // dim n, Riemannian
  ScalarField lapse;   // h > 0 on the fiber chart
  std::string time_coord = "t";
};

struct SssProduct {
  MetricField product;  // chart: t then fiber_*
  Chart fiber_chart;    // mangled
  MetricField fiber;
  ScalarField lapse;    // renamed
  std::string time_coord;
  int nf = 0;
};

struct SssFormulaDefects {
  double tt_ricci = 0;     // Ric(dt,dt) vs h lap h
  double mixed_ricci = 0;  // Ric(dt,V) vs 0
  double fiber_ricci = 0;  // Ric(U,V) vs Ric_bar - Hess h / h
  double connection = 0;   // displayed Christoffel families
  double scalar = 0;       // r vs r_bar - 2 lap h / h
  double scale = 0;
};

SssProduct sss_build(const SssSpec& ss);
SssFormulaDefects sss_formula_check(const SssProduct& sp, std::span<const double> p);

// Pointwise defect of Hess(ln h) = (1/h) Hess h - (1/h^2) dh (x) dh.
double log_hessian_identity(const MetricField& m, const ScalarField& h,
                            std::span<const double> p);

// Residual of Ric + Hess psi - dpsi (x) dpsi = lambda g + (m/phi) Hess phi
// with psi = -ln h, assembled from parts.  Returns {max_abs, scale}.
struct RicciHessianClassResidual {
  double max_abs = 0;
  double scale = 0;
};
RicciHessianClassResidual ricci_hessian_class_residual(
    const MetricField& m, const ScalarField& h, const ScalarField& phi,
    const LambdaSpec& lambda, double em, std::span<const double> p);

// Static-spacetime soliton construction: lapse forced to e^{-phi}.
// Conclusion: residual of Ric + Hess phi - lambda g on the product with
// lambda = -(2 lap h + h lap phi)/h (fiber Laplacians).  Hypothesis: the
// fiber's m=4 generalized quasi-Einstein residual with f = 2 phi and the
// same lambda.
struct SssSolitonResult {
  double conclusion_residual = 0;
  double conclusion_scale = 0;
  double hypothesis_residual = 0;
  double hypothesis_scale = 0;
  double lambda = 0;
};
SssSolitonResult sss_soliton_check(const MetricField& fiber, const ScalarField& phi,
                                   const std::string& time_coord,
                                   std::span<const double> product_point);

// Radial profile construction on flat R^n: integrates the radial reduction
// of the m=4 quasi-Einstein equation and shoots on f'(rho_lo) to minimize
// the residual that remains once lambda is forced to the static-spacetime
// value.  The flat radial system is overdetermined, so the feasible branch
// is the one the shot converges to; the measured residual is reported
// either way.
struct RadialGqeOptions {
  int dim = 3;
  double rho_lo = 1.0, rho_hi = 2.0;
  double f0 = 0.0;
  std::optional<double> fprime0;  // pinned slope: integrate without shooting
  int samples = 201;
  double shoot_lo = -2.0, shoot_hi = 2.0;
  double target_residual = 1e-6;
};

struct RadialGqeResult {
  RadialSpline profile;
  double shot_fprime0 = 0;
  double max_gqe_residual = 0;
  bool converged = false;
};

RadialGqeResult radial_gqe_solve(const RadialGqeOptions& opt);

// Canonical 4-dimensional Walker metric on the chart (t,x,y,z):
//   g_tt = b, g_ty = 1, g_tz = c, g_xz = 1, g_zz = a, det = 1 identically.
struct WalkerSpec {
  ExprPtr a, b, c;  // expressions in x,y,z,t; null means 0
};

MetricField walker_build(const WalkerSpec& ws);
const Chart& walker_chart();

// Engine curvature vs the displayed components for the b-only case:
//   R(dy,dt)dy = (1/2) b_yy dy
//   R(dy,dt)dt = (1/2) b b_yy dy - (1/2) b_yy dt
//   Ric(dx,dt) = b_xy/2, Ric(dy,dt) = b_yy/2, Ric(dz,dt) = b_yz/2,
//   Ric(dt,dt) = -b_zx + b b_yy / 2
struct WalkerCurvatureDefects {
  double display_defect = 0;       // printed coefficients (gate)
  double unlisted_ricci_max = 0;   // completeness of the Ricci list (gate)
  double extra_riemann_max = 0;    // components the display leaves implicit
  double scale = 0;
};
WalkerCurvatureDefects walker_curvature_check(const ExprPtr& b, std::span<const double> p);

// The printed soliton system for the b-only Walker metric, evaluated line by
// line exactly as displayed (including its Hessian terms); component order:
// xx, xy, xz, xt, yy, yz, yt, zz, zt, tt.
struct WalkerSystemResidual {
  std::array<double, 10> lines{};
  double max_abs = 0;
};
WalkerSystemResidual walker_system_residual(const ScalarField& f, const LambdaSpec& lambda,
                                            const ExprPtr& b, std::span<const double> p);

}  // namespace rck
