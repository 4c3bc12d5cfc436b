#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "constructions.hpp"
#include "oracles.hpp"

using namespace rck;

namespace {

MetricField flat3() {
  return parse_metric(Chart({"x1", "x2", "x3"}),
                      {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
}

MetricField sphere2() {
  return parse_metric(Chart({"th", "ph"}), {{"1", "0"}, {"0", "sin(th)^2"}});
}

MetricField interval() { return parse_metric(Chart({"s"}), {{"1"}}); }

}  // namespace

TEST_CASE("unwarped product reduces to block-diagonal Ricci") {
  WarpedSpec ws;
  ws.base = interval();
  ws.fiber = sphere2();
  ws.phi = ScalarField(parse("1", ws.base.chart().coords));
  const WarpedProduct wp = warped_build(ws);
  CHECK(wp.product.chart().coords ==
        std::vector<std::string>{"base_s", "fiber_th", "fiber_ph"});
  const WarpedRicciDefects d = warped_ricci_check(wp, std::vector<double>{0.3, 1.1, 0.4});
  CHECK(d.horizontal <= 1e-10);
  CHECK(d.mixed <= 1e-10);
  CHECK(d.vertical <= 1e-10);
}

TEST_CASE("exponential warping over a flat fiber") {
  WarpedSpec ws;
  ws.base = interval();
  ws.fiber = flat3();
  ws.phi = ScalarField(parse("exp(s)", ws.base.chart().coords));
  const WarpedProduct wp = warped_build(ws);
  const std::vector<double> p = {0.2, 0.5, -0.3, 0.8};
  const WarpedRicciDefects d = warped_ricci_check(wp, p);
  CHECK(d.horizontal <= 1e-9);
  CHECK(d.mixed <= 1e-9);
  CHECK(d.vertical <= 1e-9);
}

TEST_CASE("round-sphere warping: Einstein probe") {
  WarpedSpec ws;
  ws.base = interval();
  ws.fiber = sphere2();
  ws.phi = ScalarField(parse("sin(s)", ws.base.chart().coords));
  const WarpedProduct wp = warped_build(ws);
  const std::vector<double> p = {1.1, 0.8, 0.4};
  CHECK(warped_einstein_probe(wp, 1.0, p) <= 1e-12);
  GeometryEvaluation ge(wp.product, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(ge.curvature().ric(i, j) ==
            doctest::Approx(2.0 * ge.metric_value().g(i, j)).epsilon(1e-11));
}

TEST_CASE("warping must stay positive") {
  WarpedSpec ws;
  ws.base = interval();
  ws.fiber = flat3();
  ws.phi = ScalarField(parse("s", ws.base.chart().coords));
  const WarpedProduct wp = warped_build(ws);
  CHECK_THROWS_AS(warped_ricci_check(wp, std::vector<double>{-0.5, 0, 0, 0}), Error);
}

TEST_CASE("static metric with constant lapse is an unwarped product") {
  SssSpec ss;
  ss.fiber = sphere2();
  ss.lapse = ScalarField(parse("1", ss.fiber.chart().coords));
  const SssProduct sp = sss_build(ss);
  const std::vector<double> p = {0.7, 1.2, -0.3};
  const SssFormulaDefects d = sss_formula_check(sp, p);
  CHECK(d.tt_ricci <= 1e-12);
  CHECK(d.mixed_ricci <= 1e-12);
  CHECK(d.fiber_ricci <= 1e-12);
  CHECK(d.connection <= 1e-12);
  CHECK(d.scalar <= 1e-12);
  GeometryEvaluation ge(sp.product, p);
  CHECK(ge.curvature().scalar == doctest::Approx(2.0).epsilon(1e-12));  // r of the sphere
}

TEST_CASE("static metric scalar curvature: flat fiber with exponential lapse") {
  SssSpec ss;
  ss.fiber = flat3();
  ss.lapse = ScalarField(parse("exp(x1)", ss.fiber.chart().coords));
  const SssProduct sp = sss_build(ss);
  for (const auto& p : sample_points(Region{{{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}}, 5, 99)) {
    const SssFormulaDefects d = sss_formula_check(sp, p);
    CHECK(std::max({d.tt_ricci, d.mixed_ricci, d.fiber_ricci, d.connection, d.scalar}) <= 1e-10);
    GeometryEvaluation ge(sp.product, p);
    CHECK(ge.curvature().scalar == doctest::Approx(-2.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(
      [&] {
        SssSpec bad;
        bad.fiber = flat3();
        bad.lapse = ScalarField(parse("x1", bad.fiber.chart().coords));
        const SssProduct sb = sss_build(bad);
        sss_formula_check(sb, std::vector<double>{0.0, -0.5, 0.0, 0.0});
      }(),
      Error);
}

TEST_CASE("log-Hessian identity") {
  CHECK(log_hessian_identity(flat3(), ScalarField(parse("exp(x1)", flat3().chart().coords)),
                             std::vector<double>{0.4, 0.1, -0.7}) <= 1e-13);
  Rng rng(0x10eF);
  for (int t = 0; t < 5; ++t) {
    const testing::Poly poly = testing::random_poly(rng, 2, 3);
    const std::string h = "2.5+0.1*(" + poly.text({"th", "ph"}) + ")^2+0.2*sin(th)";
    CHECK(log_hessian_identity(sphere2(), ScalarField(parse(h, sphere2().chart().coords)),
                               std::vector<double>{1.0 + 0.2 * t, 0.3 * t - 0.5}) <= 1e-10);
  }
}

TEST_CASE("Ricci-Hessian class residual matches its untransformed form") {
  // With psi = -ln h the assembled residual must coincide exactly with the
  // residual of Ric - Hess h / h - (m/phi) Hess phi - lambda g.
  const MetricField g = sphere2();
  const auto& coords = g.chart().coords;
  const ScalarField h(parse("1.5+0.3*sin(th)*cos(ph)", coords));
  const ScalarField phi(parse("exp(0.2*cos(th))", coords));
  const LambdaSpec lam = LambdaSpec::of_constant(0.4);
  const double em = 3.0;
  const std::vector<double> p = {1.2, 0.7};
  const RicciHessianClassResidual r = ricci_hessian_class_residual(g, h, phi, lam, em, p);

  GeometryEvaluation ge(g, p);
  const auto h_fe = ge.field_eval(h);
  const auto phi_fe = ge.field_eval(phi);
  double expect = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double lhs = ge.curvature().ric(i, j) - h_fe.hess(i, j) / h_fe.f3.value() -
                         (em / phi_fe.f3.value()) * phi_fe.hess(i, j) -
                         0.4 * ge.metric_value().g(i, j);
      expect = std::max(expect, std::abs(lhs));
    }
  CHECK(r.max_abs == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("static soliton construction: trivial and mismatched fibers") {
  const MetricField fiber = flat3();
  const ScalarField phi_const(parse("0.4", fiber.chart().coords));
  const SssSolitonResult trivial =
      sss_soliton_check(fiber, phi_const, "t", std::vector<double>{0.1, 0.5, 0.6, 0.7});
  CHECK(std::abs(trivial.lambda) <= 1e-13);
  CHECK(trivial.conclusion_residual <= 1e-13);
  CHECK(trivial.hypothesis_residual <= 1e-13);

  const ScalarField bad(parse("ln(x1^2+x2^2+x3^2)", fiber.chart().coords));
  const SssSolitonResult neg =
      sss_soliton_check(fiber, bad, "t", std::vector<double>{0.1, 0.8, 0.7, 0.9});
  CHECK(neg.hypothesis_residual > 1e-3);
  CHECK(neg.conclusion_residual > 1e-3);
}

TEST_CASE("radial profile construction") {
  RadialGqeOptions opt;  // n = 3, [1, 2]
  const RadialGqeResult res = radial_gqe_solve(opt);
  CHECK(res.converged);
  CHECK(res.max_gqe_residual <= 1e-6);
  CHECK(std::abs(res.shot_fprime0) <= 1e-6);  // the feasible branch is constant

  // trivial pinned shot
  RadialGqeOptions pin = opt;
  pin.fprime0 = 0.0;
  const RadialGqeResult triv = radial_gqe_solve(pin);
  CHECK(triv.converged);
  CHECK(triv.max_gqe_residual <= 1e-12);

  // a pinned nontrivial slope reports its infeasibility instead of lying
  pin.fprime0 = 0.8;
  const RadialGqeResult infeasible = radial_gqe_solve(pin);
  CHECK(!infeasible.converged);
  CHECK(infeasible.max_gqe_residual > 1e-3);

  RadialGqeOptions bad = opt;
  bad.rho_lo = -0.5;
  CHECK_THROWS_AS(radial_gqe_solve(bad), Error);
  bad.rho_lo = 0.0;
  CHECK_THROWS_AS(radial_gqe_solve(bad), Error);

  // a shooting bracket that excludes the feasible branch cannot converge
  RadialGqeOptions stuck = opt;
  stuck.shoot_lo = 0.5;
  stuck.shoot_hi = 1.0;
  try {
    radial_gqe_solve(stuck);
    FAIL("expected ShootingNotConverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ShootingNotConverged);
  }

  // runaway pinned slopes surface as integration failures
  RadialGqeOptions blow = opt;
  blow.fprime0 = -1e4;
  try {
    radial_gqe_solve(blow);
    FAIL("expected IntegrationFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IntegrationFailure);
  }
}

TEST_CASE("radial spline fields serialize and round trip") {
  RadialGqeOptions opt;
  opt.fprime0 = 0.0;
  opt.f0 = 1.25;
  const RadialGqeResult res = radial_gqe_solve(opt);
  const std::string text = res.profile.serialize();
  const RadialSpline back = RadialSpline::deserialize(text);
  CHECK(back.values.size() == res.profile.values.size());
  for (double rho : {1.0, 1.3, 1.77, 2.0}) {
    const auto a = res.profile.eval(rho);
    const auto b = back.eval(rho);
    for (int k = 0; k < 4; ++k) CHECK(a[static_cast<size_t>(k)] == doctest::Approx(b[static_cast<size_t>(k)]).epsilon(1e-14));
  }
  // consumable as a ScalarField
  const ScalarField f = ScalarField::radial(back, {"x1", "x2", "x3"});
  const Jet j = f.eval(flat3().chart().coords, std::vector<double>{0.8, 0.7, 0.9}, 2);
  CHECK(j.value() == doctest::Approx(1.25).epsilon(1e-10));
  CHECK_THROWS_AS(RadialSpline::deserialize("not a field file"), Error);
}

TEST_CASE("Walker canonical form: unit determinant for any a, b, c") {
  Rng rng(0xA1B2);
  const auto& coords = walker_chart().coords;
  for (int t = 0; t < 10; ++t) {
    WalkerSpec ws;
    ws.a = parse(testing::random_poly(rng, 4, 2).text({"x", "y", "z", "t"}), coords);
    ws.b = parse(testing::random_poly(rng, 4, 2).text({"x", "y", "z", "t"}), coords);
    ws.c = parse(testing::random_poly(rng, 4, 2).text({"x", "y", "z", "t"}), coords);
    const MetricField g = walker_build(ws);
    std::vector<double> p;
    for (int i = 0; i < 4; ++i) p.push_back(rng.uniform(-1, 1));
    CHECK(metric_at(g, p).det == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Walker displayed curvature, pointwise examples") {
  // b = y^2 gives Ric(dy,dt) = 1 everywhere
  {
    WalkerSpec ws;
    ws.b = parse("y^2", walker_chart().coords);
    GeometryEvaluation ge(walker_build(ws), std::vector<double>{0.3, -0.8, 0.6, 1.4});
    CHECK(ge.curvature().ric(2, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // b = x y^2 z + 5 at (t,x,y,z) = (0,1,1,1): Ric(dx,dt) = y z = 1
  {
    WalkerSpec ws;
    ws.b = parse("x*y^2*z+5", walker_chart().coords);
    GeometryEvaluation ge(walker_build(ws), std::vector<double>{0.0, 1.0, 1.0, 1.0});
    CHECK(ge.curvature().ric(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // b = 0 is flat
  {
    WalkerSpec ws;
    GeometryEvaluation ge(walker_build(ws), std::vector<double>{0.4, 0.1, -0.2, 0.9});
    CHECK(max_abs(ge.curvature().riem_lo) <= 1e-14);
  }
  // display comparison wrapper
  {
    const ExprPtr b = parse("x*y^2*z+5", walker_chart().coords);
    const WalkerCurvatureDefects d =
        walker_curvature_check(b, std::vector<double>{0.3, 1.1, 0.7, -0.4});
    CHECK(d.display_defect <= 1e-12 * d.scale);
    CHECK(d.unlisted_ricci_max <= 1e-12);
    CHECK(d.extra_riemann_max > 0.0);  // the display's implicit zeros fail for generic b
  }
}

TEST_CASE("printed Walker system lines") {
  const auto& coords = walker_chart().coords;
  // steady family: b constant, f affine in y, lambda = 0 zeroes every line
  {
    const ExprPtr b = parse("2.5", coords);
    const ScalarField f(parse("0.7*y+0.3", coords));
    const WalkerSystemResidual r =
        walker_system_residual(f, LambdaSpec::of_constant(0.0), b, std::vector<double>{0.4, 0.2, -0.6, 0.8});
    CHECK(r.max_abs <= 1e-13);
  }
  // non-steady candidate: lines zt and tt survive; they match the direct
  // residual components computed by hand
  {
    const ExprPtr b = parse("x*y^2*z+1", coords);
    const ScalarField f(parse("x*z", coords));
    const LambdaSpec lam = LambdaSpec::of_field(ScalarField(parse("x*z", coords)));
    const std::vector<double> p = {0.5, 0.8, 0.6, 1.2};
    const WalkerSystemResidual r = walker_system_residual(f, lam, b, p);
    const double x = p[1], y = p[2], z = p[3];
    CHECK(r.lines[8] == doctest::Approx(x * y).epsilon(1e-12));                      // zt
    CHECK(r.lines[9] == doctest::Approx(y * y * (x * x * z * z - 1)).epsilon(1e-12));  // tt
    CHECK(std::abs(r.lines[3]) <= 1e-13);  // the printed xt line omits the Ricci term
  }
}
