#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "constructions.hpp"
#include "duality.hpp"
#include "geometry.hpp"

using namespace rck;

namespace {

const std::vector<std::string> x4 = {"x1", "x2", "x3", "x4"};

MetricField diag4(const char* a, const char* b, const char* c, const char* d) {
  return parse_metric(Chart(x4), {{a, "0", "0", "0"},
                                  {"0", b, "0", "0"},
                                  {"0", "0", c, "0"},
                                  {"0", "0", "0", d}});
}

MetricValue flat_neutral_value() {
  return metric_at(diag4("-1", "-1", "1", "1"), std::vector<double>{0, 0, 0, 0});
}

double gram(const MetricValue& mv, const Frame& f, int a, int b) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      s += mv.g(i, j) * f.vecs[static_cast<size_t>(a)][static_cast<size_t>(i)] *
           f.vecs[static_cast<size_t>(b)][static_cast<size_t>(j)];
  return s;
}

}  // namespace

TEST_CASE("star of e1^e2 on flat neutral space is e3^e4") {
  const HodgeOperator h = hodge_star(flat_neutral_value(), 1);
  // basis order: (01) (02) (03) (12) (13) (23); column 0 is star(e1^e2)
  for (int a = 0; a < 6; ++a)
    CHECK(h.star(a, 0) == doctest::Approx(a == 5 ? 1.0 : 0.0).epsilon(1e-14));
  CHECK(h.s == 1);
}

TEST_CASE("star squared signs across signatures") {
  CHECK(hodge_star(flat_neutral_value(), 1).s == 1);
  CHECK(hodge_star(metric_at(diag4("1", "1", "1", "1"), std::vector<double>{0, 0, 0, 0}), 1).s == 1);
  CHECK(hodge_star(metric_at(diag4("-1", "1", "1", "1"), std::vector<double>{0, 0, 0, 0}), 1).s == -1);
}

TEST_CASE("star is self-adjoint for the induced pairing when s = +1") {
  WalkerSpec ws;
  ws.b = parse("x*y^2*z+1", walker_chart().coords);
  const MetricValue mv = metric_at(walker_build(ws), std::vector<double>{0.4, 0.7, -0.3, 0.8});
  const HodgeOperator h = hodge_star(mv, 1);
  const TwoFormBasis basis = two_form_basis(mv, 1);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double a = 0, b = 0;
      for (int k = 0; k < 6; ++k) {
        a += h.star(k, i) * basis.g2(k, j);
        b += basis.g2(i, k) * h.star(k, j);
      }
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
  // +1/-1 eigenspaces are three-dimensional: trace vanishes and the
  // projectors are idempotent.
  double tr = 0;
  for (int i = 0; i < 6; ++i) tr += h.star(i, i);
  CHECK(std::abs(tr) <= 1e-10);
}

TEST_CASE("weyl split: algebra, orthogonality, Lorentzian unavailability") {
  WalkerSpec ws;
  ws.b = parse("y^2*x", walker_chart().coords);
  const MetricField g = walker_build(ws);
  const std::vector<double> p = {0.4, 0.8, 0.6, 1.1};
  GeometryEvaluation ge(g, p);
  const HodgeOperator h = hodge_star(ge.metric_value(), 1);
  const WeylEndomorphism we = weyl_split(ge.weyl(), ge.metric_value(), h);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(we.plus(i, j) + we.minus(i, j) == doctest::Approx(we.w(i, j)).epsilon(1e-14));

  const MetricField lor = diag4("-1", "1", "1", "1");
  GeometryEvaluation gl(lor, std::vector<double>{0, 0, 0, 0});
  const HodgeOperator hl = hodge_star(gl.metric_value(), 1);
  CHECK_THROWS_AS(weyl_split(gl.weyl(), gl.metric_value(), hl), Error);
}

TEST_CASE("orientation reversal swaps the two halves exactly") {
  WalkerSpec ws;
  ws.b = parse("x^2*y+z^3", walker_chart().coords);
  const MetricField g = walker_build(ws);
  GeometryEvaluation ge(g, std::vector<double>{0.3, 0.6, -0.4, 0.9});
  const auto& mv = ge.metric_value();
  const WeylEndomorphism plusor = weyl_split(ge.weyl(), mv, hodge_star(mv, 1));
  const WeylEndomorphism minusor = weyl_split(ge.weyl(), mv, hodge_star(mv, -1));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      CHECK(plusor.plus(i, j) == doctest::Approx(minusor.minus(i, j)).epsilon(1e-13));
      CHECK(plusor.minus(i, j) == doctest::Approx(minusor.plus(i, j)).epsilon(1e-13));
    }
}

TEST_CASE("orthonormal frame: flat neutral metric keeps the coordinate frame") {
  const Frame f = orthonormal_frame(flat_neutral_value(), 1);
  CHECK(f.eps == std::array<int, 4>{-1, -1, 1, 1});
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      CHECK(f.vecs[static_cast<size_t>(a)][static_cast<size_t>(i)] ==
            doctest::Approx(a == i ? 1.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("null frame from the flat metric has the advertised products") {
  const MetricValue mv = flat_neutral_value();
  const Frame f = null_frame(mv, 1);
  // order (T,U,V,W): <T,V> = <U,W> = 1, everything else zero
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const double expect = ((a == 0 && b == 2) || (a == 1 && b == 3)) ? 1.0 : 0.0;
      CHECK(gram(mv, f, a, b) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("frames on a Walker metric with b = 1") {
  WalkerSpec ws;
  ws.b = parse("1", walker_chart().coords);
  const MetricValue mv = metric_at(walker_build(ws), std::vector<double>{0.2, 0.5, -0.1, 0.7});
  const Frame on = orthonormal_frame(mv, 1);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const double expect = a == b ? on.eps[static_cast<size_t>(a)] : 0.0;
      CHECK(gram(mv, on, a, b) == doctest::Approx(expect).epsilon(1e-12));
    }
  const Frame nf = null_frame(mv, 1);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const double expect = ((a == 0 && b == 2) || (a == 1 && b == 3)) ? 1.0 : 0.0;
      CHECK(gram(mv, nf, a, b) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("self-duality criteria agree and are frame-covariant") {
  // b = x^2*y is genuinely self-dual at orientation +1; b = x*y^2*z is not.
  for (const char* btxt : {"x^2*y", "x*y^2*z"}) {
    WalkerSpec ws;
    ws.b = parse(btxt, walker_chart().coords);
    const MetricField g = walker_build(ws);
    GeometryEvaluation ge(g, std::vector<double>{0.4, 0.8, 0.6, 1.1});
    const auto& mv = ge.metric_value();
    const HodgeOperator h = hodge_star(mv, 1);
    const WeylEndomorphism split = weyl_split(ge.weyl(), mv, h);
    const SelfDualReport on = selfdual_check(ge.weyl(), mv, orthonormal_frame(mv, 1), split);
    const SelfDualReport nu = selfdual_check(ge.weyl(), mv, null_frame(mv, 1), split);
    const bool v1 = on.frame_defect <= on.tolerance;
    const bool v2 = nu.frame_defect <= nu.tolerance;
    const bool v3 = on.wminus_norm <= on.tolerance;
    CHECK(v1 == v2);
    CHECK(v2 == v3);
    CHECK(on.self_dual == (std::string(btxt) == "x^2*y"));

    // any valid pseudo-orthonormal frame must reach the same verdict
    Frame scaled = null_frame(mv, 1);
    for (int i = 0; i < 4; ++i) {
      scaled.vecs[0][static_cast<size_t>(i)] *= 1.7;
      scaled.vecs[2][static_cast<size_t>(i)] /= 1.7;
      scaled.vecs[1][static_cast<size_t>(i)] *= 0.6;
      scaled.vecs[3][static_cast<size_t>(i)] /= 0.6;
    }
    const SelfDualReport sc = selfdual_check(ge.weyl(), mv, scaled, split);
    CHECK((sc.frame_defect <= sc.tolerance) == v2);
  }
}

TEST_CASE("flat space is trivially self-dual and anti-self-dual") {
  const MetricField eta = diag4("-1", "-1", "1", "1");
  GeometryEvaluation ge(eta, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  const auto& mv = ge.metric_value();
  const HodgeOperator h = hodge_star(mv, 1);
  const WeylEndomorphism split = weyl_split(ge.weyl(), mv, h);
  const SelfDualReport on = selfdual_check(ge.weyl(), mv, orthonormal_frame(mv, 1), split);
  CHECK(on.frame_defect <= 1e-14);
  CHECK(on.wminus_norm <= 1e-14);
  CHECK(on.wplus_norm <= 1e-14);
  CHECK(on.self_dual);
}

TEST_CASE("dimension gate") {
  const MetricField g3 = parse_metric(Chart({"x", "y", "z"}),
                                      {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
  const MetricValue mv = metric_at(g3, std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(hodge_star(mv, 1), Error);
  CHECK_THROWS_AS(two_form_basis(mv, 1), Error);
}
