#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jet.hpp"
#include "oracles.hpp"

using namespace rck;

namespace {

double binom(int n, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

TEST_CASE("coordinate jets carry value and unit first-order coefficient") {
  // layout for n=2, order=2: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2)
  Jet x = Jet::variable(0, 2.0, 2, 2);
  auto c = x.coeffs();
  REQUIRE(c.size() == 6);
  CHECK(c[0] == 2.0);
  CHECK(c[1] == 1.0);
  for (size_t i = 2; i < 6; ++i) CHECK(c[i] == 0.0);

  Jet y = Jet::variable(1, 0.0, 2, 2);
  c = y.coeffs();
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 1.0);

  CHECK_THROWS_AS(Jet::variable(3, 0.0, 2, 2), Error);
}

TEST_CASE("x*x at 3: Taylor coefficients and factorial-normalized partial") {
  Jet x = Jet::variable(0, 3.0, 1, 2);
  Jet sq = x * x;
  auto c = sq.coeffs();
  CHECK(c[0] == 9.0);
  CHECK(c[1] == 6.0);
  CHECK(c[2] == 1.0);  // Taylor coefficient; the true second partial is 2
  const int two[1] = {2};
  CHECK(sq.partial(std::span<const int>(two, 1)) == 2.0);
}

TEST_CASE("exp series at 0") {
  Jet x = Jet::variable(0, 0.0, 1, 3);
  Jet e = exp(x);
  auto c = e.coeffs();
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("third derivative of sin(2x) against Richardson differences") {
  Jet x = Jet::variable(0, 0.7, 1, 3);
  Jet s = sin(x * 2.0);
  const int three[1] = {3};
  const double jet = s.partial(std::span<const int>(three, 1));
  const double fd = testing::fd_partial(
      [](const std::vector<double>& p) { return std::sin(2.0 * p[0]); }, {0.7}, {3}, 1e-2);
  CHECK(std::abs(jet - fd) / std::abs(jet) < 1e-6);
}

TEST_CASE("partial extraction basics") {
  Jet x = Jet::variable(0, 1.0, 3, 3);
  Jet y = Jet::variable(1, 2.0, 3, 3);
  Jet z = Jet::variable(2, 3.0, 3, 3);
  Jet p = x * y * z;
  const int zero[3] = {0, 0, 0};
  CHECK(p.partial(std::span<const int>(zero, 3)) == 6.0);
  const int ones[3] = {1, 1, 1};
  CHECK(p.partial(std::span<const int>(ones, 3)) == 1.0);
  const int over[3] = {2, 1, 1};
  CHECK_THROWS_AS(p.partial(std::span<const int>(over, 3)), Error);
}

TEST_CASE("mixing mismatched jets is an error") {
  Jet a = Jet::variable(0, 1.0, 2, 2);
  Jet b = Jet::variable(0, 1.0, 2, 3);
  Jet c = Jet::variable(0, 1.0, 3, 2);
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(a * c, Error);
}

TEST_CASE("division and function domain errors") {
  Jet zero = Jet::constant(0.0, 1, 2);
  Jet one = Jet::constant(1.0, 1, 2);
  CHECK_THROWS_AS(one / zero, Error);
  CHECK_THROWS_AS(log(zero), Error);
  CHECK_THROWS_AS(rck::sqrt(Jet::constant(-2.0, 1, 2)), Error);
}

TEST_CASE("integer powers work on negative bases, fractional ones do not") {
  Jet x = Jet::variable(0, -1.5, 1, 3);
  Jet sq = jet_pow(x, 2.0);
  CHECK(sq.value() == doctest::Approx(2.25));
  const int one[1] = {1};
  CHECK(sq.partial(std::span<const int>(one, 1)) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(jet_pow(x, 0.5), Error);

  Jet y = Jet::variable(0, 2.0, 1, 3);
  Jet a = jet_pow(y, 0.5), b = rck::sqrt(y);
  for (size_t i = 0; i < a.coeffs().size(); ++i)
    CHECK(a.coeffs()[i] == doctest::Approx(b.coeffs()[i]).epsilon(1e-14));
}

TEST_CASE("product rule: jet product equals the Leibniz expansion") {
  Rng rng(0xBEEF);
  const std::vector<std::string> vars = {"u1", "u2", "u3"};
  for (int trial = 0; trial < 30; ++trial) {
    const int nv = rng.uniform_int(1, 3);
    std::vector<std::string> v(vars.begin(), vars.begin() + nv);
    const testing::Poly pa = testing::random_poly(rng, nv, 3);
    const testing::Poly pb = testing::random_poly(rng, nv, 3);
    std::vector<double> pt;
    for (int i = 0; i < nv; ++i) pt.push_back(rng.uniform(-1, 1));
    const Jet a = evaluate(parse(pa.text(v), v), v, pt, 3);
    const Jet b = evaluate(parse(pb.text(v), v), v, pt, 3);
    const Jet ab = a * b;
    const JetLayout& lay = jet_layout(nv, 3);
    for (int s = 0; s < lay.size; ++s) {
      std::vector<int> alpha(static_cast<size_t>(nv));
      for (int i = 0; i < nv; ++i) alpha[static_cast<size_t>(i)] = lay.exps[static_cast<size_t>(s)][static_cast<size_t>(i)];
      // Leibniz: d^a(fg) = sum_{b <= a} C(a,b) d^b f d^{a-b} g
      double leibniz = 0;
      std::vector<int> beta(static_cast<size_t>(nv), 0);
      std::function<void(int)> loop = [&](int var) {
        if (var == nv) {
          double coef = 1;
          std::vector<int> rest(static_cast<size_t>(nv));
          for (int i = 0; i < nv; ++i) {
            coef *= binom(alpha[static_cast<size_t>(i)], beta[static_cast<size_t>(i)]);
            rest[static_cast<size_t>(i)] = alpha[static_cast<size_t>(i)] - beta[static_cast<size_t>(i)];
          }
          leibniz += coef * a.partial(std::span<const int>(beta.data(), beta.size())) *
                     b.partial(std::span<const int>(rest.data(), rest.size()));
          return;
        }
        for (beta[static_cast<size_t>(var)] = 0; beta[static_cast<size_t>(var)] <= alpha[static_cast<size_t>(var)];
             ++beta[static_cast<size_t>(var)])
          loop(var + 1);
        beta[static_cast<size_t>(var)] = 0;
      };
      loop(0);
      const double jet = ab.partial(std::span<const int>(alpha.data(), alpha.size()));
      CHECK(std::abs(jet - leibniz) <= 1e-12 * (1.0 + std::abs(leibniz)));
    }
  }
}

TEST_CASE("chain rule for exp/sin/ln compositions against Richardson differences") {
  const std::vector<std::string> vars = {"u1", "u2"};
  const std::vector<std::pair<std::string, std::function<double(const std::vector<double>&)>>>
      cases = {
          {"exp(sin(u1)+0.5*u2)",
           [](const std::vector<double>& p) { return std::exp(std::sin(p[0]) + 0.5 * p[1]); }},
          {"ln(2+u1*u2)",
           [](const std::vector<double>& p) { return std::log(2 + p[0] * p[1]); }},
          {"sin(u1*u2)/(2+cos(u1))",
           [](const std::vector<double>& p) {
             return std::sin(p[0] * p[1]) / (2 + std::cos(p[0]));
           }},
      };
  const std::vector<double> pt = {0.37, -0.42};
  for (const auto& [text, fn] : cases) {
    const Jet j = evaluate(parse(text, vars), vars, pt, 3);
    const JetLayout& lay = jet_layout(2, 3);
    for (int s = 0; s < lay.size; ++s) {
      std::vector<int> alpha = {lay.exps[static_cast<size_t>(s)][0], lay.exps[static_cast<size_t>(s)][1]};
      const double jet = j.partial(std::span<const int>(alpha.data(), alpha.size()));
      const double fd = testing::fd_partial(fn, pt, alpha, 1e-2);
      CHECK(std::abs(jet - fd) <= 1e-6 * std::max({1.0, std::abs(jet), std::abs(fd)}));
    }
  }
}

TEST_CASE("derivative and truncation") {
  Jet x = Jet::variable(0, 0.4, 2, 3);
  Jet y = Jet::variable(1, -0.3, 2, 3);
  Jet f = sin(x) * exp(y) + x * x * y;
  Jet fx = f.derivative(0);
  CHECK(fx.order() == 2);
  const int one0[2] = {1, 0};
  CHECK(fx.value() == doctest::Approx(f.partial(std::span<const int>(one0, 2))).epsilon(1e-14));
  Jet t = f.truncated(1);
  CHECK(t.order() == 1);
  CHECK(t.value() == f.value());
  CHECK_THROWS_AS(t.truncated(3), Error);
  CHECK_THROWS_AS(Jet::constant(1.0, 2, 0).derivative(0), Error);
}
