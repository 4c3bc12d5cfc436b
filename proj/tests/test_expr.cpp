#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expr.hpp"
#include "oracles.hpp"

using namespace rck;

namespace {

const std::vector<std::string> txyz = {"t", "x", "y", "z"};
const std::vector<std::string> xyz = {"x", "y", "z"};

double value_of(const std::string& s, const std::vector<std::string>& coords,
                const std::vector<double>& p) {
  return evaluate(parse(s, coords), coords, p, 0).value();
}

}  // namespace

TEST_CASE("unknown identifiers are rejected with their offset") {
  try {
    parse("2*t*y + b", txyz);
    FAIL("expected UnknownIdentifier");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
    CHECK(std::string(e.what()).find("offset 8") != std::string::npos);
  }
}

TEST_CASE("arithmetic and precedence") {
  CHECK(value_of("x*y^2*z", xyz, {1, 2, 3}) == doctest::Approx(12.0));
  CHECK(value_of("-x^2", xyz, {2, 0, 0}) == doctest::Approx(-4.0));
  CHECK(value_of("2^3^2", xyz, {0, 0, 0}) == doctest::Approx(512.0));  // right assoc
  CHECK(value_of("2*x+3*y", xyz, {1, 2, 0}) == doctest::Approx(8.0));
  CHECK(value_of("x-y-z", xyz, {10, 3, 2}) == doctest::Approx(5.0));  // left assoc
  CHECK(value_of("x^-2", xyz, {2, 0, 0}) == doctest::Approx(0.25));
  CHECK(value_of("x^(1+1)", xyz, {3, 0, 0}) == doctest::Approx(9.0));
  CHECK(value_of("  x * ( y +  z ) ", xyz, {2, 1, 3}) == doctest::Approx(8.0));
  CHECK(value_of("1.5e2", xyz, {0, 0, 0}) == doctest::Approx(150.0));
}

TEST_CASE("syntax errors carry byte offsets") {
  CHECK_THROWS_AS(parse("", xyz), Error);
  CHECK_THROWS_AS(parse("x+", xyz), Error);
  CHECK_THROWS_AS(parse("(x", xyz), Error);
  CHECK_THROWS_AS(parse("x )", xyz), Error);
  CHECK_THROWS_AS(parse("sin", xyz), Error);
  try {
    parse("x^y", xyz);
    FAIL("expected NonConstantExponent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConstantExponent);
  }
}

TEST_CASE("evaluation propagates jet domain errors with a source span") {
  const ExprPtr e = parse("ln(x)", xyz);
  try {
    evaluate(e, xyz, std::vector<double>{-1.0, 0.0, 0.0}, 2);
    FAIL("expected DomainError");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::DomainError);
    CHECK(std::string(err.what()).find("offset") != std::string::npos);
  }
  CHECK_THROWS_AS(evaluate(e, xyz, std::vector<double>{1.0, 0.0}, 2), Error);  // point length
}

TEST_CASE("constant subexpressions stay exact") {
  const Jet j = evaluate(parse("exp(0*x)", xyz), xyz, std::vector<double>{3.7, 1, 1}, 2);
  CHECK(j.value() == doctest::Approx(1.0).epsilon(1e-15));
  for (size_t i = 1; i < j.coeffs().size(); ++i) CHECK(j.coeffs()[i] == 0.0);
}

TEST_CASE("hand-differentiated mixed partial") {
  // d2/dydx of x*y^2*z at (1,1,1) is 2yz = 2.
  const Jet j = evaluate(parse("x*y^2*z", xyz), xyz, std::vector<double>{1, 1, 1}, 2);
  const int alpha[3] = {1, 1, 0};
  CHECK(j.partial(std::span<const int>(alpha, 3)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("print-parse round trip is structurally idempotent") {
  const std::vector<std::string> cases = {
      "x*y^2*z", "-x^2", "x-(y-z)", "sin(x)+cos(y)*tanh(z)", "x/(y+2)/z",
      "exp(-(x^2))", "2^-3*x", "x^2^2", "sqrt(x+4)", "-(x+y)",
  };
  for (const auto& s : cases) {
    const ExprPtr a = parse(s, xyz);
    const std::string printed = to_string(a);
    const ExprPtr b = parse(printed, xyz);
    CHECK_MESSAGE(structurally_equal(a, b), "round trip failed: ", s, " -> ", printed);
    CHECK(to_string(b) == printed);
  }
}

TEST_CASE("200 random polynomials: jet order-0 matches the plain evaluator") {
  Rng rng(0x5EED);
  const std::vector<std::string> all = {"x", "y", "z", "t"};
  for (int trial = 0; trial < 200; ++trial) {
    const int nv = rng.uniform_int(1, 4);
    std::vector<std::string> vars(all.begin(), all.begin() + nv);
    const testing::Poly poly = testing::random_poly(rng, nv, 4);
    const std::string text = poly.text(vars);
    const ExprPtr e = parse(text, vars);
    std::vector<double> p;
    for (int i = 0; i < nv; ++i) p.push_back(rng.uniform(-2, 2));
    const double jet = evaluate(e, vars, p, 0).value();
    const double plain = testing::eval_plain(e, vars, p);
    const double oracle = poly.eval(p);
    CHECK(std::abs(jet - plain) <= 1e-13 * (1.0 + std::abs(plain)));
    CHECK(std::abs(jet - oracle) <= 1e-12 * (1.0 + std::abs(oracle)));

    // print-parse idempotence on the random corpus as well
    const ExprPtr r = parse(to_string(e), vars);
    CHECK(structurally_equal(e, r));
  }
}

TEST_CASE("renaming variables preserves structure") {
  const ExprPtr e = parse("x*sin(y)+z^2", xyz);
  const std::vector<std::string> from = {"x", "y", "z"};
  const std::vector<std::string> to = {"fiber_x", "fiber_y", "fiber_z"};
  const ExprPtr r = rename_variables(e, from, to);
  const std::vector<std::string> coords2 = {"fiber_x", "fiber_y", "fiber_z"};
  CHECK(evaluate(r, coords2, std::vector<double>{1.0, 0.5, 2.0}, 0).value() ==
        doctest::Approx(evaluate(e, xyz, std::vector<double>{1.0, 0.5, 2.0}, 0).value()));
}
