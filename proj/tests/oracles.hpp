#pragma once

// Test-side oracles, deliberately independent of the jet evaluation path:
// a plain-double recursive AST evaluator, composed central differences with
// one Richardson step, and an exactly differentiable polynomial type.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "expr.hpp"
#include "sampling.hpp"

namespace rck::testing {

inline double eval_plain(const ExprPtr& e, const std::vector<std::string>& coords,
                         const std::vector<double>& p) {
  switch (e->kind) {
    case Expr::Kind::Constant:
      return e->constant;
    case Expr::Kind::Variable:
      for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == e->name) return p[i];
      throw std::runtime_error("oracle: unknown variable");
    case Expr::Kind::Unary: {
      const double a = eval_plain(e->a, coords, p);
      switch (e->uop) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Exp: return std::exp(a);
        case UnaryOp::Ln: return std::log(a);
        case UnaryOp::Sqrt: return std::sqrt(a);
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Sinh: return std::sinh(a);
        case UnaryOp::Cosh: return std::cosh(a);
        case UnaryOp::Tanh: return std::tanh(a);
      }
      return 0;
    }
    case Expr::Kind::Binary: {
      const double a = eval_plain(e->a, coords, p);
      const double b = eval_plain(e->b, coords, p);
      switch (e->bop) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
      }
      return 0;
    }
    case Expr::Kind::Pow:
      return std::pow(eval_plain(e->a, coords, p), e->constant);
    case Expr::Kind::RadialField:
      throw std::runtime_error("oracle: radial field leaf");
  }
  return 0;
}

// Composed central differences for a mixed partial of a callable; Richardson
// once: (4 F(h/2) - F(h)) / 3.
inline double fd_partial(const std::function<double(const std::vector<double>&)>& f,
                         const std::vector<double>& p, const std::vector<int>& alpha,
                         double h) {
  std::function<double(std::vector<double>&, std::vector<int>, double)> go =
      [&](std::vector<double>& q, std::vector<int> idx, double step) -> double {
    int v = 0;
    while (v < static_cast<int>(idx.size()) && idx[static_cast<size_t>(v)] == 0) ++v;
    if (v >= static_cast<int>(idx.size())) return f(q);
    idx[static_cast<size_t>(v)]--;
    q[static_cast<size_t>(v)] += step;
    const double hi = go(q, idx, step);
    q[static_cast<size_t>(v)] -= 2 * step;
    const double lo = go(q, idx, step);
    q[static_cast<size_t>(v)] += step;
    return (hi - lo) / (2 * step);
  };
  std::vector<double> q1 = p, q2 = p;
  const double f_h = go(q1, alpha, h);
  const double f_h2 = go(q2, alpha, h / 2);
  return (4.0 * f_h2 - f_h) / 3.0;
}

struct Poly {
  std::vector<std::pair<double, std::array<int, 4>>> terms;
  int nv = 1;

  double eval(const std::vector<double>& p) const {
    double s = 0;
    for (const auto& [c, e] : terms) {
      double t = c;
      for (int v = 0; v < nv; ++v)
        for (int k = 0; k < e[static_cast<size_t>(v)]; ++k) t *= p[static_cast<size_t>(v)];
      s += t;
    }
    return s;
  }

  Poly derivative(int var) const {
    Poly d;
    d.nv = nv;
    for (const auto& [c, e] : terms) {
      if (e[static_cast<size_t>(var)] == 0) continue;
      auto e2 = e;
      e2[static_cast<size_t>(var)]--;
      d.terms.emplace_back(c * e[static_cast<size_t>(var)], e2);
    }
    return d;
  }

  std::string text(const std::vector<std::string>& vars) const {
    if (terms.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms.size(); ++i) {
      char coef[40];
      std::snprintf(coef, sizeof(coef), "%.17g", terms[i].first);
      if (i) s += "+";
      s += coef;
      for (int v = 0; v < nv; ++v)
        for (int k = 0; k < terms[i].second[static_cast<size_t>(v)]; ++k)
          s += "*" + vars[static_cast<size_t>(v)];
    }
    return s;
  }
};

inline Poly random_poly(Rng& rng, int nv, int max_deg) {
  Poly p;
  p.nv = nv;
  const int terms = rng.uniform_int(2, 6);
  for (int t = 0; t < terms; ++t) {
    std::array<int, 4> e{};
    int budget = rng.uniform_int(0, max_deg);
    for (int v = 0; v < nv && budget > 0; ++v) {
      const int k = rng.uniform_int(0, budget);
      e[static_cast<size_t>(v)] = k;
      budget -= k;
    }
    p.terms.emplace_back(-1.5 + 3.0 * rng.uniform01(), e);
  }
  return p;
}

}  // namespace rck::testing
