#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jet.hpp"
#include "radial_spline.hpp"

namespace rck {

// Expression ASTs for metric components and scalar fields.  Immutable and
// shareable across threads.  The grammar (public, used by config files):
//
//   expression := term (('+'|'-') term)*
//   term       := factor (('*'|'/') factor)*
//   factor     := '-' factor | power
//   power      := primary ('^' exponent)?        right-associative
//   exponent   := '-' exponent | power            must fold to a constant
//   primary    := number | coord | fn '(' expression ')' | '(' expression ')'
//
// '^' binds tighter than unary minus, so -x^2 == -(x^2).  Exponents are
// restricted to real constants.  Functions: exp ln sqrt sin cos sinh cosh
// tanh; their names are reserved and cannot be used as coordinates.
// Numbers are decimal with an optional exponent part.

enum class UnaryOp { Neg, Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Constant, Variable, Unary, Binary, Pow, RadialField };
  Kind kind;
  double constant = 0.0;  // Constant value, or Pow exponent
  std::string name;       // Variable
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  ExprPtr a, b;
  int offset = -1;  // byte offset in the source text; -1 when synthesized
  // RadialField leaf: a numeric spline profile of rho = |x| over the named
  // coordinates.  Never produced by the parser; composes like any subtree.
  std::shared_ptr<const RadialSpline> spline;
  std::vector<std::string> radial_coords;
};

// Parses against a fixed coordinate list; any other identifier is rejected.
ExprPtr parse(const std::string& text, std::span<const std::string> coords);

std::string to_string(const ExprPtr& e);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Evaluate to a jet at `point` (length = coords size).
Jet evaluate(const ExprPtr& e, std::span<const std::string> coords,
             std::span<const double> point, int order);

// Constant folding; nullopt when the subtree mentions a variable.
std::optional<double> fold_constant(const ExprPtr& e);

bool is_reserved_word(const std::string& name);

// Builders for synthesized expressions (constructions module, tests).
ExprPtr make_constant(double v);
ExprPtr make_variable(const std::string& name);
ExprPtr make_unary(UnaryOp op, ExprPtr a);
ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, double exponent);
ExprPtr make_radial_field(std::shared_ptr<const RadialSpline> spline,
                          std::vector<std::string> coords);
// Structure-preserving coordinate rename (for product-chart mangling).
ExprPtr rename_variables(const ExprPtr& e,
                         std::span<const std::string> from,
                         std::span<const std::string> to);

}  // namespace rck
