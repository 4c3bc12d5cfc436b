#include "expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace rck {

namespace {

const char* kFunctions[] = {"exp", "ln", "sqrt", "sin", "cos", "sinh", "cosh", "tanh"};

UnaryOp function_op(const std::string& name) {
  if (name == "exp") return UnaryOp::Exp;
  if (name == "ln") return UnaryOp::Ln;
  if (name == "sqrt") return UnaryOp::Sqrt;
  if (name == "sin") return UnaryOp::Sin;
  if (name == "cos") return UnaryOp::Cos;
  if (name == "sinh") return UnaryOp::Sinh;
  if (name == "cosh") return UnaryOp::Cosh;
  return UnaryOp::Tanh;
}

std::string at_offset(const std::string& what, int off) {
  return what + " at offset " + std::to_string(off);
}

class Parser {
public:
  Parser(const std::string& text, std::span<const std::string> coords)
      : text_(text), coords_(coords) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= text_.size())
      throw Error(ErrorKind::SyntaxError, "empty expression");
    ExprPtr e = expression();
    skip_ws();
    if (pos_ < text_.size())
      throw Error(ErrorKind::SyntaxError,
                  at_offset("unexpected trailing input", static_cast<int>(pos_)));
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr expression() {
    ExprPtr e = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return e;
      const int off = static_cast<int>(pos_);
      ++pos_;
      ExprPtr rhs = term();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Binary;
      node->bop = (c == '+') ? BinaryOp::Add : BinaryOp::Sub;
      node->a = std::move(e);
      node->b = std::move(rhs);
      node->offset = off;
      e = std::move(node);
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return e;
      const int off = static_cast<int>(pos_);
      ++pos_;
      ExprPtr rhs = factor();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Binary;
      node->bop = (c == '*') ? BinaryOp::Mul : BinaryOp::Div;
      node->a = std::move(e);
      node->b = std::move(rhs);
      node->offset = off;
      e = std::move(node);
    }
  }

  ExprPtr factor() {
    if (peek() == '-') {
      const int off = static_cast<int>(pos_);
      ++pos_;
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Unary;
      node->uop = UnaryOp::Neg;
      node->a = factor();
      node->offset = off;
      return node;
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (peek() != '^') return base;
    const int off = static_cast<int>(pos_);
    ++pos_;
    ExprPtr ex = exponent();
    const auto folded = fold_constant(ex);
    if (!folded)
      throw Error(ErrorKind::NonConstantExponent,
                  at_offset("exponent must be a real constant", off));
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Pow;
    node->a = std::move(base);
    node->constant = *folded;
    node->offset = off;
    return node;
  }

  // Exponent position: allow a sign, then another power (right-assoc).
  ExprPtr exponent() {
    if (peek() == '-') {
      const int off = static_cast<int>(pos_);
      ++pos_;
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Unary;
      node->uop = UnaryOp::Neg;
      node->a = exponent();
      node->offset = off;
      return node;
    }
    return power();
  }

  ExprPtr primary() {
    const char c = peek();
    const int off = static_cast<int>(pos_);
    if (c == '(') {
      ++pos_;
      ExprPtr e = expression();
      if (peek() != ')')
        throw Error(ErrorKind::SyntaxError, at_offset("expected ')'", static_cast<int>(pos_)));
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw Error(ErrorKind::SyntaxError, at_offset("unexpected character", off));
  }

  ExprPtr number() {
    const size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
      throw Error(ErrorKind::SyntaxError, at_offset("malformed number", static_cast<int>(start)));
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
      size_t digits = probe;
      while (digits < text_.size() && std::isdigit(static_cast<unsigned char>(text_[digits]))) ++digits;
      if (digits > probe) pos_ = digits;  // otherwise the 'e' is an identifier start
    }
    double value = 0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc())
      throw Error(ErrorKind::SyntaxError, at_offset("malformed number", static_cast<int>(start)));
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Constant;
    node->constant = value;
    node->offset = static_cast<int>(start);
    return node;
  }

  ExprPtr identifier() {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (is_reserved_word(name)) {
      if (peek() != '(')
        throw Error(ErrorKind::SyntaxError,
                    at_offset("function '" + name + "' needs an argument list",
                              static_cast<int>(start)));
      ++pos_;
      ExprPtr arg = expression();
      if (peek() != ')')
        throw Error(ErrorKind::SyntaxError, at_offset("expected ')'", static_cast<int>(pos_)));
      ++pos_;
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Unary;
      node->uop = function_op(name);
      node->a = std::move(arg);
      node->offset = static_cast<int>(start);
      return node;
    }
    for (const std::string& c : coords_) {
      if (c == name) {
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Variable;
        node->name = name;
        node->offset = static_cast<int>(start);
        return node;
      }
    }
    throw Error(ErrorKind::UnknownIdentifier,
                at_offset("unknown identifier '" + name + "'", static_cast<int>(start)));
  }

  const std::string& text_;
  std::span<const std::string> coords_;
  size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int precedence(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Binary:
      return (e->bop == BinaryOp::Add || e->bop == BinaryOp::Sub) ? 1 : 2;
    case Expr::Kind::Unary:
      return e->uop == UnaryOp::Neg ? 3 : 5;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print(const ExprPtr& e, int parent_prec, std::string& out) {
  const int prec = precedence(e);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e->kind) {
    case Expr::Kind::Constant:
      out += format_double(e->constant);
      break;
    case Expr::Kind::Variable:
      out += e->name;
      break;
    case Expr::Kind::Unary:
      if (e->uop == UnaryOp::Neg) {
        out += '-';
        print(e->a, 3, out);
      } else {
        switch (e->uop) {
          case UnaryOp::Exp: out += "exp"; break;
          case UnaryOp::Ln: out += "ln"; break;
          case UnaryOp::Sqrt: out += "sqrt"; break;
          case UnaryOp::Sin: out += "sin"; break;
          case UnaryOp::Cos: out += "cos"; break;
          case UnaryOp::Sinh: out += "sinh"; break;
          case UnaryOp::Cosh: out += "cosh"; break;
          case UnaryOp::Tanh: out += "tanh"; break;
          default: break;
        }
        out += '(';
        print(e->a, 0, out);
        out += ')';
      }
      break;
    case Expr::Kind::Binary: {
      const char* op = "+";
      if (e->bop == BinaryOp::Sub) op = "-";
      if (e->bop == BinaryOp::Mul) op = "*";
      if (e->bop == BinaryOp::Div) op = "/";
      print(e->a, prec, out);
      out += op;
      // Left-associative: the right child needs strictly higher binding.
      print(e->b, prec + 1, out);
      break;
    }
    case Expr::Kind::Pow:
      print(e->a, 5, out);
      out += '^';
      out += format_double(e->constant);
      break;
    case Expr::Kind::RadialField:
      out += "__radial_field";  // not reparsable; internal fields only
      break;
  }
  if (parens) out += ')';
}

Jet eval_jet(const Expr& e, std::span<const std::string> coords,
             std::span<const double> point, int order) {
  const int n = static_cast<int>(coords.size());
  switch (e.kind) {
    case Expr::Kind::Constant:
      return Jet::constant(e.constant, n, order);
    case Expr::Kind::Variable: {
      for (int i = 0; i < n; ++i)
        if (coords[static_cast<size_t>(i)] == e.name)
          return Jet::variable(i, point[static_cast<size_t>(i)], n, order);
      throw Error(ErrorKind::UnknownIdentifier,
                  "variable '" + e.name + "' not in chart");
    }
    case Expr::Kind::Unary: {
      Jet a = eval_jet(*e.a, coords, point, order);
      try {
        switch (e.uop) {
          case UnaryOp::Neg: return -a;
          case UnaryOp::Exp: return exp(a);
          case UnaryOp::Ln: return log(a);
          case UnaryOp::Sqrt: return sqrt(a);
          case UnaryOp::Sin: return sin(a);
          case UnaryOp::Cos: return cos(a);
          case UnaryOp::Sinh: return sinh(a);
          case UnaryOp::Cosh: return cosh(a);
          case UnaryOp::Tanh: return tanh(a);
        }
      } catch (const Error& err) {
        throw Error(err.kind(), std::string(err.what()) + at_offset("; source", e.offset));
      }
      break;
    }
    case Expr::Kind::Binary: {
      Jet a = eval_jet(*e.a, coords, point, order);
      Jet b = eval_jet(*e.b, coords, point, order);
      try {
        switch (e.bop) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Div: return a / b;
        }
      } catch (const Error& err) {
        throw Error(err.kind(), std::string(err.what()) + at_offset("; source", e.offset));
      }
      break;
    }
    case Expr::Kind::Pow: {
      Jet a = eval_jet(*e.a, coords, point, order);
      try {
        return jet_pow(a, e.constant);
      } catch (const Error& err) {
        throw Error(err.kind(), std::string(err.what()) + at_offset("; source", e.offset));
      }
    }
    case Expr::Kind::RadialField: {
      Jet rho2 = Jet::constant(0.0, n, order);
      for (const std::string& cname : e.radial_coords) {
        int idx = -1;
        for (int i = 0; i < n; ++i)
          if (coords[static_cast<size_t>(i)] == cname) { idx = i; break; }
        if (idx < 0)
          throw Error(ErrorKind::UnknownIdentifier,
                      "radial field coordinate '" + cname + "' not in chart");
        Jet xi = Jet::variable(idx, point[static_cast<size_t>(idx)], n, order);
        rho2 += xi * xi;
      }
      if (!(rho2.value() > 0.0))
        throw Error(ErrorKind::DomainError, "radial field evaluated at the origin");
      Jet rho = sqrt(rho2);
      return rho.compose(e.spline->eval(rho.value()));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "malformed expression node");
}

}  // namespace

bool is_reserved_word(const std::string& name) {
  for (const char* f : kFunctions)
    if (name == f) return true;
  return false;
}

ExprPtr parse(const std::string& text, std::span<const std::string> coords) {
  if (text.empty()) throw Error(ErrorKind::SyntaxError, "empty expression");
  return Parser(text, coords).run();
}

std::string to_string(const ExprPtr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Constant:
      return a->constant == b->constant;
    case Expr::Kind::Variable:
      return a->name == b->name;
    case Expr::Kind::Unary:
      return a->uop == b->uop && structurally_equal(a->a, b->a);
    case Expr::Kind::Binary:
      return a->bop == b->bop && structurally_equal(a->a, b->a) &&
             structurally_equal(a->b, b->b);
    case Expr::Kind::Pow:
      return a->constant == b->constant && structurally_equal(a->a, b->a);
    case Expr::Kind::RadialField:
      return a->spline == b->spline && a->radial_coords == b->radial_coords;
  }
  return false;
}

std::optional<double> fold_constant(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Constant:
      return e->constant;
    case Expr::Kind::Variable:
      return std::nullopt;
    case Expr::Kind::Unary: {
      const auto a = fold_constant(e->a);
      if (!a) return std::nullopt;
      switch (e->uop) {
        case UnaryOp::Neg: return -*a;
        case UnaryOp::Exp: return std::exp(*a);
        case UnaryOp::Ln: return std::log(*a);
        case UnaryOp::Sqrt: return std::sqrt(*a);
        case UnaryOp::Sin: return std::sin(*a);
        case UnaryOp::Cos: return std::cos(*a);
        case UnaryOp::Sinh: return std::sinh(*a);
        case UnaryOp::Cosh: return std::cosh(*a);
        case UnaryOp::Tanh: return std::tanh(*a);
      }
      return std::nullopt;
    }
    case Expr::Kind::Binary: {
      const auto a = fold_constant(e->a);
      const auto b = fold_constant(e->b);
      if (!a || !b) return std::nullopt;
      switch (e->bop) {
        case BinaryOp::Add: return *a + *b;
        case BinaryOp::Sub: return *a - *b;
        case BinaryOp::Mul: return *a * *b;
        case BinaryOp::Div: return *a / *b;
      }
      return std::nullopt;
    }
    case Expr::Kind::Pow: {
      const auto a = fold_constant(e->a);
      if (!a) return std::nullopt;
      return std::pow(*a, e->constant);
    }
    case Expr::Kind::RadialField:
      return std::nullopt;
  }
  return std::nullopt;
}

Jet evaluate(const ExprPtr& e, std::span<const std::string> coords,
             std::span<const double> point, int order) {
  if (point.size() != coords.size())
    throw Error(ErrorKind::ShapeMismatch, "point length does not match chart dimension");
  return eval_jet(*e, coords, point, order);
}

ExprPtr make_constant(double v) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::Constant;
  node->constant = v;
  return node;
}

ExprPtr make_variable(const std::string& name) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::Variable;
  node->name = name;
  return node;
}

ExprPtr make_unary(UnaryOp op, ExprPtr a) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::Unary;
  node->uop = op;
  node->a = std::move(a);
  return node;
}

ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::Binary;
  node->bop = op;
  node->a = std::move(a);
  node->b = std::move(b);
  return node;
}

ExprPtr make_pow(ExprPtr base, double exponent) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::Pow;
  node->a = std::move(base);
  node->constant = exponent;
  return node;
}

ExprPtr make_radial_field(std::shared_ptr<const RadialSpline> spline,
                          std::vector<std::string> coords) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::RadialField;
  node->spline = std::move(spline);
  node->radial_coords = std::move(coords);
  return node;
}

ExprPtr rename_variables(const ExprPtr& e, std::span<const std::string> from,
                         std::span<const std::string> to) {
  if (!e) return e;
  auto lookup = [&](const std::string& name) -> const std::string* {
    for (size_t i = 0; i < from.size(); ++i)
      if (name == from[i]) return &to[i];
    return nullptr;
  };
  if (e->kind == Expr::Kind::Variable) {
    if (const std::string* t = lookup(e->name)) {
      auto node = std::make_shared<Expr>(*e);
      node->name = *t;
      return node;
    }
    return e;
  }
  if (e->kind == Expr::Kind::RadialField) {
    auto node = std::make_shared<Expr>(*e);
    for (std::string& c : node->radial_coords)
      if (const std::string* t = lookup(c)) c = *t;
    return node;
  }
  auto node = std::make_shared<Expr>(*e);
  node->a = rename_variables(e->a, from, to);
  node->b = rename_variables(e->b, from, to);
  return node;
}

}  // namespace rck
