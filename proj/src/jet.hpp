#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"

namespace rck {

// Truncated multivariate Taylor arithmetic: a Jet carries the value of a
// function at a point together with every partial derivative up to total
// order `order` (at most 3) in `n_vars` variables (at most 6).
//
// Coefficients are stored Taylor-normalized, c_alpha = d^alpha f / alpha!,
// in graded-lexicographic order: multi-indices sorted by total degree, and
// within one degree lexicographically with the first variable most
// significant and larger exponents first.  For n=2, order=2 the order is
// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).  Factorials are applied only
// when a true partial derivative is extracted.

struct JetLayout {
  int n_vars = 0;
  int order = 0;
  int size = 0;
  std::vector<std::array<uint8_t, 6>> exps;  // exponent vector per slot
  std::vector<int16_t> pos;                  // base-4 packed exponents -> slot
  std::vector<int16_t> prod;                 // slot x slot -> slot of the sum, -1 if truncated

  int index_of(std::span<const int> alpha) const;
};

const JetLayout& jet_layout(int n_vars, int order);

class Jet {
public:
  Jet() = default;

  static Jet constant(double value, int n_vars, int order);
  // Coordinate jet: value plus unit first-order coefficient for `index`.
  static Jet variable(int index, double value, int n_vars, int order);

  int n_vars() const { return layout_ ? layout_->n_vars : 0; }
  int order() const { return layout_ ? layout_->order : 0; }
  double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  // Taylor-normalized coefficient access (test/serialization use).
  std::span<const double> coeffs() const { return coeffs_; }

  // True partial derivative for the given multi-index (factorial applied).
  double partial(std::span<const int> alpha) const;

  // Jet of d/dx_i: one order lower, exact.
  Jet derivative(int i) const;
  // Copy truncated to a lower order (graded layout is prefix-stable).
  Jet truncated(int new_order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
  friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(Jet a, double s);
  friend Jet operator-(Jet a, double s);
  friend Jet operator*(Jet a, double s);
  friend Jet operator*(double s, Jet a) { return std::move(a) * s; }
  friend Jet operator+(double s, Jet a) { return std::move(a) + s; }

  // Composition with an analytic univariate function given by its
  // derivative values at this jet's value.
  Jet compose(const std::array<double, 4>& derivs) const;

private:
  explicit Jet(const JetLayout* layout)
      : layout_(layout), coeffs_(static_cast<size_t>(layout->size), 0.0) {}

  void check_same_shape(const Jet& o) const;

  const JetLayout* layout_ = nullptr;
  std::vector<double> coeffs_;

  friend Jet jet_pow(const Jet& a, double expo);
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
// Real-constant exponent; exact repeated multiplication for small integers.
Jet jet_pow(const Jet& a, double expo);
Jet jet_recip(const Jet& a);

}  // namespace rck
