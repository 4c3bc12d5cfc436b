#include "jet.hpp"

#include <cmath>
#include <utility>

namespace rck {

namespace {

constexpr int kMaxVars = 6;
constexpr int kMaxOrder = 3;

int pack(std::span<const uint8_t> e, int n) {
  int key = 0;
  for (int i = 0; i < n; ++i) key |= static_cast<int>(e[static_cast<size_t>(i)]) << (2 * i);
  return key;
}

// All multi-indices of total degree == d, lexicographic, first variable most
// significant, larger exponents first.
void gen_degree(int n, int var, int left, std::array<uint8_t, 6>& cur,
                std::vector<std::array<uint8_t, 6>>& out) {
  if (var == n - 1) {
    cur[static_cast<size_t>(var)] = static_cast<uint8_t>(left);
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[static_cast<size_t>(var)] = static_cast<uint8_t>(e);
    gen_degree(n, var + 1, left - e, cur, out);
  }
}

JetLayout build_layout(int n, int order) {
  JetLayout lay;
  lay.n_vars = n;
  lay.order = order;
  for (int d = 0; d <= order; ++d) {
    std::array<uint8_t, 6> cur{};
    gen_degree(n, 0, d, cur, lay.exps);
  }
  lay.size = static_cast<int>(lay.exps.size());
  lay.pos.assign(1 << (2 * n), -1);
  for (int i = 0; i < lay.size; ++i)
    lay.pos[static_cast<size_t>(pack(lay.exps[static_cast<size_t>(i)], n))] = static_cast<int16_t>(i);
  lay.prod.assign(static_cast<size_t>(lay.size) * static_cast<size_t>(lay.size), -1);
  for (int i = 0; i < lay.size; ++i) {
    for (int j = 0; j < lay.size; ++j) {
      int total = 0;
      std::array<uint8_t, 6> sum{};
      for (int v = 0; v < n; ++v) {
        sum[static_cast<size_t>(v)] = static_cast<uint8_t>(lay.exps[static_cast<size_t>(i)][static_cast<size_t>(v)] +
                                                           lay.exps[static_cast<size_t>(j)][static_cast<size_t>(v)]);
        total += sum[static_cast<size_t>(v)];
      }
      if (total <= order)
        lay.prod[static_cast<size_t>(i) * static_cast<size_t>(lay.size) + static_cast<size_t>(j)] =
            lay.pos[static_cast<size_t>(pack(sum, n))];
    }
  }
  return lay;
}

const std::vector<JetLayout>& all_layouts() {
  static const std::vector<JetLayout> layouts = [] {
    std::vector<JetLayout> v;
    v.reserve(kMaxVars * (kMaxOrder + 1));
    for (int n = 1; n <= kMaxVars; ++n)
      for (int k = 0; k <= kMaxOrder; ++k) v.push_back(build_layout(n, k));
    return v;
  }();
  return layouts;
}

double factorial(int k) {
  static const double f[4] = {1.0, 1.0, 2.0, 6.0};
  return f[k];
}

}  // namespace

int JetLayout::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != n_vars)
    throw Error(ErrorKind::ShapeMismatch, "multi-index length does not match n_vars");
  int total = 0, key = 0;
  for (int i = 0; i < n_vars; ++i) {
    const int e = alpha[static_cast<size_t>(i)];
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative multi-index entry");
    total += e;
    if (e > kMaxOrder) total = order + 1;  // force the order check below
    else key |= e << (2 * i);
  }
  if (total > order) throw Error(ErrorKind::OrderExceeded, "multi-index exceeds jet order");
  return pos[static_cast<size_t>(key)];
}

const JetLayout& jet_layout(int n_vars, int order) {
  if (n_vars < 1 || n_vars > kMaxVars)
    throw Error(ErrorKind::ShapeMismatch, "n_vars must be in 1..6");
  if (order < 0 || order > kMaxOrder)
    throw Error(ErrorKind::ShapeMismatch, "order must be in 0..3");
  return all_layouts()[static_cast<size_t>((n_vars - 1) * (kMaxOrder + 1) + order)];
}

Jet Jet::constant(double value, int n_vars, int order) {
  Jet j(&jet_layout(n_vars, order));
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int index, double value, int n_vars, int order) {
  if (index < 0 || index >= n_vars)
    throw Error(ErrorKind::IndexOutOfRange, "variable index out of range");
  Jet j(&jet_layout(n_vars, order));
  j.coeffs_[0] = value;
  if (order >= 1) {
    std::array<int, 6> alpha{};
    alpha[static_cast<size_t>(index)] = 1;
    j.coeffs_[static_cast<size_t>(j.layout_->index_of(std::span<const int>(alpha.data(), static_cast<size_t>(n_vars))))] = 1.0;
  }
  return j;
}

void Jet::check_same_shape(const Jet& o) const {
  if (layout_ != o.layout_)
    throw Error(ErrorKind::ShapeMismatch, "jets have mismatched n_vars or order");
  if (!layout_) throw Error(ErrorKind::ShapeMismatch, "uninitialized jet");
}

double Jet::partial(std::span<const int> alpha) const {
  if (!layout_) throw Error(ErrorKind::ShapeMismatch, "uninitialized jet");
  const int idx = layout_->index_of(alpha);
  double fact = 1.0;
  for (int i = 0; i < layout_->n_vars; ++i) fact *= factorial(alpha[static_cast<size_t>(i)]);
  return coeffs_[static_cast<size_t>(idx)] * fact;
}

Jet Jet::derivative(int i) const {
  if (!layout_) throw Error(ErrorKind::ShapeMismatch, "uninitialized jet");
  if (i < 0 || i >= layout_->n_vars)
    throw Error(ErrorKind::IndexOutOfRange, "derivative index out of range");
  if (layout_->order == 0)
    throw Error(ErrorKind::OrderExceeded, "cannot differentiate an order-0 jet");
  const JetLayout& lo = jet_layout(layout_->n_vars, layout_->order - 1);
  Jet r(&lo);
  for (int s = 0; s < lo.size; ++s) {
    std::array<uint8_t, 6> e = lo.exps[static_cast<size_t>(s)];
    e[static_cast<size_t>(i)]++;
    const int16_t src = layout_->pos[static_cast<size_t>(pack(e, layout_->n_vars))];
    r.coeffs_[static_cast<size_t>(s)] =
        coeffs_[static_cast<size_t>(src)] * static_cast<double>(e[static_cast<size_t>(i)]);
  }
  return r;
}

Jet Jet::truncated(int new_order) const {
  if (!layout_) throw Error(ErrorKind::ShapeMismatch, "uninitialized jet");
  if (new_order > layout_->order)
    throw Error(ErrorKind::OrderExceeded, "cannot truncate to a higher order");
  if (new_order == layout_->order) return *this;
  const JetLayout& lo = jet_layout(layout_->n_vars, new_order);
  Jet r(&lo);
  // Graded layout: the lower-order coefficients are a prefix.
  for (int s = 0; s < lo.size; ++s) r.coeffs_[static_cast<size_t>(s)] = coeffs_[static_cast<size_t>(s)];
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  check_same_shape(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same_shape(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_same_shape(b);
  const JetLayout& lay = *a.layout_;
  Jet r(&lay);
  const int size = lay.size;
  for (int i = 0; i < size; ++i) {
    const double ai = a.coeffs_[static_cast<size_t>(i)];
    if (ai == 0.0) continue;
    const int16_t* row = &lay.prod[static_cast<size_t>(i) * static_cast<size_t>(size)];
    for (int j = 0; j < size; ++j) {
      const int16_t k = row[j];
      if (k < 0) continue;
      r.coeffs_[static_cast<size_t>(k)] += ai * b.coeffs_[static_cast<size_t>(j)];
    }
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  return a * jet_recip(b);
}

Jet operator+(Jet a, double s) {
  if (!a.layout_) throw Error(ErrorKind::ShapeMismatch, "uninitialized jet");
  a.coeffs_[0] += s;
  return a;
}

Jet operator-(Jet a, double s) { return std::move(a) + (-s); }

Jet operator*(Jet a, double s) {
  for (double& c : a.coeffs_) c *= s;
  return a;
}

Jet Jet::compose(const std::array<double, 4>& derivs) const {
  if (!layout_) throw Error(ErrorKind::ShapeMismatch, "uninitialized jet");
  const int order = layout_->order;
  // Perturbation part: same jet with the constant knocked out.
  Jet p = *this;
  p.coeffs_[0] = 0.0;
  // Horner in p with Taylor-normalized derivative coefficients.
  Jet acc = Jet::constant(derivs[static_cast<size_t>(order)] / factorial(order),
                          layout_->n_vars, order);
  for (int k = order - 1; k >= 0; --k) {
    acc = acc * p;
    acc.coeffs_[0] += derivs[static_cast<size_t>(k)] / factorial(k);
  }
  return acc;
}

Jet exp(const Jet& a) {
  const double v = std::exp(a.value());
  return a.compose({v, v, v, v});
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw Error(ErrorKind::DomainError, "ln of non-positive value");
  return a.compose({std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)});
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw Error(ErrorKind::DomainError, "sqrt of non-positive value");
  const double s = std::sqrt(v);
  return a.compose({s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)});
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose({s, c, -s, -c});
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose({c, -s, -c, s});
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose({s, c, s, c});
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose({c, s, c, s});
}

Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value());
  const double u = 1.0 - t * t;  // sech^2
  return a.compose({t, u, -2.0 * t * u, u * (6.0 * t * t - 2.0)});
}

Jet jet_recip(const Jet& a) {
  const double v = a.value();
  if (v == 0.0) throw Error(ErrorKind::DivisionByZero, "division by a jet with zero value");
  const double v2 = v * v;
  return a.compose({1.0 / v, -1.0 / v2, 2.0 / (v2 * v), -6.0 / (v2 * v2)});
}

Jet jet_pow(const Jet& a, double expo) {
  const double r = std::round(expo);
  if (r == expo && std::abs(r) <= 32.0) {
    // Exact integer powers by repeated multiplication; valid for any base.
    long e = static_cast<long>(r);
    const bool neg = e < 0;
    e = neg ? -e : e;
    Jet base = a;
    Jet acc = Jet::constant(1.0, a.n_vars(), a.order());
    while (e > 0) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return neg ? jet_recip(acc) : acc;
  }
  const double v = a.value();
  if (!(v > 0.0))
    throw Error(ErrorKind::DomainError, "non-integer power of a non-positive value");
  const double p0 = std::pow(v, expo);
  const double p1 = expo * std::pow(v, expo - 1.0);
  const double p2 = expo * (expo - 1.0) * std::pow(v, expo - 2.0);
  const double p3 = expo * (expo - 1.0) * (expo - 2.0) * std::pow(v, expo - 3.0);
  return a.compose({p0, p1, p2, p3});
}

}  // namespace rck
