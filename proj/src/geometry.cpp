#include "geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rck {

namespace {

constexpr double kDegeneracyRel = 1e-12;

}  // namespace

Chart::Chart(std::vector<std::string> names) : coords(std::move(names)) {
  const int n = dim();
  if (n < 1 || n > kMaxDim)
    throw Error(ErrorKind::ShapeMismatch, "chart dimension must be in 1..6");
  for (int i = 0; i < n; ++i) {
    const std::string& a = coords[static_cast<size_t>(i)];
    if (a.empty()) throw Error(ErrorKind::InvalidArgument, "empty coordinate name");
    if (is_reserved_word(a))
      throw Error(ErrorKind::InvalidArgument,
                  "coordinate name '" + a + "' is a reserved function name");
    for (int j = i + 1; j < n; ++j)
      if (a == coords[static_cast<size_t>(j)])
        throw Error(ErrorKind::InvalidArgument, "duplicate coordinate name '" + a + "'");
  }
}

int Chart::index_of(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (coords[static_cast<size_t>(i)] == name) return i;
  return -1;
}

// --- scalar field -----------------------------------------------------------

Jet ScalarField::eval(std::span<const std::string> coords,
                      std::span<const double> p, int order) const {
  if (!expr_) throw Error(ErrorKind::InvalidArgument, "empty scalar field");
  return evaluate(expr_, coords, p, order);
}

// --- metric field -----------------------------------------------------------

MetricField::MetricField(Chart chart, std::vector<std::vector<ExprPtr>> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  const int n = chart_.dim();
  if (n < 1) throw Error(ErrorKind::DimensionTooSmall, "metric needs dimension >= 1");
  if (static_cast<int>(components_.size()) != n)
    throw Error(ErrorKind::ShapeMismatch, "metric component matrix is not n x n");
  for (const auto& row : components_)
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorKind::ShapeMismatch, "metric component matrix is not n x n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!components_[static_cast<size_t>(i)][static_cast<size_t>(j)])
        throw Error(ErrorKind::InvalidArgument, "missing metric component");
      if (j > i && !structurally_equal(components_[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                       components_[static_cast<size_t>(j)][static_cast<size_t>(i)]))
        throw Error(ErrorKind::InvalidArgument,
                    "metric components are not structurally symmetric");
    }
}

MetricField parse_metric(const Chart& chart,
                         const std::vector<std::vector<std::string>>& entries) {
  std::vector<std::vector<ExprPtr>> comps;
  comps.reserve(entries.size());
  for (const auto& row : entries) {
    std::vector<ExprPtr> r;
    r.reserve(row.size());
    for (const auto& s : row) r.push_back(parse(s, chart.coords));
    comps.push_back(std::move(r));
  }
  // Share ASTs across the diagonal so user matrices only need textual symmetry.
  const size_t n = comps.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (j < comps[i].size() && i < comps[j].size()) {
        if (!structurally_equal(comps[i][j], comps[j][i]))
          throw Error(ErrorKind::InvalidArgument,
                      "metric entries (" + std::to_string(i) + "," + std::to_string(j) +
                          ") and transpose are not symmetric");
        comps[j][i] = comps[i][j];
      }
    }
  return MetricField(chart, std::move(comps));
}

// --- geometry evaluation ----------------------------------------------------

GeometryEvaluation::GeometryEvaluation(const MetricField& m, std::span<const double> p)
    : field_(m), n_(m.dim()), point_(p.begin(), p.end()) {
  if (static_cast<int>(p.size()) != n_)
    throw Error(ErrorKind::ShapeMismatch, "point length does not match chart dimension");
  const auto& coords = m.chart().coords;

  // Metric jets, order 3, symmetric pairs evaluated once.
  g3_.resize(static_cast<size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      Jet gij = evaluate(m.component(i, j), coords, p, 3);
      if (j > i) g3_[idx2(j, i)] = gij;
      g3_[idx2(i, j)] = std::move(gij);
    }

  // Point metric, determinant, degeneracy, signature.
  mv_.g.n = mv_.g_inv.n = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) mv_.g(i, j) = g3_[idx2(i, j)].value();
  mv_.det = determinant(mv_.g);
  const double gmax = max_abs(mv_.g);
  if (gmax == 0.0 || std::abs(mv_.det) < kDegeneracyRel * std::pow(gmax, n_))
    throw Error(ErrorKind::DegenerateMetric, "metric is degenerate at the sample point");
  const auto ev = symmetric_eigenvalues(mv_.g);
  for (int i = 0; i < n_; ++i) (ev[static_cast<size_t>(i)] < 0 ? mv_.negative : mv_.positive)++;

  // Inverse metric jets (Gauss-Jordan on jets, pivot by point value).
  {
    std::vector<Jet> a = g3_;
    ginv3_.resize(static_cast<size_t>(n_ * n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        ginv3_[idx2(i, j)] = Jet::constant(i == j ? 1.0 : 0.0, n_, 3);
    for (int col = 0; col < n_; ++col) {
      int piv = col;
      for (int r = col + 1; r < n_; ++r)
        if (std::abs(a[idx2(r, col)].value()) > std::abs(a[idx2(piv, col)].value())) piv = r;
      if (a[idx2(piv, col)].value() == 0.0)
        throw Error(ErrorKind::DegenerateMetric, "metric inverse failed");
      if (piv != col)
        for (int c = 0; c < n_; ++c) {
          std::swap(a[idx2(piv, c)], a[idx2(col, c)]);
          std::swap(ginv3_[idx2(piv, c)], ginv3_[idx2(col, c)]);
        }
      Jet inv_piv = jet_recip(a[idx2(col, col)]);
      for (int c = 0; c < n_; ++c) {
        a[idx2(col, c)] = a[idx2(col, c)] * inv_piv;
        ginv3_[idx2(col, c)] = ginv3_[idx2(col, c)] * inv_piv;
      }
      for (int r = 0; r < n_; ++r) {
        if (r == col) continue;
        Jet f = a[idx2(r, col)];
        if (f.value() == 0.0) {
          bool zero = true;
          for (double c : f.coeffs()) zero = zero && c == 0.0;
          if (zero) continue;
        }
        for (int c = 0; c < n_; ++c) {
          a[idx2(r, c)] -= f * a[idx2(col, c)];
          ginv3_[idx2(r, c)] -= f * ginv3_[idx2(col, c)];
        }
      }
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) mv_.g_inv(i, j) = ginv3_[idx2(i, j)].value();
  }

  // Christoffel jets, order 2:
  //   Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
  gamma2_.resize(static_cast<size_t>(n_ * n_ * n_));
  {
    std::vector<Jet> dg(static_cast<size_t>(n_ * n_ * n_));  // dg[l][i][j] = d_l g_ij, order 2
    for (int l = 0; l < n_; ++l)
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          Jet d = g3_[idx2(i, j)].derivative(l);
          if (j > i) dg[idx3(l, j, i)] = d;
          dg[idx3(l, i, j)] = std::move(d);
        }
    std::vector<Jet> ginv2(static_cast<size_t>(n_ * n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) ginv2[idx2(i, j)] = ginv3_[idx2(i, j)].truncated(2);
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          Jet sum = Jet::constant(0.0, n_, 2);
          for (int l = 0; l < n_; ++l) {
            Jet term = dg[idx3(i, j, l)] + dg[idx3(j, i, l)] - dg[idx3(l, i, j)];
            sum += ginv2[idx2(k, l)] * term;
          }
          sum = sum * 0.5;
          if (j > i) gamma2_[idx3(k, j, i)] = sum;
          gamma2_[idx3(k, i, j)] = std::move(sum);
        }
  }

  // Riemann (order 1):
  //   R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
  //             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
  riem_up1_.resize(static_cast<size_t>(n_ * n_ * n_ * n_));
  {
    std::vector<Jet> gamma1(static_cast<size_t>(n_ * n_ * n_));
    std::vector<Jet> dgamma(static_cast<size_t>(n_ * n_ * n_ * n_));  // [d][k][i][j]
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          gamma1[idx3(k, i, j)] = gamma2_[idx3(k, i, j)].truncated(1);
          for (int d = 0; d < n_; ++d)
            dgamma[idx4(d, k, i, j)] = gamma2_[idx3(k, i, j)].derivative(d);
        }
    for (int l = 0; l < n_; ++l)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          if (j == i) {
            for (int k = 0; k < n_; ++k)
              riem_up1_[idx4(l, i, j, k)] = Jet::constant(0.0, n_, 1);
            continue;
          }
          if (j < i) {
            for (int k = 0; k < n_; ++k)
              riem_up1_[idx4(l, i, j, k)] = -riem_up1_[idx4(l, j, i, k)];
            continue;
          }
          for (int k = 0; k < n_; ++k) {
            Jet sum = dgamma[idx4(i, l, j, k)] - dgamma[idx4(j, l, i, k)];
            for (int m = 0; m < n_; ++m)
              sum += gamma1[idx3(l, i, m)] * gamma1[idx3(m, j, k)] -
                     gamma1[idx3(l, j, m)] * gamma1[idx3(m, i, k)];
            riem_up1_[idx4(l, i, j, k)] = std::move(sum);
          }
        }
  }

  // Ricci (order 1), scalar (order 1).
  ric1_.resize(static_cast<size_t>(n_ * n_));
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) {
      Jet sum = Jet::constant(0.0, n_, 1);
      for (int m = 0; m < n_; ++m) sum += riem_up1_[idx4(m, m, j, k)];
      ric1_[idx2(j, k)] = std::move(sum);
    }
  r1_ = Jet::constant(0.0, n_, 1);
  {
    std::vector<Jet> ginv1(static_cast<size_t>(n_ * n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) ginv1[idx2(i, j)] = ginv3_[idx2(i, j)].truncated(1);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r1_ += ginv1[idx2(i, j)] * ric1_[idx2(i, j)];
  }

  // Point bundle.
  cb_.n = n_;
  cb_.gamma.n = cb_.grad_ric.n = n_;
  cb_.riem_up.n = cb_.riem_lo.n = n_;
  cb_.ric.n = cb_.q.n = n_;
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) cb_.gamma(k, i, j) = gamma2_[idx3(k, i, j)].value();
  for (int l = 0; l < n_; ++l)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          cb_.riem_up(l, i, j, k) = riem_up1_[idx4(l, i, j, k)].value();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          double s = 0;
          for (int m = 0; m < n_; ++m) s += mv_.g(l, m) * cb_.riem_up(m, i, j, k);
          cb_.riem_lo(i, j, k, l) = s;
        }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) cb_.ric(i, j) = ric1_[idx2(i, j)].value();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double s = 0;
      for (int m = 0; m < n_; ++m) s += mv_.g_inv(i, m) * cb_.ric(m, j);
      cb_.q(i, j) = s;
    }
  cb_.scalar = r1_.value();
  // D_k Ric_{ij} = d_k Ric_ij - Gamma^m_{ki} Ric_mj - Gamma^m_{kj} Ric_im
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        double s = ric1_[idx2(i, j)].derivative(k).value();
        for (int m = 0; m < n_; ++m)
          s -= cb_.gamma(m, k, i) * cb_.ric(m, j) + cb_.gamma(m, k, j) * cb_.ric(i, m);
        cb_.grad_ric(k, i, j) = s;
      }
}

void GeometryEvaluation::build_weyl() const {
  if (weyl1_) return;
  if (n_ <= 2)
    throw Error(ErrorKind::DimensionTooSmall, "Weyl tensor needs dimension >= 3");
  std::vector<Jet> w(static_cast<size_t>(n_ * n_ * n_ * n_));
  std::vector<Jet> g1(static_cast<size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g1[idx2(i, j)] = g3_[idx2(i, j)].truncated(1);
  const double cr = 1.0 / ((n_ - 1) * (n_ - 2));
  const double cs = 1.0 / (n_ - 2);
  // riem_lo as order-1 jets.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          Jet rl = Jet::constant(0.0, n_, 1);
          for (int m = 0; m < n_; ++m) rl += g1[idx2(l, m)] * riem_up1_[idx4(m, i, j, k)];
          Jet term = rl;
          term -= (g1[idx2(i, k)] * g1[idx2(j, l)] - g1[idx2(j, k)] * g1[idx2(i, l)]) * r1_ * cr;
          term -= (ric1_[idx2(j, k)] * g1[idx2(i, l)] - ric1_[idx2(i, k)] * g1[idx2(j, l)] +
                   g1[idx2(j, k)] * ric1_[idx2(i, l)] - g1[idx2(i, k)] * ric1_[idx2(j, l)]) * cs;
          w[idx4(i, j, k, l)] = std::move(term);
        }
  weyl_pt_.emplace();
  weyl_pt_->n = n_;
  for (int i = 0; i < n_ * n_ * n_ * n_; ++i)
    weyl_pt_->v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)].value();
  weyl1_ = std::move(w);
}

const Ten4& GeometryEvaluation::weyl() const {
  build_weyl();
  return *weyl_pt_;
}

const Ten3& GeometryEvaluation::cotton() const {
  if (cotton_pt_) return *cotton_pt_;
  Ten3 c;
  c.n = n_;
  Vec dr;
  dr.n = n_;
  for (int i = 0; i < n_; ++i) dr[i] = r1_.derivative(i).value();
  const double cf = 1.0 / (2.0 * (n_ - 1));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        c(i, j, k) = cb_.grad_ric(i, j, k) - cb_.grad_ric(j, i, k) -
                     cf * (mv_.g(j, k) * dr[i] - mv_.g(i, k) * dr[j]);
  cotton_pt_ = c;
  return *cotton_pt_;
}

const Ten3& GeometryEvaluation::div_weyl() const {
  if (div_weyl_pt_) return *div_weyl_pt_;
  if (n_ != 4)
    throw Error(ErrorKind::DimensionMismatch, "div W is implemented for dimension 4");
  build_weyl();
  const std::vector<Jet>& w = *weyl1_;
  Ten3 dw;
  dw.n = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        double sum = 0;
        for (int l = 0; l < n_; ++l)
          for (int m = 0; m < n_; ++m) {
            const double gi = mv_.g_inv(l, m);
            if (gi == 0.0) continue;
            // D_l W_{ijkm}
            double d = w[idx4(i, j, k, m)].derivative(l).value();
            for (int pp = 0; pp < n_; ++pp) {
              d -= cb_.gamma(pp, l, i) * w[idx4(pp, j, k, m)].value();
              d -= cb_.gamma(pp, l, j) * w[idx4(i, pp, k, m)].value();
              d -= cb_.gamma(pp, l, k) * w[idx4(i, j, pp, m)].value();
              d -= cb_.gamma(pp, l, m) * w[idx4(i, j, k, pp)].value();
            }
            sum += gi * d;
          }
        dw(i, j, k) = sum;
      }
  div_weyl_pt_ = dw;
  return *div_weyl_pt_;
}

std::optional<double> GeometryEvaluation::cotton_weyl_ratio() const {
  const Ten3& dw = div_weyl();
  const Ten3& c = cotton();
  double num = 0, den = 0;
  for (int i = 0; i < n_ * n_ * n_; ++i) {
    num += dw.v[static_cast<size_t>(i)] * c.v[static_cast<size_t>(i)];
    den += c.v[static_cast<size_t>(i)] * c.v[static_cast<size_t>(i)];
  }
  if (den < 1e-24) return std::nullopt;
  return num / den;
}

Jet GeometryEvaluation::scalar_jet(const ScalarField& f, int order) const {
  return f.eval(field_.chart().coords, point_, order);
}

GeometryEvaluation::FieldEval GeometryEvaluation::field_eval(const ScalarField& f) const {
  FieldEval fe;
  fe.f3 = scalar_jet(f, 3);
  fe.df.n = fe.grad.n = n_;
  fe.hess.n = n_;
  std::vector<Jet> df2(static_cast<size_t>(n_));  // order-2 jets of d_i f
  for (int i = 0; i < n_; ++i) {
    df2[static_cast<size_t>(i)] = fe.f3.derivative(i);
    fe.df[i] = df2[static_cast<size_t>(i)].value();
  }
  for (int i = 0; i < n_; ++i) {
    double s = 0;
    for (int j = 0; j < n_; ++j) s += mv_.g_inv(i, j) * fe.df[j];
    fe.grad[i] = s;
  }
  // Covariant Hessian as order-1 jets.
  fe.hess_jet.resize(static_cast<size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      Jet h = df2[static_cast<size_t>(i)].derivative(j);
      for (int k = 0; k < n_; ++k)
        h -= gamma2_[idx3(k, i, j)].truncated(1) * df2[static_cast<size_t>(k)].truncated(1);
      if (j > i) fe.hess_jet[idx2(j, i)] = h;
      fe.hess_jet[idx2(i, j)] = std::move(h);
    }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) fe.hess(i, j) = fe.hess_jet[idx2(i, j)].value();
  fe.lap_jet = Jet::constant(0.0, n_, 1);
  fe.gradnorm2_jet = Jet::constant(0.0, n_, 1);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Jet gi = ginv3_[idx2(i, j)].truncated(1);
      fe.lap_jet += gi * fe.hess_jet[idx2(i, j)];
      fe.gradnorm2_jet += gi * df2[static_cast<size_t>(i)].truncated(1) *
                          df2[static_cast<size_t>(j)].truncated(1);
    }
  fe.lap = fe.lap_jet.value();
  fe.gradnorm2 = fe.gradnorm2_jet.value();
  return fe;
}

Mat GeometryEvaluation::hessian_from_jet(const Jet& f_jet) const {
  if (f_jet.order() < 2)
    throw Error(ErrorKind::OrderExceeded, "Hessian needs a jet of order >= 2");
  Mat h;
  h.n = n_;
  Vec df;
  df.n = n_;
  for (int i = 0; i < n_; ++i) df[i] = f_jet.derivative(i).value();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double s = f_jet.derivative(i).derivative(j).value();
      for (int k = 0; k < n_; ++k) s -= cb_.gamma(k, i, j) * df[k];
      h(i, j) = s;
    }
  return h;
}

FieldCalculus GeometryEvaluation::field_calculus(const ScalarField& f) const {
  FieldEval fe = field_eval(f);
  FieldCalculus fc;
  fc.grad = fe.grad;
  fc.df = fe.df;
  fc.hess = fe.hess;
  fc.lap = fe.lap;
  fc.gradnorm2 = fe.gradnorm2;
  return fc;
}

Vec GeometryEvaluation::divergence02(std::span<const Jet> t) const {
  const Ten3 dt = covariant_derivative02(t);
  Vec out;
  out.n = n_;
  for (int j = 0; j < n_; ++j) {
    double s = 0;
    for (int l = 0; l < n_; ++l)
      for (int m = 0; m < n_; ++m) s += mv_.g_inv(l, m) * dt(l, m, j);
    out[j] = s;
  }
  return out;
}

Ten3 GeometryEvaluation::covariant_derivative02(std::span<const Jet> t) const {
  if (static_cast<int>(t.size()) != n_ * n_)
    throw Error(ErrorKind::ShapeMismatch, "tensor field size mismatch");
  Ten3 out;
  out.n = n_;
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        double s = t[idx2(i, j)].derivative(k).value();
        for (int m = 0; m < n_; ++m)
          s -= cb_.gamma(m, k, i) * t[idx2(m, j)].value() +
               cb_.gamma(m, k, j) * t[idx2(i, m)].value();
        out(k, i, j) = s;
      }
  return out;
}

// --- free-function wrappers --------------------------------------------------

MetricValue metric_at(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).metric_value();
}

Ten3 christoffel(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).curvature().gamma;
}

CurvatureBundle riemann(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).curvature();
}

FieldCalculus field_calculus(const MetricField& m, const ScalarField& f,
                             std::span<const double> p) {
  return GeometryEvaluation(m, p).field_calculus(f);
}

Ten4 weyl(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).weyl();
}

Ten3 cotton(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).cotton();
}

Ten3 div_weyl(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).div_weyl();
}

std::optional<double> cotton_weyl_ratio(const MetricField& m, std::span<const double> p) {
  return GeometryEvaluation(m, p).cotton_weyl_ratio();
}

}  // namespace rck
