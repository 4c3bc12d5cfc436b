#include "soliton.hpp"

#include <algorithm>
#include <cmath>

namespace rck {

namespace {

ResidualTensor make_residual(const Mat& ric, const Mat& weighted_hess, double lam,
                             const Mat& g) {
  const int n = g.n;
  ResidualTensor rt;
  rt.components.n = n;
  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = ric(i, j), b = weighted_hess(i, j), c = lam * g(i, j);
      scale = std::max({scale, std::abs(a), std::abs(b), std::abs(c)});
      const double r = a + b - c;
      rt.components(i, j) = r;
      rt.max_abs = std::max(rt.max_abs, std::abs(r));
    }
  rt.scale = 1.0 + scale;
  return rt;
}

}  // namespace

double h_value(const GeometryEvaluation& ge, const HSpec& h, const ScalarField& f) {
  switch (h.kind) {
    case HSpec::Kind::One: return 1.0;
    case HSpec::Kind::EqualToF: return ge.scalar_jet(f, 0).value();
    case HSpec::Kind::Field: return ge.scalar_jet(h.field, 0).value();
  }
  return 1.0;
}

double lambda_value(const GeometryEvaluation& ge, const LambdaSpec& l) {
  return l.is_constant ? l.constant : ge.scalar_jet(l.field, 0).value();
}

Vec lambda_differential(const GeometryEvaluation& ge, const LambdaSpec& l) {
  Vec d;
  d.n = ge.dim();
  if (l.is_constant) return d;
  const Jet lj = ge.scalar_jet(l.field, 1);
  for (int i = 0; i < d.n; ++i) d[i] = lj.derivative(i).value();
  return d;
}

ResidualTensor soliton_residual(const GeometryEvaluation& ge, const SolitonInstance& s) {
  const int n = ge.dim();
  const auto fe = ge.field_eval(s.f);
  const double h = h_value(ge, s.h, s.f);
  const double lam = lambda_value(ge, s.lambda);
  Mat hh;
  hh.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hh(i, j) = h * fe.hess(i, j);
  return make_residual(ge.curvature().ric, hh, lam, ge.metric_value().g);
}

Lemma1Result lemma1_check(const GeometryEvaluation& ge, const SolitonInstance& s) {
  if (s.h.kind != HSpec::Kind::EqualToF)
    throw Error(ErrorKind::InvalidArgument, "identity checks require h equal to f");
  const int n = ge.dim();
  const auto& cb = ge.curvature();
  const auto& mv = ge.metric_value();
  const auto fe = ge.field_eval(s.f);
  const double fval = fe.f3.value();
  const double lam = lambda_value(ge, s.lambda);
  const Vec dlam = lambda_differential(ge, s.lambda);

  Lemma1Result res;
  const ResidualTensor rt = soliton_residual(ge, s);
  res.soliton_residual = rt.max_abs;
  res.advisory = rt.max_abs > kSolitonEps * rt.scale;

  // (1)  r + f lap f = lambda n
  res.defects[0] = std::abs(cb.scalar + fval * fe.lap - lam * n);

  // (2)  grad r = -2 (grad f) lap f + 2 f Q(grad f) + 2 hes_f(grad f)
  //       + 2 (n-1) grad lambda,
  // with hes_f the (1,1) Hessian operator.
  {
    Vec dr;
    dr.n = n;
    for (int i = 0; i < n; ++i) dr[i] = ge.r_jet().derivative(i).value();
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      double grad_r = 0, qgf = 0, hgf = 0, glam = 0;
      for (int j = 0; j < n; ++j) {
        grad_r += mv.g_inv(i, j) * dr[j];
        glam += mv.g_inv(i, j) * dlam[j];
        qgf += cb.q(i, j) * fe.grad[j];
        for (int k = 0; k < n; ++k) hgf += mv.g_inv(i, j) * fe.hess(j, k) * fe.grad[k];
      }
      const double rhs = -2.0 * fe.grad[i] * fe.lap + 2.0 * fval * qgf + 2.0 * hgf +
                         2.0 * (n - 1) * glam;
      worst = std::max(worst, std::abs(grad_r - rhs));
    }
    res.defects[1] = worst;
  }

  // (3)  f R(X,Y,Z, grad f) = dlam(X) g(Y,Z) - dlam(Y) g(X,Z)
  //      - [df(X) Hess(Y,Z) - df(Y) Hess(X,Z)]
  //      - [(D_X Ric)(Y,Z) - (D_Y Ric)(X,Z)], evaluated as stated.
  {
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double lhs = 0;
          for (int l = 0; l < n; ++l) lhs += cb.riem_lo(i, j, k, l) * fe.grad[l];
          lhs *= fval;
          const double rhs = dlam[i] * mv.g(j, k) - dlam[j] * mv.g(i, k) -
                             (fe.df[i] * fe.hess(j, k) - fe.df[j] * fe.hess(i, k)) -
                             (cb.grad_ric(i, j, k) - cb.grad_ric(j, i, k));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    res.defects[2] = worst;
  }
  return res;
}

Lemma2Result lemma2_check(const GeometryEvaluation& ge, const SolitonInstance& s,
                          double ric_shift) {
  if (s.h.kind != HSpec::Kind::EqualToF)
    throw Error(ErrorKind::InvalidArgument, "identity checks require h equal to f");
  const int n = ge.dim();
  if (n < 3)
    throw Error(ErrorKind::DimensionTooSmall, "Weyl identity needs dimension >= 3");
  const auto& cb = ge.curvature();
  const auto& mv = ge.metric_value();
  const auto fe = ge.field_eval(s.f);
  const double fval = fe.f3.value();
  if (std::abs(fval) < kPotentialGuard)
    throw Error(ErrorKind::PotentialNearZero, "potential too close to zero for 1/f terms");

  const Ten4& w = ge.weyl();
  const Ten3& c = ge.cotton();

  Lemma2Result res;
  const ResidualTensor rt = soliton_residual(ge, s);
  res.soliton_residual = rt.max_abs;
  res.advisory = rt.max_abs > kSolitonEps * rt.scale;

  Mat ric = cb.ric;
  if (ric_shift != 0.0)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ric(i, j) += ric_shift * mv.g(i, j);

  Vec ric_gf, dnorm;
  ric_gf.n = dnorm.n = n;
  for (int i = 0; i < n; ++i) {
    double a = 0;
    for (int l = 0; l < n; ++l) a += ric(i, l) * fe.grad[l];
    ric_gf[i] = a;
    dnorm[i] = fe.gradnorm2_jet.derivative(i).value();
  }

  const double cr = 1.0 / ((n - 1) * (n - 2));
  const double cs = 1.0 / (n - 2);
  const double inv_f = 1.0 / fval;
  double worst = 0;
  std::array<double, 8>& mag = res.term_magnitudes;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = 0;
        for (int l = 0; l < n; ++l) lhs += w(i, j, k, l) * fe.grad[l];
        const double t1 = cr * (ric_gf[i] * mv.g(j, k) - ric_gf[j] * mv.g(i, k));
        const double t2 = -cr * cb.scalar * (fe.df[i] * mv.g(j, k) - fe.df[j] * mv.g(i, k));
        const double t3 = cs * (fe.df[i] * ric(j, k) - fe.df[j] * ric(i, k));
        const double t4 = -inv_f * (fe.df[i] * fe.hess(j, k) - fe.df[j] * fe.hess(i, k));
        const double t5 = fe.lap * inv_f / (n - 1) *
                          (fe.df[i] * mv.g(j, k) - fe.df[j] * mv.g(i, k));
        const double t6 = -0.5 * inv_f / (n - 1) *
                          (dnorm[i] * mv.g(j, k) - dnorm[j] * mv.g(i, k));
        const double t7 = -inv_f * c(i, j, k);
        mag[0] = std::max(mag[0], std::abs(t1));
        mag[1] = std::max(mag[1], std::abs(t2));
        mag[2] = std::max(mag[2], std::abs(t3));
        mag[3] = std::max(mag[3], std::abs(t4));
        mag[4] = std::max(mag[4], std::abs(t5));
        mag[5] = std::max(mag[5], std::abs(t6));
        mag[6] = std::max(mag[6], std::abs(t7));
        mag[7] = std::max(mag[7], std::abs(lhs));
        worst = std::max(worst, std::abs(lhs - (t1 + t2 + t3 + t4 + t5 + t6 + t7)));
      }
  res.defect = worst;
  return res;
}

IsotropyDiagnostics isotropy_diagnostics(const GeometryEvaluation& ge,
                                         const SolitonInstance& s) {
  const int n = ge.dim();
  if (n != 4)
    throw Error(ErrorKind::DimensionMismatch, "isotropy diagnostics are for dimension 4");
  const auto& cb = ge.curvature();
  const auto fe = ge.field_eval(s.f);
  const double lam = lambda_value(ge, s.lambda);

  IsotropyDiagnostics d;
  d.gradnorm2 = fe.gradnorm2;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    double q = 0;
    for (int k = 0; k < n; ++k) q += cb.q(i, k) * fe.grad[k];
    worst = std::max(worst, std::abs(q - lam * fe.grad[i]));
  }
  d.qgradf_defect = worst;
  const double fval = fe.f3.value();
  if (std::abs(fval) < kPotentialGuard)
    throw Error(ErrorKind::PotentialNearZero, "potential too close to zero for 1/f terms");
  d.scalar_relation_defect = std::abs(cb.scalar - 4.0 * lam + 2.0 * fe.lap / fval);
  return d;
}

ResidualTensor gqe_residual(const GeometryEvaluation& ge, const GqeInstance& q) {
  const int n = ge.dim();
  const auto fe = ge.field_eval(q.f);
  const double lam = lambda_value(ge, q.lambda);
  Mat weighted;
  weighted.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      weighted(i, j) = fe.hess(i, j) - q.alpha * fe.df[i] * fe.df[j];
  return make_residual(ge.curvature().ric, weighted, lam, ge.metric_value().g);
}

double gqe_transform_defect(const GeometryEvaluation& ge, const ScalarField& f, double m) {
  if (!(m > 0)) throw Error(ErrorKind::InvalidArgument, "m must be positive");
  const int n = ge.dim();
  const auto fe = ge.field_eval(f);
  const Jet phi = exp(fe.f3 * (-1.0 / m));
  const Mat hess_phi = ge.hessian_from_jet(phi);
  const double phival = phi.value();
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double lhs = (m / phival) * hess_phi(i, j) + fe.hess(i, j) -
                         (1.0 / m) * fe.df[i] * fe.df[j];
      worst = std::max(worst, std::abs(lhs));
    }
  return worst;
}

LambdaFit solve_lambda(const GeometryEvaluation& ge, const ScalarField& f, const HSpec& h) {
  const int n = ge.dim();
  const auto& cb = ge.curvature();
  const auto& mv = ge.metric_value();
  const auto fe = ge.field_eval(f);
  const double hv = h_value(ge, h, f);
  // Least squares in the g-induced pairing: <Ric + h Hess f, g>/<g,g>.
  LambdaFit fit;
  fit.lambda_fit = (cb.scalar + hv * fe.lap) / n;
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(cb.ric(i, j) + hv * fe.hess(i, j) -
                                       fit.lambda_fit * mv.g(i, j)));
  fit.defect = worst;
  return fit;
}

ResidualTensor soliton_residual(const SolitonInstance& s, std::span<const double> p) {
  GeometryEvaluation ge(s.metric, p);
  return soliton_residual(ge, s);
}

Lemma1Result lemma1_check(const SolitonInstance& s, std::span<const double> p) {
  GeometryEvaluation ge(s.metric, p);
  return lemma1_check(ge, s);
}

Lemma2Result lemma2_check(const SolitonInstance& s, std::span<const double> p) {
  GeometryEvaluation ge(s.metric, p);
  return lemma2_check(ge, s);
}

IsotropyDiagnostics isotropy_diagnostics(const SolitonInstance& s, std::span<const double> p) {
  GeometryEvaluation ge(s.metric, p);
  return isotropy_diagnostics(ge, s);
}

ResidualTensor gqe_residual(const GqeInstance& q, std::span<const double> p) {
  GeometryEvaluation ge(q.metric, p);
  return gqe_residual(ge, q);
}

}  // namespace rck
