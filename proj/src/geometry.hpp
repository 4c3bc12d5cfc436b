#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expr.hpp"
#include "jet.hpp"
#include "linalg.hpp"

namespace rck {

// Conventions used throughout:
//   R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
//   riem_up(l,i,j,k) = component along dx^l of R(d_i, d_j) d_k
//   riem_lo(i,j,k,l) = g(R(d_i,d_j) d_k, d_l)
//   Ric(j,k) = sum_m riem_up(m,m,j,k)   (trace on the first argument slot;
//              fixed so the unit 2-sphere has Ric = g, r = 2)
//   Weyl is the totally trace-free part of riem_lo; it vanishes for
//   conformally flat metrics under the conventions above.
//   cotton(i,j,k) = D_i Ric_jk - D_j Ric_ik - (dr_i g_jk - dr_j g_ik)/(2(n-1))
//   div_weyl(i,j,k) = g^{lm} D_l W_{ijkm}   (contraction on the fourth slot)

struct Chart {
  std::vector<std::string> coords;

  Chart() = default;
  explicit Chart(std::vector<std::string> names);

  int dim() const { return static_cast<int>(coords.size()); }
  int index_of(const std::string& name) const;  // -1 when absent
};

class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(ExprPtr e) : expr_(std::move(e)) {}

  // Numeric radial profile as a field over the named coordinates.
  static ScalarField radial(RadialSpline s, std::vector<std::string> coords) {
    return ScalarField(make_radial_field(
        std::make_shared<const RadialSpline>(std::move(s)), std::move(coords)));
  }

  bool valid() const { return expr_ != nullptr; }
  const ExprPtr& expr() const { return expr_; }

  Jet eval(std::span<const std::string> coords, std::span<const double> p,
           int order) const;

private:
  ExprPtr expr_;
};

class MetricField {
public:
  MetricField() = default;
  MetricField(Chart chart, std::vector<std::vector<ExprPtr>> components);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const ExprPtr& component(int i, int j) const {
    return components_[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }

private:
  Chart chart_;
  std::vector<std::vector<ExprPtr>> components_;
};

struct MetricValue {
  Mat g;
  Mat g_inv;
  double det = 0;
  int negative = 0;  // eigenvalue signature counts
  int positive = 0;
};

struct CurvatureBundle {
  int n = 0;
  Ten3 gamma;     // gamma(k,i,j) = Gamma^k_{ij}
  Ten4 riem_up;   // riem_up(l,i,j,k)
  Ten4 riem_lo;   // riem_lo(i,j,k,l)
  Mat ric;
  Mat q;          // Q^i_j = g^{im} Ric_mj
  double scalar = 0;
  Ten3 grad_ric;  // grad_ric(k,i,j) = D_k Ric_{ij}
};

struct ConformalBundle {
  Ten4 weyl;      // lowered W_{ijkl}
  Ten3 cotton;    // C_{ijk}, (i,j) skew
  Ten3 div_weyl;  // (div W)_{ijk}
};

struct FieldCalculus {
  Vec grad;       // raised index
  Vec df;
  Mat hess;
  double lap = 0;
  double gradnorm2 = 0;
};

// All jet work for one (metric, point) pair.  Construction evaluates the
// metric to order 3 and runs the curvature chain; conformal pieces are
// filled on first use.  One instance per point, never shared across threads.
class GeometryEvaluation {
public:
  GeometryEvaluation(const MetricField& m, std::span<const double> p);

  int dim() const { return n_; }
  std::span<const double> point() const { return point_; }
  const MetricField& metric_field() const { return field_; }

  const MetricValue& metric_value() const { return mv_; }
  const CurvatureBundle& curvature() const { return cb_; }

  const Ten4& weyl() const;      // n >= 3; identically 0 when n == 3
  const Ten3& cotton() const;
  const Ten3& div_weyl() const;  // n == 4 only
  std::optional<double> cotton_weyl_ratio() const;

  // Scalar-field machinery at this point.
  struct FieldEval {
    Jet f3;                     // order-3 jet of the field
    Vec df, grad;
    Mat hess;
    double lap = 0, gradnorm2 = 0;
    std::vector<Jet> hess_jet;  // n*n order-1 jets, row-major
    Jet lap_jet;                // order 1
    Jet gradnorm2_jet;          // order 1
  };
  FieldEval field_eval(const ScalarField& f) const;
  FieldCalculus field_calculus(const ScalarField& f) const;

  Jet scalar_jet(const ScalarField& f, int order) const;

  // Covariant Hessian of an arbitrary jet of order >= 2 (derived fields).
  Mat hessian_from_jet(const Jet& f_jet) const;

  // Jet accessors (orders: g/ginv 3, gamma 2, ric/r 1).
  const Jet& g_jet(int i, int j) const { return g3_[idx2(i, j)]; }
  const Jet& ginv_jet(int i, int j) const { return ginv3_[idx2(i, j)]; }
  const Jet& gamma_jet(int k, int i, int j) const { return gamma2_[idx3(k, i, j)]; }
  const Jet& ric_jet(int i, int j) const { return ric1_[idx2(i, j)]; }
  const Jet& r_jet() const { return r1_; }

  // Covariant divergence of a symmetric (0,2) jet-tensor field (order >= 1),
  // (div T)_j = g^{lm} D_l T_{mj}, evaluated at the point.
  Vec divergence02(std::span<const Jet> t_jets) const;
  // Covariant derivative of the same, D_k T_{ij}, at the point.
  Ten3 covariant_derivative02(std::span<const Jet> t_jets) const;

private:
  size_t idx2(int i, int j) const { return static_cast<size_t>(i * n_ + j); }
  size_t idx3(int k, int i, int j) const {
    return static_cast<size_t>((k * n_ + i) * n_ + j);
  }
  size_t idx4(int i, int j, int k, int l) const {
    return static_cast<size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }

  void build_weyl() const;

  // Stored by value; components are shared immutable ASTs, so an evaluation
  // stays valid even when constructed from a temporary field.
  MetricField field_;
  int n_ = 0;
  std::vector<double> point_;

  std::vector<Jet> g3_, ginv3_;    // order 3
  std::vector<Jet> gamma2_;        // order 2
  std::vector<Jet> riem_up1_;      // order 1
  std::vector<Jet> ric1_;          // order 1
  Jet r1_;

  MetricValue mv_;
  CurvatureBundle cb_;

  mutable std::optional<std::vector<Jet>> weyl1_;  // order-1 lowered Weyl
  mutable std::optional<Ten4> weyl_pt_;
  mutable std::optional<Ten3> cotton_pt_;
  mutable std::optional<Ten3> div_weyl_pt_;
};

// Operation-shaped wrappers (each builds a GeometryEvaluation internally).
MetricValue metric_at(const MetricField& m, std::span<const double> p);
Ten3 christoffel(const MetricField& m, std::span<const double> p);
CurvatureBundle riemann(const MetricField& m, std::span<const double> p);
FieldCalculus field_calculus(const MetricField& m, const ScalarField& f,
                             std::span<const double> p);
Ten4 weyl(const MetricField& m, std::span<const double> p);
Ten3 cotton(const MetricField& m, std::span<const double> p);
Ten3 div_weyl(const MetricField& m, std::span<const double> p);
std::optional<double> cotton_weyl_ratio(const MetricField& m,
                                        std::span<const double> p);

// Convenience: parse a matrix of expression strings into a MetricField.
MetricField parse_metric(const Chart& chart,
                         const std::vector<std::vector<std::string>>& entries);

}  // namespace rck
