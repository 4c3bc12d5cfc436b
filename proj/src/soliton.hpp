#pragma once

#include <array>
#include <optional>

#include "geometry.hpp"

namespace rck {

// Residual and identity checks for gradient h-almost Ricci solitons
//   Ric + h Hess f = lambda g
// (h = f is the case the identity lemmas assume), and for generalized
// quasi-Einstein structures
//   Ric + Hess f - alpha df (x) df = lambda g.

struct HSpec {
  enum class Kind { One, EqualToF, Field };
  Kind kind = Kind::One;
  ScalarField field;

  static HSpec one() { return {}; }
  static HSpec equal_to_f() {
    HSpec h;
    h.kind = Kind::EqualToF;
    return h;
  }
  static HSpec of(ScalarField f) {
    HSpec h;
    h.kind = Kind::Field;
    h.field = std::move(f);
    return h;
  }
};

struct LambdaSpec {
  bool is_constant = true;
  double constant = 0;
  ScalarField field;

  static LambdaSpec of_constant(double c) {
    LambdaSpec l;
    l.constant = c;
    return l;
  }
  static LambdaSpec of_field(ScalarField f) {
    LambdaSpec l;
    l.is_constant = false;
    l.field = std::move(f);
    return l;
  }
};

struct SolitonInstance {
  MetricField metric;
  ScalarField f;
  HSpec h;
  LambdaSpec lambda;
};

struct GqeInstance {
  MetricField metric;
  ScalarField f;
  double alpha = 0;  // the m-form uses alpha = 1/m
  LambdaSpec lambda;
};

struct ResidualTensor {
  Mat components;
  double scale = 0;    // 1 + max |constituent tensor component|
  double max_abs = 0;
};

struct Lemma1Result {
  std::array<double, 3> defects{};  // identities (1), (2), (3)
  double soliton_residual = 0;
  bool advisory = false;  // residual above the soliton tolerance
};

struct Lemma2Result {
  double defect = 0;
  double soliton_residual = 0;
  bool advisory = false;
  // Peak magnitudes of the right-hand-side groups, in printed order:
  // Ric*g, r*g, g*Ric, df*Hess, (lap f)*df*g, d||grad f||^2*g, Cotton, and
  // the left-hand side.  Logged so cancellation tests are visibly non-vacuous.
  std::array<double, 8> term_magnitudes{};
};

struct IsotropyDiagnostics {
  double gradnorm2 = 0;
  double qgradf_defect = 0;
  double scalar_relation_defect = 0;  // |r - 4 lambda + 2 lap f / f|
};

struct LambdaFit {
  double lambda_fit = 0;
  double defect = 0;
};

// Soliton tolerance: identities are only expected to hold on solitons.
inline constexpr double kSolitonEps = 1e-8;
// Guard band for 1/f divisions.
inline constexpr double kPotentialGuard = 1e-8;

ResidualTensor soliton_residual(const GeometryEvaluation& ge, const SolitonInstance& s);
Lemma1Result lemma1_check(const GeometryEvaluation& ge, const SolitonInstance& s);
// `ric_shift` injects delta*g into every Ricci occurrence of the identity
// (sensitivity testing); 0 evaluates the identity as stated.
Lemma2Result lemma2_check(const GeometryEvaluation& ge, const SolitonInstance& s,
                          double ric_shift = 0.0);
IsotropyDiagnostics isotropy_diagnostics(const GeometryEvaluation& ge,
                                         const SolitonInstance& s);
ResidualTensor gqe_residual(const GeometryEvaluation& ge, const GqeInstance& q);
// Defect of (m/phi) Hess phi + Hess f - (1/m) df (x) df with phi = e^{-f/m}.
double gqe_transform_defect(const GeometryEvaluation& ge, const ScalarField& f, double m);
LambdaFit solve_lambda(const GeometryEvaluation& ge, const ScalarField& f, const HSpec& h);

// Point-shaped wrappers.
ResidualTensor soliton_residual(const SolitonInstance& s, std::span<const double> p);
Lemma1Result lemma1_check(const SolitonInstance& s, std::span<const double> p);
Lemma2Result lemma2_check(const SolitonInstance& s, std::span<const double> p);
IsotropyDiagnostics isotropy_diagnostics(const SolitonInstance& s, std::span<const double> p);
ResidualTensor gqe_residual(const GqeInstance& q, std::span<const double> p);

// Helpers shared with constructions/checks.
double h_value(const GeometryEvaluation& ge, const HSpec& h, const ScalarField& f);
double lambda_value(const GeometryEvaluation& ge, const LambdaSpec& l);
Vec lambda_differential(const GeometryEvaluation& ge, const LambdaSpec& l);

}  // namespace rck
