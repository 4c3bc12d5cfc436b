#pragma once

#include <array>
#include <optional>

#include "geometry.hpp"
#include "linalg.hpp"

namespace rck {

// Hodge-star machinery on 2-forms over a 4-dimensional tangent space.
// Basis of Lambda^2: dx^i ^ dx^j for i < j in lexicographic order,
//   (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
// The star operator is obtained by solving the defining relation
//   alpha ^ *beta = <<alpha, beta>> vol
// as a 6x6 linear system, so orientation and index conventions enter in
// exactly one place.

struct TwoFormBasis {
  std::array<std::array<int, 2>, 6> pairs;
  Mat g2;            // induced inner product on Lambda^2 (6x6)
  double vol_coeff;  // orientation * sqrt(|det g|)
};

struct HodgeOperator {
  Mat star;  // 6x6, acts on basis components
  int s;     // star^2 = s * Id; +1 neutral/Riemannian, -1 Lorentzian
};

struct WeylEndomorphism {
  Mat w;      // Weyl acting on Lambda^2 in the basis above
  Mat plus;   // (w + star w)/2
  Mat minus;  // (w - star w)/2
};

enum class FrameKind { Orthonormal, Null };

struct Frame {
  FrameKind kind = FrameKind::Orthonormal;
  // vecs[a] = coordinate components of the a-th frame vector.
  // Orthonormal: signs eps, ordered negatives first.
  // Null: vectors ordered (T, U, V, W), <T,V> = <U,W> = 1.
  std::array<std::array<double, 4>, 4> vecs{};
  std::array<int, 4> eps{};
  int orientation = 1;
};

struct SelfDualReport {
  double frame_defect = 0;  // worst violation of the frame-form criterion
  double wplus_norm = 0;
  double wminus_norm = 0;
  double weyl_norm = 0;     // scale for the tolerance
  double tolerance = 0;
  bool self_dual = false;   // frame criterion and ||W-|| both below tolerance
};

TwoFormBasis two_form_basis(const MetricValue& mv, int orientation);
HodgeOperator hodge_star(const MetricValue& mv, int orientation);

// Requires s == +1; Lorentzian signatures report SplitUnavailable.
WeylEndomorphism weyl_split(const Ten4& weyl_lo, const MetricValue& mv,
                            const HodgeOperator& h);

Frame orthonormal_frame(const MetricValue& mv, int orientation);
Frame null_frame(const MetricValue& mv, int orientation);

// Frame criterion (orthonormal or null form depending on frame.kind)
// cross-checked against the Hodge split of the same Weyl tensor.
SelfDualReport selfdual_check(const Ten4& weyl_lo, const MetricValue& mv,
                              const Frame& frame, const WeylEndomorphism& split);

// W(a,b,c,d) for coordinate-component vectors.
double weyl_on_vectors(const Ten4& weyl_lo, std::span<const double> a,
                       std::span<const double> b, std::span<const double> c,
                       std::span<const double> d);

}  // namespace rck
