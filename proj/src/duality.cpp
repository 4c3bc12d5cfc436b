#include "duality.hpp"

#include <algorithm>
#include <cmath>

namespace rck {

namespace {

const std::array<std::array<int, 2>, 6> kPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Sign of E_A ^ E_B relative to dx^0^dx^1^dx^2^dx^3; 0 when indices overlap.
int wedge_sign(int a, int b) {
  const int i = kPairs[static_cast<size_t>(a)][0], j = kPairs[static_cast<size_t>(a)][1];
  const int k = kPairs[static_cast<size_t>(b)][0], l = kPairs[static_cast<size_t>(b)][1];
  if (i == k || i == l || j == k || j == l) return 0;
  const int perm[4] = {i, j, k, l};
  int sign = 1;
  int p[4] = {perm[0], perm[1], perm[2], perm[3]};
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y)
      if (p[x] > p[y]) {
        std::swap(p[x], p[y]);
        sign = -sign;
      }
  return sign;
}

void require_dim4(const MetricValue& mv) {
  if (mv.g.n != 4)
    throw Error(ErrorKind::DimensionMismatch, "Hodge duality machinery needs dimension 4");
}

double mat_max_abs(const Mat& m) { return max_abs(m); }

Mat mat_mul(const Mat& a, const Mat& b) {
  Mat r;
  r.n = a.n;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      double s = 0;
      for (int k = 0; k < a.n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

}  // namespace

TwoFormBasis two_form_basis(const MetricValue& mv, int orientation) {
  require_dim4(mv);
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorKind::InvalidArgument, "orientation must be +1 or -1");
  TwoFormBasis b;
  b.pairs = kPairs;
  b.g2.n = 6;
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 6; ++c) {
      const int i = kPairs[static_cast<size_t>(a)][0], j = kPairs[static_cast<size_t>(a)][1];
      const int k = kPairs[static_cast<size_t>(c)][0], l = kPairs[static_cast<size_t>(c)][1];
      b.g2(a, c) = mv.g_inv(i, k) * mv.g_inv(j, l) - mv.g_inv(i, l) * mv.g_inv(j, k);
    }
  b.vol_coeff = orientation * std::sqrt(std::abs(mv.det));
  return b;
}

HodgeOperator hodge_star(const MetricValue& mv, int orientation) {
  const TwoFormBasis b = two_form_basis(mv, orientation);
  // Solve  sum_C wedge(A,C) S(C,B) = vol_coeff * G2(A,B)  for S.
  Mat wedge;
  wedge.n = 6;
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 6; ++c) wedge(a, c) = wedge_sign(a, c);
  const Mat winv = inverse(wedge);
  HodgeOperator h;
  h.star.n = 6;
  for (int c = 0; c < 6; ++c)
    for (int bcol = 0; bcol < 6; ++bcol) {
      double s = 0;
      for (int a = 0; a < 6; ++a) s += winv(c, a) * b.g2(a, bcol);
      h.star(c, bcol) = b.vol_coeff * s;
    }
  const Mat sq = mat_mul(h.star, h.star);
  const double scale = 1.0 + mat_max_abs(sq);
  double dplus = 0, dminus = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double id = i == j ? 1.0 : 0.0;
      dplus = std::max(dplus, std::abs(sq(i, j) - id));
      dminus = std::max(dminus, std::abs(sq(i, j) + id));
    }
  if (dplus <= 1e-10 * scale) h.s = 1;
  else if (dminus <= 1e-10 * scale) h.s = -1;
  else throw Error(ErrorKind::InvalidArgument, "Hodge star squared is not +/- identity");
  return h;
}

WeylEndomorphism weyl_split(const Ten4& weyl_lo, const MetricValue& mv,
                            const HodgeOperator& h) {
  require_dim4(mv);
  if (h.s != 1)
    throw Error(ErrorKind::SplitUnavailable,
                "self-dual split needs star^2 = +Id (neutral or Riemannian signature)");
  WeylEndomorphism we;
  we.w.n = we.plus.n = we.minus.n = 6;
  for (int a = 0; a < 6; ++a)
    for (int bcol = 0; bcol < 6; ++bcol) {
      const int i = kPairs[static_cast<size_t>(a)][0], j = kPairs[static_cast<size_t>(a)][1];
      const int k = kPairs[static_cast<size_t>(bcol)][0], l = kPairs[static_cast<size_t>(bcol)][1];
      double s = 0;
      for (int m = 0; m < 4; ++m)
        for (int p = 0; p < 4; ++p)
          s += mv.g_inv(k, m) * mv.g_inv(l, p) * weyl_lo(i, j, m, p);
      we.w(a, bcol) = s;
    }
  const Mat sw = mat_mul(h.star, we.w);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      we.plus(i, j) = 0.5 * (we.w(i, j) + sw(i, j));
      we.minus(i, j) = 0.5 * (we.w(i, j) - sw(i, j));
    }
  return we;
}

Frame orthonormal_frame(const MetricValue& mv, int orientation) {
  require_dim4(mv);
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorKind::InvalidArgument, "orientation must be +1 or -1");
  const double gscale = 1.0 + mat_max_abs(mv.g);
  const double tol = 1e-10 * gscale;

  auto inner = [&](const std::array<double, 4>& u, const std::array<double, 4>& v) {
    double s = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += mv.g(i, j) * u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
    return s;
  };

  // Candidate pivots: coordinate directions plus pairwise sums/differences
  // (the coordinate vectors of a Walker metric can all be null).
  std::vector<std::array<double, 4>> candidates;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> v{};
    v[static_cast<size_t>(i)] = 1.0;
    candidates.push_back(v);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (double sgn : {1.0, -1.0}) {
        std::array<double, 4> v{};
        v[static_cast<size_t>(i)] = 1.0;
        v[static_cast<size_t>(j)] = sgn;
        candidates.push_back(v);
      }

  std::array<std::array<double, 4>, 4> frame{};
  std::array<int, 4> eps{};
  for (int step = 0; step < 4; ++step) {
    double best_score = 0;
    std::array<double, 4> best{};
    for (const auto& cand : candidates) {
      std::array<double, 4> v = cand;
      for (int a = 0; a < step; ++a) {
        const double c = inner(v, frame[static_cast<size_t>(a)]) * eps[static_cast<size_t>(a)];
        for (int i = 0; i < 4; ++i) v[static_cast<size_t>(i)] -= c * frame[static_cast<size_t>(a)][static_cast<size_t>(i)];
      }
      double en = 0;
      for (double x : v) en += x * x;
      if (en < 1e-20) continue;
      const double inv = 1.0 / std::sqrt(en);
      for (double& x : v) x *= inv;
      const double q = inner(v, v);
      if (std::abs(q) > best_score) {
        best_score = std::abs(q);
        best = v;
      }
    }
    if (best_score <= tol)
      throw Error(ErrorKind::FrameConstructionFailed,
                  "all pivot candidates are numerically null");
    const double q = inner(best, best);
    const double inv = 1.0 / std::sqrt(std::abs(q));
    for (double& x : best) x *= inv;
    frame[static_cast<size_t>(step)] = best;
    eps[static_cast<size_t>(step)] = q < 0 ? -1 : 1;
  }

  // Negatives first (stable), then enforce positive orientation.
  std::array<std::array<double, 4>, 4> sorted{};
  std::array<int, 4> seps{};
  int w = 0;
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < 4; ++a)
      if ((pass == 0 && eps[static_cast<size_t>(a)] < 0) || (pass == 1 && eps[static_cast<size_t>(a)] > 0)) {
        sorted[static_cast<size_t>(w)] = frame[static_cast<size_t>(a)];
        seps[static_cast<size_t>(w)] = eps[static_cast<size_t>(a)];
        ++w;
      }
  Mat comp;
  comp.n = 4;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) comp(a, i) = sorted[static_cast<size_t>(a)][static_cast<size_t>(i)];
  if (determinant(comp) * orientation < 0)
    for (double& x : sorted[3]) x = -x;

  Frame f;
  f.kind = FrameKind::Orthonormal;
  f.vecs = sorted;
  f.eps = seps;
  f.orientation = orientation;
  return f;
}

Frame null_frame(const MetricValue& mv, int orientation) {
  if (!(mv.negative == 2 && mv.positive == 2))
    throw Error(ErrorKind::FrameConstructionFailed,
                "null frame construction needs neutral signature");
  const Frame on = orthonormal_frame(mv, orientation);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Frame f;
  f.kind = FrameKind::Null;
  f.orientation = orientation;
  // (T, U, V, W) = ((e1+e3), (e2+e4), (e3-e1), (e4-e2)) / sqrt(2),
  // with e1,e2 the timelike and e3,e4 the spacelike legs.
  for (int i = 0; i < 4; ++i) {
    const double e1 = on.vecs[0][static_cast<size_t>(i)], e2 = on.vecs[1][static_cast<size_t>(i)];
    const double e3 = on.vecs[2][static_cast<size_t>(i)], e4 = on.vecs[3][static_cast<size_t>(i)];
    f.vecs[0][static_cast<size_t>(i)] = (e1 + e3) * inv_sqrt2;
    f.vecs[1][static_cast<size_t>(i)] = (e2 + e4) * inv_sqrt2;
    f.vecs[2][static_cast<size_t>(i)] = (e3 - e1) * inv_sqrt2;
    f.vecs[3][static_cast<size_t>(i)] = (e4 - e2) * inv_sqrt2;
  }
  return f;
}

double weyl_on_vectors(const Ten4& w, std::span<const double> a, std::span<const double> b,
                       std::span<const double> c, std::span<const double> d) {
  double s = 0;
  const int n = w.n;
  for (int i = 0; i < n; ++i) {
    if (a[static_cast<size_t>(i)] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[static_cast<size_t>(j)] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        if (c[static_cast<size_t>(k)] == 0.0) continue;
        double inner = 0;
        for (int l = 0; l < n; ++l) inner += w(i, j, k, l) * d[static_cast<size_t>(l)];
        s += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)] * c[static_cast<size_t>(k)] * inner;
      }
    }
  }
  return s;
}

SelfDualReport selfdual_check(const Ten4& weyl_lo, const MetricValue& mv,
                              const Frame& frame, const WeylEndomorphism& split) {
  require_dim4(mv);
  SelfDualReport rep;
  rep.weyl_norm = max_abs(weyl_lo);
  rep.wplus_norm = mat_max_abs(split.plus);
  rep.wminus_norm = mat_max_abs(split.minus);
  rep.tolerance = 1e-8 * (1.0 + rep.weyl_norm);

  auto wv = [&](int a, int b, int x, int y) {
    return weyl_on_vectors(weyl_lo, frame.vecs[static_cast<size_t>(a)], frame.vecs[static_cast<size_t>(b)],
                           frame.vecs[static_cast<size_t>(x)], frame.vecs[static_cast<size_t>(y)]);
  };

  double defect = 0;
  if (frame.kind == FrameKind::Orthonormal) {
    // W(e1, e_i, X, Y) = sigma_{ijk} eps_j eps_k W(e_j, e_k, X, Y) with
    // (i,j,k) a permutation of the last three legs.
    static const int triples[3][3] = {{1, 2, 3}, {2, 1, 3}, {3, 1, 2}};
    static const int signs[3] = {1, -1, 1};  // parities of the rows above
    for (int t = 0; t < 3; ++t) {
      const int i = triples[t][0], j = triples[t][1], k = triples[t][2];
      const double ee = signs[t] * frame.eps[static_cast<size_t>(j)] * frame.eps[static_cast<size_t>(k)];
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
          defect = std::max(defect, std::abs(wv(0, i, x, y) - ee * wv(j, k, x, y)));
    }
  } else {
    // (T,U,V,W) stored in that order:
    // W(T,V,X,Y) = W(U,W,X,Y),  W(T,W,X,Y) = 0,  W(U,V,X,Y) = 0.
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        defect = std::max(defect, std::abs(wv(0, 2, x, y) - wv(1, 3, x, y)));
        defect = std::max(defect, std::abs(wv(0, 3, x, y)));
        defect = std::max(defect, std::abs(wv(1, 2, x, y)));
      }
  }
  rep.frame_defect = defect;
  rep.self_dual = defect <= rep.tolerance && rep.wminus_norm <= rep.tolerance;
  return rep;
}

}  // namespace rck
