#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"

// Small dense containers for pointwise tensor data.  Dimensions run up to 6,
// so everything lives on the stack.  Index order is row-major in the order
// the indices are written.

namespace rck {

constexpr int kMaxDim = 6;

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> v{};
  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }
};

struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> v{};
  double& operator()(int i, int j) { return v[static_cast<size_t>(i * n + j)]; }
  double operator()(int i, int j) const { return v[static_cast<size_t>(i * n + j)]; }
};

struct Ten3 {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> v{};
  double& operator()(int i, int j, int k) {
    return v[static_cast<size_t>((i * n + j) * n + k)];
  }
  double operator()(int i, int j, int k) const {
    return v[static_cast<size_t>((i * n + j) * n + k)];
  }
};

struct Ten4 {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> v{};
  double& operator()(int i, int j, int k, int l) {
    return v[static_cast<size_t>(((i * n + j) * n + k) * n + l)];
  }
  double operator()(int i, int j, int k, int l) const {
    return v[static_cast<size_t>(((i * n + j) * n + k) * n + l)];
  }
};

inline double max_abs(const Mat& m) {
  double r = 0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

inline double max_abs(const Ten3& t) {
  double r = 0;
  for (int i = 0; i < t.n * t.n * t.n; ++i) r = std::max(r, std::abs(t.v[static_cast<size_t>(i)]));
  return r;
}

inline double max_abs(const Ten4& t) {
  double r = 0;
  for (int i = 0; i < t.n * t.n * t.n * t.n; ++i) r = std::max(r, std::abs(t.v[static_cast<size_t>(i)]));
  return r;
}

// Gauss-Jordan inverse with partial pivoting.  Throws DegenerateMetric when a
// pivot collapses; callers that want a determinant test do it beforehand.
inline Mat inverse(const Mat& a) {
  const int n = a.n;
  Mat m = a, inv;
  inv.n = n;
  for (int i = 0; i < n; ++i) inv(i, i) = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == 0.0)
      throw Error(ErrorKind::DegenerateMetric, "singular matrix in inverse()");
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m(piv, c), m(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const double d = m(col, col);
    for (int c = 0; c < n; ++c) {
      m(col, c) /= d;
      inv(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        m(r, c) -= f * m(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

inline double determinant(const Mat& a) {
  const int n = a.n;
  Mat m = a;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.  Used only
// for signature counts, so a modest tolerance is plenty.
inline std::array<double, kMaxDim> symmetric_eigenvalues(const Mat& a) {
  const int n = a.n;
  Mat m = a;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::array<double, kMaxDim> ev{};
  for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = m(i, i);
  return ev;
}

// Linear solve A x = b (small, partial pivoting).
inline std::vector<double> solve(const std::vector<double>& a_rowmajor,
                                 std::vector<double> b, int n) {
  std::vector<double> m = a_rowmajor;
  auto at = [&](int r, int c) -> double& { return m[static_cast<size_t>(r * n + c)]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (at(piv, col) == 0.0)
      throw Error(ErrorKind::InvalidArgument, "singular system in solve()");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(at(piv, c), at(col, c));
      std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = at(r, col) / at(col, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) at(r, c) -= f * at(col, c);
      b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
    }
  }
  for (int i = 0; i < n; ++i) b[static_cast<size_t>(i)] /= at(i, i);
  return b;
}

}  // namespace rck
