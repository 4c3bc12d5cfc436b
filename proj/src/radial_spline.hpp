#pragma once

#include <array>
#include <string>
#include <vector>

namespace rck {

// Natural cubic spline sample of a radial profile f(rho).  Used as an AST
// leaf so numerically constructed fields compose with ordinary expressions.
struct RadialSpline {
  double rho_lo = 0, rho_hi = 0;
  std::vector<double> values;
  std::vector<double> second_derivs;  // filled by finalize()

  void finalize();
  // Value and first three derivatives at rho (clamped to the knot range).
  std::array<double, 4> eval(double rho) const;

  std::string serialize() const;
  static RadialSpline deserialize(const std::string& text);
};

}  // namespace rck
