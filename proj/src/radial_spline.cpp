#include "radial_spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace rck {

void RadialSpline::finalize() {
  const int n = static_cast<int>(values.size());
  if (n < 2 || !(rho_hi > rho_lo))
    throw Error(ErrorKind::InvalidArgument,
                "radial spline needs >= 2 samples and rho_hi > rho_lo");
  second_derivs.assign(static_cast<size_t>(n), 0.0);
  if (n == 2) return;
  const double h = (rho_hi - rho_lo) / (n - 1);
  // Tridiagonal solve for natural-spline second derivatives.
  std::vector<double> c(static_cast<size_t>(n), 0.0), d(static_cast<size_t>(n), 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double rhs = 6.0 *
                       (values[static_cast<size_t>(i + 1)] - 2.0 * values[static_cast<size_t>(i)] +
                        values[static_cast<size_t>(i - 1)]) /
                       (h * h);
    const double m = 4.0 - c[static_cast<size_t>(i - 1)];
    c[static_cast<size_t>(i)] = 1.0 / m;
    d[static_cast<size_t>(i)] = (rhs - d[static_cast<size_t>(i - 1)]) / m;
  }
  for (int i = n - 2; i >= 1; --i)
    second_derivs[static_cast<size_t>(i)] =
        d[static_cast<size_t>(i)] -
        c[static_cast<size_t>(i)] * second_derivs[static_cast<size_t>(i + 1)];
}

std::array<double, 4> RadialSpline::eval(double rho) const {
  const int n = static_cast<int>(values.size());
  if (second_derivs.size() != values.size())
    throw Error(ErrorKind::InvalidArgument, "radial spline not finalized");
  const double h = (rho_hi - rho_lo) / (n - 1);
  int i = static_cast<int>(std::floor((rho - rho_lo) / h));
  i = std::clamp(i, 0, n - 2);
  const double x0 = rho_lo + i * h;
  const double a = (x0 + h - rho) / h;
  const double b = (rho - x0) / h;
  const double ya = values[static_cast<size_t>(i)], yb = values[static_cast<size_t>(i + 1)];
  const double ma = second_derivs[static_cast<size_t>(i)],
               mb = second_derivs[static_cast<size_t>(i + 1)];
  const double val =
      a * ya + b * yb + ((a * a * a - a) * ma + (b * b * b - b) * mb) * h * h / 6.0;
  const double d1 = (yb - ya) / h - (3.0 * a * a - 1.0) * h * ma / 6.0 +
                    (3.0 * b * b - 1.0) * h * mb / 6.0;
  const double d2 = a * ma + b * mb;
  const double d3 = (mb - ma) / h;
  return {val, d1, d2, d3};
}

std::string RadialSpline::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "riccicheck_radial_field 1\n";
  os << "rho_lo " << rho_lo << "\n";
  os << "rho_hi " << rho_hi << "\n";
  os << "order 3\n";
  os << "samples " << values.size() << "\n";
  for (double v : values) os << v << "\n";
  return os.str();
}

RadialSpline RadialSpline::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "riccicheck_radial_field" || version != 1)
    throw Error(ErrorKind::ConfigError, "not a riccicheck radial field file");
  RadialSpline s;
  size_t samples = 0;
  int order = 0;
  std::string key;
  while (is >> key) {
    if (key == "rho_lo") is >> s.rho_lo;
    else if (key == "rho_hi") is >> s.rho_hi;
    else if (key == "order") is >> order;
    else if (key == "samples") { is >> samples; break; }
    else throw Error(ErrorKind::ConfigError, "unknown radial field key '" + key + "'");
  }
  if (order != 3) throw Error(ErrorKind::ConfigError, "unsupported interpolation order");
  s.values.resize(samples);
  for (size_t i = 0; i < samples; ++i)
    if (!(is >> s.values[i]))
      throw Error(ErrorKind::ConfigError, "truncated radial field file");
  s.finalize();
  return s;
}

}  // namespace rck
