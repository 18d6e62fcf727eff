#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

#include "spdc/core.hpp"

namespace spdc {

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive 61-point Gauss-Kronrod. Throws NumericalError when the estimated
// error misses the tolerance by a wide margin.
template <class F>
Quadrature integrate(F&& f, double a, double b, double tol = 1e-10, unsigned max_depth = 18) {
  Quadrature r;
  double l1 = 0.0;
  if (a == b) return r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol,
                                                                          &r.error, &l1);
  if (!std::isfinite(r.value))
    throw NumericalError("quadrature produced a non-finite value");
  double scale = std::max(std::abs(r.value), l1);
  if (r.error > 1e3 * tol * scale + 1e-300)
    throw NumericalError("quadrature did not converge: error " + std::to_string(r.error));
  return r;
}

struct ComplexQuadrature {
  complex value;
  double error = 0.0;
};

template <class F>
ComplexQuadrature integrate_complex(F&& f, double a, double b, double tol = 1e-10) {
  auto re = integrate([&](double x) { return std::real(f(x)); }, a, b, tol);
  auto im = integrate([&](double x) { return std::imag(f(x)); }, a, b, tol);
  return {{re.value, im.value}, std::hypot(re.error, im.error)};
}

}  // namespace spdc
