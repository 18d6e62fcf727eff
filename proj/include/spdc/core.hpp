#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spdc {

using complex = std::complex<double>;

// Units throughout: mm, fs, rad/fs.
inline constexpr double kSpeedOfLight = 2.99792458e-4;  // mm/fs
inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double e1 = 0.0;
  double e2 = 0.0;  // lies in the plane of the optic axis

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.e1 + b.e1, a.e2 + b.e2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.e1 - b.e1, a.e2 - b.e2}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.e1, -a.e2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.e1, s * a.e2}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
  constexpr double dot(Vec2 o) const { return e1 * o.e1 + e2 * o.e2; }
  double norm() const { return std::hypot(e1, e2); }
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double omega_from_wavelength_nm(double lambda_nm) {
  return 2.0 * kPi * kSpeedOfLight / (lambda_nm * 1e-6);
}

inline double wavelength_um_from_omega(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega * 1e3;
}

inline double deg(double d) { return d * kPi / 180.0; }
inline double to_deg(double r) { return r * 180.0 / kPi; }

// sin(x)/x
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

inline double triangle(double x) {
  double a = std::abs(x);
  return a < 1.0 ? 1.0 - a : 0.0;
}

}  // namespace spdc
