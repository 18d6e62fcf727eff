#pragma once

#include <boost/math/tools/roots.hpp>

#include <optional>
#include <string>

#include "spdc/core.hpp"
#include "spdc/sellmeier.hpp"

namespace spdc {

enum class Polarization { Ordinary, Extraordinary };

struct CrystalSpec {
  std::string material = "BBO";
  double thickness_mm = 1.5;
  std::optional<double> cut_angle_rad;  // empty: solve collinear degenerate phase matching
  double pump_wavelength_nm = 351.1;

  void validate() const {
    if (!(thickness_mm > 0.0)) throw DomainError("crystal thickness must be > 0");
    if (!(pump_wavelength_nm > 0.0)) throw DomainError("pump wavelength must be > 0");
    if (cut_angle_rad && !(*cut_angle_rad > 0.0 && *cut_angle_rad < kPi / 2))
      throw DomainError("cut angle must lie in (0, 90) degrees");
  }
};

// Expansion coefficients of the wave-vector mismatch about degenerate
// collinear type-II phase matching. Inverse velocities in fs/mm.
struct DispersionParams {
  double omega_p0 = 0.0;
  double theta_oa = 0.0;
  double K_o = 0.0;
  double K_e = 0.0;
  double inv_u_o = 0.0;
  double inv_u_e = 0.0;
  double inv_u_p = 0.0;
  double D = 0.0;       // 1/u_o - 1/u_e
  double D_plus = 0.0;  // 1/u_p - (1/u_o + 1/u_e)/2
  double M = 0.0;       // signal walk-off, > 0 with e2 toward the optic axis
  double M_p = 0.0;     // pump walk-off
};

class UniaxialCrystal {
 public:
  UniaxialCrystal(SellmeierModel ordinary, SellmeierModel extraordinary)
      : o_(std::move(ordinary)), e_(std::move(extraordinary)) {}

  static UniaxialCrystal from_table(const SellmeierTable& t, const std::string& name) {
    return UniaxialCrystal(t.model(name, "o"), t.model(name, "e"));
  }

  static const UniaxialCrystal& bbo() {
    static const UniaxialCrystal c = from_table(SellmeierTable::builtin(), "BBO");
    return c;
  }

  double index_ordinary(double omega) const { return o_.index(wavelength_um_from_omega(omega)); }
  double index_principal_e(double omega) const { return e_.index(wavelength_um_from_omega(omega)); }

  // theta is the angle between the wave vector and the optic axis
  double index_extraordinary(double omega, double theta) const {
    double no = index_ordinary(omega), nE = index_principal_e(omega);
    double c = std::cos(theta), s = std::sin(theta);
    return 1.0 / std::sqrt(c * c / (no * no) + s * s / (nE * nE));
  }

  double index(double omega, Polarization p, double theta) const {
    return p == Polarization::Ordinary ? index_ordinary(omega) : index_extraordinary(omega, theta);
  }

  // 1/u = (n - lambda dn/dlambda)/c at fixed propagation angle
  double inverse_group_velocity(double omega, Polarization p, double theta) const {
    double l = wavelength_um_from_omega(omega);
    double n = 0.0, dn = 0.0;
    if (p == Polarization::Ordinary) {
      n = o_.index(l);
      dn = o_.dindex(l);
    } else {
      double no = o_.index(l), nE = e_.index(l);
      double c2 = std::cos(theta) * std::cos(theta), s2 = 1.0 - c2;
      n = index_extraordinary(omega, theta);
      dn = n * n * n * (c2 * o_.dindex(l) / (no * no * no) + s2 * e_.dindex(l) / (nE * nE * nE));
    }
    return (n - l * dn) / kSpeedOfLight;
  }

  // -d ln n_e / d theta, positive for a negative uniaxial crystal
  double walkoff(double omega, double theta) const {
    double no = index_ordinary(omega), nE = index_principal_e(omega);
    double ne = index_extraordinary(omega, theta);
    return -ne * ne * std::sin(theta) * std::cos(theta) * (1.0 / (no * no) - 1.0 / (nE * nE));
  }

  // Longitudinal wave-vector component for transverse wave vector q. The
  // optic axis lies in the (e2, z) plane at theta_oa from z, tilted toward +e2.
  double kappa(double omega, Vec2 q, Polarization p, double theta_oa) const {
    double k0 = omega / kSpeedOfLight;
    double q2 = q.dot(q);
    if (p == Polarization::Ordinary) {
      double n = index_ordinary(omega);
      double kz2 = n * n * k0 * k0 - q2;
      if (kz2 <= 0.0) throw DomainError("evanescent ordinary wave");
      return std::sqrt(kz2);
    }
    double no = index_ordinary(omega), nE = index_principal_e(omega);
    double dn = 1.0 / (no * no) - 1.0 / (nE * nE);
    double s = std::sin(theta_oa), c = std::cos(theta_oa);
    // (k.a)^2 (1/no^2 - 1/nE^2) + |k|^2 / nE^2 = k0^2 with k = (q, kappa)
    double A = c * c * dn + 1.0 / (nE * nE);
    double B = 2.0 * q.e2 * s * c * dn;
    double C = q.e2 * q.e2 * s * s * dn + q2 / (nE * nE) - k0 * k0;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) throw DomainError("evanescent extraordinary wave");
    double kz = (-B + std::sqrt(disc)) / (2.0 * A);
    if (kz <= 0.0) throw DomainError("evanescent extraordinary wave");
    return kz;
  }

  // Degenerate collinear type-II (e -> o + e) phase-matching angle.
  double phase_matching_angle(double omega_p) const {
    double ws = omega_p / 2.0;
    double no_s = index_ordinary(ws);
    auto f = [&](double th) {
      return index_extraordinary(omega_p, th) * omega_p - (no_s + index_extraordinary(ws, th)) * ws;
    };
    double lo = 1e-6, hi = kPi / 2 - 1e-6;
    if (f(lo) * f(hi) > 0.0) throw DomainError("no type-II phase-matching angle for this pump wavelength");
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    return 0.5 * (r.first + r.second);
  }

  const SellmeierModel& ordinary_model() const { return o_; }
  const SellmeierModel& extraordinary_model() const { return e_; }

 private:
  SellmeierModel o_;
  SellmeierModel e_;
};

inline const UniaxialCrystal& crystal_for(const CrystalSpec& spec) {
  if (spec.material != "BBO") throw DomainError("unsupported crystal material '" + spec.material + "'");
  return UniaxialCrystal::bbo();
}

inline DispersionParams dispersion_params(const CrystalSpec& spec, const UniaxialCrystal& xtal) {
  spec.validate();
  DispersionParams p;
  p.omega_p0 = omega_from_wavelength_nm(spec.pump_wavelength_nm);
  double ws = p.omega_p0 / 2.0;
  p.theta_oa = spec.cut_angle_rad ? *spec.cut_angle_rad : xtal.phase_matching_angle(p.omega_p0);
  const double th = p.theta_oa;
  p.K_o = xtal.index_ordinary(ws) * ws / kSpeedOfLight;
  p.K_e = xtal.index_extraordinary(ws, th) * ws / kSpeedOfLight;
  p.inv_u_o = xtal.inverse_group_velocity(ws, Polarization::Ordinary, th);
  p.inv_u_e = xtal.inverse_group_velocity(ws, Polarization::Extraordinary, th);
  p.inv_u_p = xtal.inverse_group_velocity(p.omega_p0, Polarization::Extraordinary, th);
  p.D = p.inv_u_o - p.inv_u_e;
  p.D_plus = p.inv_u_p - 0.5 * (p.inv_u_o + p.inv_u_e);
  p.M = xtal.walkoff(ws, th);
  p.M_p = xtal.walkoff(p.omega_p0, th);
  for (double iu : {p.inv_u_o, p.inv_u_e, p.inv_u_p})
    if (!(iu > 1.0 / kSpeedOfLight)) throw NumericalError("group velocity not in (0, c)");
  return p;
}

inline DispersionParams dispersion_params(const CrystalSpec& spec) {
  return dispersion_params(spec, crystal_for(spec));
}

namespace detail {
// Shared by delta_mismatch and delta_with_pump so the plane-wave reduction is exact.
inline double mismatch_expansion(double nu, double nu_p, Vec2 q, Vec2 q_p, const DispersionParams& p) {
  return -p.D * nu + p.D_plus * nu_p +
         (kSpeedOfLight / p.omega_p0) * (2.0 * q.dot(q) + q_p.dot(q_p)) + p.M * q.e2 +
         (p.M_p - 0.5 * p.M) * q_p.e2;
}
}  // namespace detail

// Mismatch for a monochromatic plane-wave pump; nu is the detuning of the
// ordinary photon from omega_p0/2, q its transverse wave vector.
inline double delta_mismatch(double nu, Vec2 q, const DispersionParams& p) {
  return detail::mismatch_expansion(nu, 0.0, q, {}, p);
}

}  // namespace spdc
