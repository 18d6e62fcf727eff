#pragma once

#include <boost/math/tools/roots.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "spdc/core.hpp"
#include "spdc/format.hpp"
#include "spdc/sellmeier.hpp"

namespace spdc {

inline const SellmeierModel& fused_silica() {
  static const SellmeierModel m = SellmeierTable::builtin().model("FusedSilica", "n");
  return m;
}

struct PrismSpec {
  std::string material = "FusedSilica";
  double apex_rad = 0.0;
  double phi0_rad = 0.0;  // minimum-deviation angle at the centre wavelength
  double center_wavelength_nm = 702.0;

  double index(double omega) const { return fused_silica().index(wavelength_um_from_omega(omega)); }

  // dn/domega in fs
  double dindex_domega(double omega) const {
    double l = wavelength_um_from_omega(omega);
    return -fused_silica().dindex(l) * l / omega;
  }

  static double min_deviation_angle(double apex_rad, double center_wavelength_nm) {
    double n = fused_silica().index(center_wavelength_nm * 1e-3);
    double s = n * std::sin(apex_rad / 2.0);
    if (s >= 1.0) throw DomainError("apex angle admits no minimum-deviation ray");
    return std::asin(s);
  }

  static PrismSpec make(double apex_rad, double center_wavelength_nm = 702.0) {
    PrismSpec p;
    p.apex_rad = apex_rad;
    p.center_wavelength_nm = center_wavelength_nm;
    p.phi0_rad = min_deviation_angle(apex_rad, center_wavelength_nm);
    p.validate();
    return p;
  }

  void validate() const {
    if (material != "FusedSilica") throw DomainError("unsupported prism material '" + material + "'");
    if (!(apex_rad > 0.0 && apex_rad < kPi)) throw DomainError("prism apex must lie in (0, pi)");
    if (std::abs(phi0_rad - min_deviation_angle(apex_rad, center_wavelength_nm)) > 1e-6)
      throw DomainError("phi0 is not the minimum-deviation angle at the centre wavelength");
  }
};

// Angular dispersion parameter in the unit of dn/domega.
inline double beta_from(double apex_rad, double phi0_rad, double dn_domega) {
  return std::sin(apex_rad) / (std::cos(phi0_rad) * std::cos(apex_rad / 2.0)) * dn_domega;
}

// Angular dispersion parameter, seconds.
inline double beta_dispersion(const PrismSpec& p, double omega) {
  return beta_from(p.apex_rad, p.phi0_rad, p.dindex_domega(omega)) * 1e-15;
}

struct SnellResult {
  Vec2 q_prime;
  bool paraxial = true;  // |q| c / omega <= 0.1 on both sides
};

namespace detail {
inline double prism_S(double qa, double qb, double omega, double n, double phi0) {
  double r = kSpeedOfLight / omega;
  double s = std::sin(phi0), c = std::cos(phi0);
  double first = s + c * r * qa - s * r * r * qa * qa / 2.0;
  double arg = n * n - s * s - std::sin(2.0 * phi0) * r * qb - std::cos(2.0 * phi0) * r * r * qb * qb;
  if (arg < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return first * std::sqrt(arg);
}
}  // namespace detail

inline SnellResult snell_map(Vec2 q, double omega, const PrismSpec& p) {
  double n = p.index(omega);
  auto f = [&](double qp) {
    return detail::prism_S(q.e1, qp, omega, n, p.phi0_rad) + detail::prism_S(qp, q.e1, omega, n, p.phi0_rad) -
           n * n * std::sin(p.apex_rad);
  };
  double omega_c = omega_from_wavelength_nm(p.center_wavelength_nm);
  double spread = beta_dispersion(p, omega) * 1e15 * std::abs(omega - omega_c) * omega / kSpeedOfLight;
  double w = 4.0 * std::abs(q.e1) + 4.0 * spread + 1e-6 * omega / kSpeedOfLight;
  double limit = 0.5 * omega / kSpeedOfLight;
  double lo = -q.e1 - w, hi = -q.e1 + w;
  double flo = f(lo), fhi = f(hi);
  while (!(flo * fhi <= 0.0)) {
    w *= 2.0;
    lo = -q.e1 - w;
    hi = -q.e1 + w;
    if (w > limit) throw DomainError("snell_map: no bracketed root in the paraxial window");
    flo = f(lo);
    fhi = f(hi);
  }
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  SnellResult out;
  out.q_prime = {0.5 * (r.first + r.second), q.e2};
  double k0 = omega / kSpeedOfLight;
  out.paraxial = q.norm() / k0 <= 0.1 && out.q_prime.norm() / k0 <= 0.1;
  return out;
}

// First-order map about (q = 0, omega_c). The frequency slope is the exact
// derivative of the Snell map, beta * omega_c / c.
inline Vec2 snell_map_linear(Vec2 q, double omega, const PrismSpec& p) {
  double omega_c = omega_from_wavelength_nm(p.center_wavelength_nm);
  double beta_fs = beta_dispersion(p, omega_c) * 1e15;
  return {-q.e1 + beta_fs * omega_c / kSpeedOfLight * (omega - omega_c), q.e2};
}

struct NegligibleVerdict {
  bool negligible = true;
  double ratio = 0.0;  // beta * bandwidth / (2 lambda / b)
};

inline NegligibleVerdict prism_negligible(double b_mm, double bandwidth, const PrismSpec& p, double lambda_center_nm) {
  if (!(b_mm > 0.0)) throw DomainError("aperture diameter must be > 0");
  double omega_c = omega_from_wavelength_nm(lambda_center_nm);
  double spread = beta_dispersion(p, omega_c) * 1e15 * std::abs(bandwidth);
  double resolution = 2.0 * lambda_center_nm * 1e-6 / b_mm;
  return {spread < resolution, spread / resolution};
}

// Bandwidth in rad/fs for a wavelength span centred on lambda.
inline double bandwidth_from_nm(double lambda_center_nm, double span_nm) {
  return omega_from_wavelength_nm(lambda_center_nm - span_nm / 2) -
         omega_from_wavelength_nm(lambda_center_nm + span_nm / 2);
}

// q, q' table at several wavelengths.
inline void write_prism_map_csv(std::ostream& out, const PrismSpec& p, double q_max, int samples,
                                const std::vector<double>& wavelengths_nm) {
  out << "q_per_mm";
  for (double l : wavelengths_nm) out << ",q_prime_" << fmt(l) << "nm";
  out << "\n";
  for (int i = 0; i < samples; ++i) {
    double q = samples > 1 ? -q_max + 2.0 * q_max * i / (samples - 1) : 0.0;
    out << fmt(q);
    for (double l : wavelengths_nm) out << "," << fmt(snell_map({q, 0.0}, omega_from_wavelength_nm(l), p).q_prime.e1);
    out << "\n";
  }
}

}  // namespace spdc
