#pragma once

#include <optional>
#include <variant>

#include "spdc/aperture.hpp"
#include "spdc/crystal.hpp"
#include "spdc/prism.hpp"

namespace spdc {

struct NoFilter {};

// Amplitude transmission exp(-(omega - center)^2 / (2 width^2)).
struct GaussianFilter {
  double center = 0.0;  // rad/fs
  double width = 0.0;   // rad/fs
};

using SpectralFilter = std::variant<NoFilter, GaussianFilter>;

inline double filter_transmission(const SpectralFilter& f, double omega) {
  if (auto* g = std::get_if<GaussianFilter>(&f)) {
    double x = (omega - g->center) / g->width;
    return std::exp(-0.5 * x * x);
  }
  return 1.0;
}

enum class Arm { A, B };

struct OpticalSystemSpec {
  double d1_mm = 1000.0;
  double d2_mm = 100.0;
  double f_mm = 100.0;
  ApertureSpec aperture_A;
  ApertureSpec aperture_B;
  SpectralFilter filter = NoFilter{};
  std::optional<PrismSpec> prism;

  const ApertureSpec& aperture(Arm a) const { return a == Arm::A ? aperture_A : aperture_B; }

  void validate() const {
    if (!(d1_mm > 0.0)) throw DomainError("d1 must be > 0");
    if (!(d2_mm > 0.0)) throw DomainError("d2 must be > 0");
    if (!(f_mm > 0.0)) throw DomainError("f must be > 0");
    if (auto* g = std::get_if<GaussianFilter>(&filter); g && !(g->width > 0.0 && g->center > 0.0))
      throw DomainError("gaussian filter needs center > 0 and width > 0");
    aperture_A.validate();
    aperture_B.validate();
    if (prism) prism->validate();
  }
};

struct FresnelCheck {
  bool valid = true;
  double number = 0.0;  // b^4 / (4 lambda d1^3), b the full aperture width
};

inline FresnelCheck fresnel_check(const OpticalSystemSpec& s, double wavelength_mm) {
  double b = 2.0 * std::max(aperture_extent(s.aperture_A) + s.aperture_A.shift_mm.norm(),
                            aperture_extent(s.aperture_B) + s.aperture_B.shift_mm.norm());
  double n = std::pow(b, 4) / (4.0 * wavelength_mm * std::pow(s.d1_mm, 3));
  return {n < 1e-2, n};
}

namespace detail {
inline void require_fresnel(const OpticalSystemSpec& s, double omega) {
  auto fc = fresnel_check(s, 2.0 * kPi * kSpeedOfLight / omega);
  if (!fc.valid)
    throw DomainError("Fresnel approximation not valid for this geometry (b^4/(4 lambda d1^3) = " +
                      std::to_string(fc.number) + ")");
}

inline complex lens_phase(Vec2 x_det, double omega, const OpticalSystemSpec& s) {
  double k = omega / kSpeedOfLight;
  return std::polar(1.0, k * (s.d1_mm + s.d2_mm + s.f_mm) -
                             k * x_det.dot(x_det) * (s.d2_mm / s.f_mm - 1.0) / (2.0 * s.f_mm));
}
}  // namespace detail

// Point-spread function from crystal point x_crystal to detector point x_det
// through the aperture of the chosen arm. Analytic apertures are sampled on a
// grid first; pass a Mask aperture to control the sampling.
inline complex impulse_response(Vec2 x_det, Vec2 x_crystal, double omega, const OpticalSystemSpec& s,
                                Arm arm = Arm::A, std::size_t resolution = 256) {
  detail::require_fresnel(s, omega);
  const ApertureSpec& ap = s.aperture(arm);
  Mask m = rasterize(ap, resolution);
  const double k = omega / kSpeedOfLight;
  const double a = k / (2.0 * s.d1_mm);
  const Vec2 g = k * Vec2{x_crystal.e1 / s.d1_mm + x_det.e1 / s.f_mm, x_crystal.e2 / s.d1_mm + x_det.e2 / s.f_mm};
  complex sum = 0.0;
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) {
      double p = m.at(r, c);
      if (p == 0.0) continue;
      Vec2 y = Vec2{m.e1_of(c), m.e2_of(r)} + ap.shift_mm;
      sum += p * std::polar(1.0, a * y.dot(y) - g.dot(y));
    }
  sum *= m.pitch_mm * m.pitch_mm;
  return filter_transmission(s.filter, omega) * detail::lens_phase(x_det, omega, s) *
         std::polar(1.0, a * x_crystal.dot(x_crystal)) * sum;
}

// Transverse-wavevector form of the impulse response.
inline complex transfer_function(Vec2 x_det, Vec2 q, double omega, const OpticalSystemSpec& s, Arm arm = Arm::A) {
  detail::require_fresnel(s, omega);
  const double k = omega / kSpeedOfLight;
  Vec2 arg = Vec2{k * x_det.e1 / s.f_mm, k * x_det.e2 / s.f_mm} - q;
  return detail::lens_phase(x_det, omega, s) *
         std::polar(1.0, -kSpeedOfLight * s.d1_mm * q.dot(q) / (2.0 * omega)) *
         pupil_transform(s.aperture(arm), arg) * filter_transmission(s.filter, omega);
}

// Scale of the transform argument: Q(tau) = transform_rate * tau, in 1/(mm fs).
inline double transform_rate(const DispersionParams& p, double d1) {
  return p.omega_p0 * p.M / (2.0 * kSpeedOfLight * d1 * p.D);
}

inline double shift_modulation(double tau, Vec2 s_A, Vec2 s_B, const DispersionParams& p, double d1) {
  return std::cos(transform_rate(p, d1) * tau * (s_A.e2 - s_B.e2));
}

}  // namespace spdc
