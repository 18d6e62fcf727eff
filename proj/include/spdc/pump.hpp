#pragma once

#include <variant>

#include "spdc/core.hpp"

namespace spdc {

struct CwPlane {
  double wavelength_nm = 351.1;
};

// Transform-limited Gaussian pulse; fwhm_duration_fs is the intensity FWHM.
struct PulsedPlane {
  double center_wavelength_nm = 415.0;
  double fwhm_duration_fs = 80.0;

  // rms width of the spectral intensity, rad/fs
  double spectral_sigma() const {
    double fwhm_omega = 4.0 * std::log(2.0) / fwhm_duration_fs;
    return fwhm_omega / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  }
};

// Finite transverse extent; patterns still use the plane-wave model and
// carry a validity verdict.
struct FiniteBeam {
  double wavelength_nm = 351.1;
  double diameter_mm = 5.0;
};

using PumpSpec = std::variant<CwPlane, PulsedPlane, FiniteBeam>;

inline double pump_wavelength_nm(const PumpSpec& p) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PulsedPlane>) return v.center_wavelength_nm;
        else return v.wavelength_nm;
      },
      p);
}

inline void validate(const PumpSpec& p) {
  if (!(pump_wavelength_nm(p) > 0.0)) throw DomainError("pump wavelength must be > 0");
  if (auto* v = std::get_if<PulsedPlane>(&p); v && !(v->fwhm_duration_fs > 0.0))
    throw DomainError("pulse fwhm_duration must be > 0");
  if (auto* v = std::get_if<FiniteBeam>(&p); v && !(v->diameter_mm > 0.0))
    throw DomainError("pump beam diameter must be > 0");
}

}  // namespace spdc
