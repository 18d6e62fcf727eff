#pragma once

#include "spdc/crystal.hpp"

namespace spdc {

// Mismatch for a pump with detuning nu_p and transverse wave vector q_p.
inline double delta_with_pump(double nu, double nu_p, Vec2 q, Vec2 q_p, const DispersionParams& p) {
  return detail::mismatch_expansion(nu, nu_p, q, q_p, p);
}

struct PlanewaveVerdict {
  bool valid = true;
  double ratio = 0.0;  // |M_p - M/2| L / a
  double threshold = 0.1;
};

inline PlanewaveVerdict planewave_valid(double pump_diameter_mm, double L, const DispersionParams& p,
                                        double threshold = 0.1) {
  if (!(pump_diameter_mm > 0.0)) throw DomainError("pump diameter must be > 0");
  PlanewaveVerdict v;
  v.threshold = threshold;
  v.ratio = std::abs(p.M_p - 0.5 * p.M) * L / pump_diameter_mm;
  v.valid = v.ratio < threshold;
  return v;
}

// Pump diameter at which the ratio reaches the threshold.
inline double planewave_breakdown_diameter(double L, const DispersionParams& p, double threshold = 0.1) {
  return std::abs(p.M_p - 0.5 * p.M) * L / threshold;
}

}  // namespace spdc
