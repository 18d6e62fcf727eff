// Regenerates tests/golden/*.csv from the oracle, independent of the closed form.
#include <fstream>
#include <iostream>

#include "spdc/spdc.hpp"

using namespace spdc;

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "tests/golden";
  std::filesystem::create_directories(dir);
  const std::size_t n = 129;
  for (const auto& pr : presets()) {
    if (pr.group != "fig4" && pr.group != "fig6" && pr.group != "fig11" && pr.group != "fig12") continue;
    const auto& c = pr.config;
    auto p = dispersion_params(c.crystal);
    const double L = c.crystal.thickness_mm, LD = L * p.D;
    std::string csv = "tau_fs,V,R_over_R0\n";
    for (std::size_t i = 0; i < n; ++i) {
      double t = LD * (-0.25 + 1.5 * double(i) / double(n - 1));
      double v = v_oracle(t, L, c.system, p, 1e-12);
      if (auto* pulse = std::get_if<PulsedPlane>(&c.pump); pulse && v != 0.0) {
        // the oracle line integral carries the cw sinc; swap in a refined spectral average
        double lam = triangle(2.0 * t / LD - 1.0);
        double cw_sinc = sinc(sinc_scale(L, p, c.system.d1_mm) * (t / LD) * lam);
        EngineOptions fine;
        fine.spectral_tolerance = 1e-12;
        fine.spectral_half_width_sigmas = 8.0;
        v = v / cw_sinc * pulsed_sinc_average(t, L, c.system, p, *pulse, fine);
      }
      csv += fmt(t) + "," + fmt(v) + "," + fmt(1.0 - v) + "\n";
    }
    std::ofstream(dir / (pr.id + ".csv"), std::ios::binary) << csv;
    std::cout << "wrote " << (dir / (pr.id + ".csv")).string() << "\n";
  }
}
