#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "spdc/core.hpp"

namespace spdc {

// Lengths follow the closed-form transforms: b and a act as radius /
// half-width, so a Circular{b} pupil is a disk of radius b.
struct Circular {
  double b_mm = 0.0;
};

// Half-width b along e1 and a along e2 before rotation.
struct Slit {
  double a_mm = 0.0;
  double b_mm = 0.0;
  double rotation_rad = 0.0;
};

struct Annular {
  double a_mm = 0.0;  // inner radius
  double b_mm = 0.0;  // outer radius
};

// Row 0 is the +e2 edge; columns run along +e1; the grid is centred on the axis.
struct Mask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch_mm = 0.0;
  std::vector<double> amplitude;  // row-major, values in [0, 1]
  std::string source;             // file path, if loaded from disk

  double at(std::size_t r, std::size_t c) const { return amplitude[r * cols + c]; }
  double e1_of(std::size_t c) const { return (double(c) - 0.5 * double(cols - 1)) * pitch_mm; }
  double e2_of(std::size_t r) const { return (0.5 * double(rows - 1) - double(r)) * pitch_mm; }
};

using ApertureShape = std::variant<Circular, Slit, Annular, Mask>;

struct ApertureSpec {
  ApertureShape shape = Circular{5.0};
  Vec2 shift_mm;

  void validate() const {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Circular>) {
            if (!(s.b_mm > 0.0)) throw DomainError("circular aperture needs b > 0");
          } else if constexpr (std::is_same_v<T, Slit>) {
            if (!(s.a_mm > 0.0 && s.b_mm > 0.0)) throw DomainError("slit needs a, b > 0");
          } else if constexpr (std::is_same_v<T, Annular>) {
            if (!(s.a_mm > 0.0 && s.b_mm > s.a_mm)) throw DomainError("annulus needs 0 < a < b");
          } else {
            if (s.rows == 0 || s.cols == 0 || s.amplitude.size() != s.rows * s.cols)
              throw DomainError("mask grid is empty or ragged");
            if (!(s.pitch_mm > 0.0)) throw DomainError("mask pitch must be > 0");
            double total = 0.0;
            for (double v : s.amplitude) {
              if (!(v >= 0.0 && v <= 1.0)) throw DomainError("mask amplitude outside [0, 1]");
              total += v * v;
            }
            if (total <= 0.0) throw DomainError("mask is fully opaque");
          }
        },
        shape);
  }
};

inline std::string shape_name(const ApertureShape& s) {
  switch (s.index()) {
    case 0: return "circular";
    case 1: return "slit";
    case 2: return "annular";
    default: return "mask";
  }
}

inline double airy(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 8.0;
  return 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

namespace detail {

inline Vec2 to_slit_frame(Vec2 q, double rot) {
  double c = std::cos(rot), s = std::sin(rot);
  return {c * q.e1 + s * q.e2, -s * q.e1 + c * q.e2};
}

// sum_rc w_rc exp(-i k.y_rc) with separable phases
inline complex mask_sum(const Mask& m, Vec2 k, bool squared) {
  std::vector<complex> col_phase(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) col_phase[c] = std::polar(1.0, -k.e1 * m.e1_of(c));
  complex total = 0.0;
  for (std::size_t r = 0; r < m.rows; ++r) {
    complex row = 0.0;
    const double* w = &m.amplitude[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) {
      double v = squared ? w[c] * w[c] : w[c];
      if (v != 0.0) row += v * col_phase[c];
    }
    total += row * std::polar(1.0, -k.e2 * m.e2_of(r));
  }
  return total;
}

inline double mask_weight(const Mask& m, bool squared) {
  double s = 0.0;
  for (double v : m.amplitude) s += squared ? v * v : v;
  return s;
}

}  // namespace detail

// Normalized transform of |p|^2 without the shift phase.
inline complex ptilde_centered(const ApertureSpec& ap, Vec2 q) {
  return std::visit(
      [&](const auto& s) -> complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circular>) {
          return airy(s.b_mm * q.norm());
        } else if constexpr (std::is_same_v<T, Slit>) {
          Vec2 qp = detail::to_slit_frame(q, s.rotation_rad);
          return sinc(s.b_mm * qp.e1) * sinc(s.a_mm * qp.e2);
        } else if constexpr (std::is_same_v<T, Annular>) {
          double k = q.norm();
          if (k < 1e-9) return 1.0;
          return 2.0 / (s.b_mm - s.a_mm) *
                 (std::cyl_bessel_j(1.0, s.b_mm * k) - std::cyl_bessel_j(1.0, s.a_mm * k)) / k;
        } else {
          // each pixel of |p|^2 is a uniformly open square; the impulse
          // response and pupil keep point pixels so they stay a Fourier pair
          return detail::mask_sum(s, q, true) / detail::mask_weight(s, true) *
                 sinc(0.5 * q.e1 * s.pitch_mm) * sinc(0.5 * q.e2 * s.pitch_mm);
        }
      },
      ap.shape);
}

inline complex ptilde(const ApertureSpec& ap, Vec2 q) {
  return ptilde_centered(ap, q) * std::polar(1.0, -q.dot(ap.shift_mm));
}

// Transform of the amplitude p itself, int p(x) exp(-i k.x) d^2x, for the
// transfer function. Analytic shapes use the exact geometry of the rasterizer.
inline complex pupil_transform(const ApertureSpec& ap, Vec2 k) {
  complex base = std::visit(
      [&](const auto& s) -> complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circular>) {
          return kPi * s.b_mm * s.b_mm * airy(s.b_mm * k.norm());
        } else if constexpr (std::is_same_v<T, Slit>) {
          Vec2 kp = detail::to_slit_frame(k, s.rotation_rad);
          return 4.0 * s.a_mm * s.b_mm * sinc(s.b_mm * kp.e1) * sinc(s.a_mm * kp.e2);
        } else if constexpr (std::is_same_v<T, Annular>) {
          double b2 = s.b_mm * s.b_mm, a2 = s.a_mm * s.a_mm;
          return kPi * (b2 * airy(s.b_mm * k.norm()) - a2 * airy(s.a_mm * k.norm()));
        } else {
          return detail::mask_sum(s, k, false) * s.pitch_mm * s.pitch_mm;
        }
      },
      ap.shape);
  return base * std::polar(1.0, -k.dot(ap.shift_mm));
}

// Largest distance of the open region from the aperture centre.
inline double aperture_extent(const ApertureSpec& ap) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circular>) return s.b_mm;
        else if constexpr (std::is_same_v<T, Slit>) return std::hypot(s.a_mm, s.b_mm);
        else if constexpr (std::is_same_v<T, Annular>) return s.b_mm;
        else {
          double r = 0.0;
          for (std::size_t i = 0; i < s.rows; ++i)
            for (std::size_t j = 0; j < s.cols; ++j)
              if (s.at(i, j) > 0.0) r = std::max(r, std::hypot(s.e1_of(j), s.e2_of(i)));
          return r + s.pitch_mm / std::sqrt(2.0);
        }
      },
      ap.shape);
}

namespace detail {

// Slits square to the grid get a pitch that puts their edges on pixel
// boundaries when the two half-widths allow it, otherwise the narrow edges.
inline double raster_pitch(const ApertureSpec& ap, std::size_t n) {
  double p = 2.0 * aperture_extent(ap) / double(n);
  const auto* s = std::get_if<Slit>(&ap.shape);
  if (!s) return p;
  double c = std::abs(std::cos(s->rotation_rad)), sn = std::abs(std::sin(s->rotation_rad));
  if (std::min(c, sn) > 1e-12) return p;
  double lo = std::min(s->a_mm, s->b_mm), hi = std::max(s->a_mm, s->b_mm);
  auto m_max = static_cast<std::size_t>(std::floor(lo * double(n) / (2.0 * hi)));
  if (m_max == 0) return p;
  for (std::size_t m = m_max; 2 * m >= m_max; --m) {
    double k = hi * double(m) / lo;
    if (std::abs(k - std::round(k)) < 1e-9) return lo / double(m);
  }
  return lo / double(m_max);
}

}  // namespace detail

// Sample an analytic aperture onto an n x n grid. Edge pixels carry
// amplitude sqrt(open fraction) so |p|^2 is area-weighted.
inline Mask rasterize(const ApertureSpec& ap, std::size_t n = 256, int supersample = 8) {
  if (std::holds_alternative<Mask>(ap.shape)) return std::get<Mask>(ap.shape);
  ap.validate();
  auto inside = [&](double y1, double y2) -> bool {
    return std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Circular>) return y1 * y1 + y2 * y2 <= s.b_mm * s.b_mm;
          else if constexpr (std::is_same_v<T, Slit>) {
            Vec2 p = detail::to_slit_frame({y1, y2}, s.rotation_rad);
            return std::abs(p.e1) <= s.b_mm && std::abs(p.e2) <= s.a_mm;
          } else if constexpr (std::is_same_v<T, Annular>) {
            double r2 = y1 * y1 + y2 * y2;
            return r2 <= s.b_mm * s.b_mm && r2 >= s.a_mm * s.a_mm;
          } else return false;
        },
        ap.shape);
  };
  Mask m;
  m.rows = m.cols = n;
  m.pitch_mm = detail::raster_pitch(ap, n);
  m.amplitude.assign(n * n, 0.0);
  const double sub = m.pitch_mm / supersample;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      int hits = 0;
      for (int i = 0; i < supersample; ++i)
        for (int j = 0; j < supersample; ++j) {
          double y1 = m.e1_of(c) + (j + 0.5) * sub - 0.5 * m.pitch_mm;
          double y2 = m.e2_of(r) + (i + 0.5) * sub - 0.5 * m.pitch_mm;
          hits += inside(y1, y2);
        }
      m.amplitude[r * n + c] = std::sqrt(double(hits) / double(supersample * supersample));
    }
  }
  return m;
}

class MaskFileError : public std::runtime_error {
 public:
  MaskFileError(const std::string& where, int line, const std::string& msg)
      : std::runtime_error(where + ":" + std::to_string(line) + ": " + msg) {}
};

// First line "pitch_mm <value>", then one row of floats per line.
inline Mask load_mask(std::istream& in, const std::string& name = "<mask>") {
  Mask m;
  m.source = name;
  std::string line;
  int ln = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (!header) {
      double pitch = 0.0;
      if (tok != "pitch_mm" || !(ss >> pitch))
        throw MaskFileError(name, ln, "expected header 'pitch_mm <value>'");
      if (!(pitch > 0.0)) throw MaskFileError(name, ln, "pitch must be > 0");
      m.pitch_mm = pitch;
      header = true;
      continue;
    }
    std::size_t count = 0;
    do {
      double v = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw MaskFileError(name, ln, "bad value '" + tok + "'");
      if (!(v >= 0.0 && v <= 1.0)) throw MaskFileError(name, ln, "amplitude outside [0, 1]");
      m.amplitude.push_back(v);
      ++count;
    } while (ss >> tok);
    if (m.rows == 0) m.cols = count;
    else if (count != m.cols) throw MaskFileError(name, ln, "row length differs from first row");
    ++m.rows;
  }
  if (!header) throw MaskFileError(name, ln, "missing pitch_mm header");
  if (m.rows == 0) throw MaskFileError(name, ln, "mask has no rows");
  ApertureSpec{m, {}}.validate();
  return m;
}

inline Mask load_mask_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MaskFileError(path, 0, "cannot open mask file");
  return load_mask(f, path);
}

inline void write_mask(std::ostream& out, const Mask& m) {
  out << "pitch_mm " << m.pitch_mm << "\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out << (c ? " " : "") << m.at(r, c);
    out << "\n";
  }
}

}  // namespace spdc
