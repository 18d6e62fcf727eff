#include <gtest/gtest.h>

#include <sstream>

#include "spdc/aperture.hpp"

using namespace spdc;

namespace {

std::vector<Vec2> q_samples(double qmax, int n) {
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.push_back({qmax * (2.0 * i / (n - 1) - 1.0), qmax * (2.0 * j / (n - 1) - 1.0)});
  return out;
}

// over the disk |q| <= qmax
double max_raster_error(const ApertureSpec& ap, double qmax) {
  ApertureSpec m{rasterize(ap, 256), ap.shift_mm};
  double err = 0.0;
  for (Vec2 q : q_samples(qmax, 21))
    if (q.norm() <= qmax) err = std::max(err, std::abs(ptilde(m, q) - ptilde(ap, q)));
  return err;
}

// transform of |p|^2 for a true ring, normalized to 1 at q = 0
double ring(double a, double b, double q) {
  return (b * b * airy(b * q) - a * a * airy(a * q)) / (b * b - a * a);
}

}  // namespace

TEST(Ptilde, UnityAtOrigin) {
  Mask m{2, 2, 0.5, {1, 0.5, 0, 1}, ""};
  for (ApertureShape s : {ApertureShape{Circular{5}}, ApertureShape{Slit{1, 7, 0.3}},
                          ApertureShape{Annular{2, 4}}, ApertureShape{m}}) {
    ApertureSpec ap{s, {0.3, -1.2}};
    EXPECT_NEAR(std::abs(ptilde(ap, {}) - 1.0), 0.0, 1e-15) << shape_name(s);
  }
}

TEST(Ptilde, BoundedByOne) {
  for (ApertureShape s : {ApertureShape{Circular{5}}, ApertureShape{Slit{1, 7, 0.3}},
                          ApertureShape{Annular{2, 4}}}) {
    ApertureSpec ap{s, {}};
    for (Vec2 q : q_samples(4.0, 41)) EXPECT_LE(std::abs(ptilde(ap, q)), 1.0 + 1e-12) << shape_name(s);
  }
}

TEST(Ptilde, CircularAnchor) {
  // 2 J1(2.385) / 2.385 evaluated to 30 digits
  ApertureSpec ap{Circular{5}, {}};
  EXPECT_NEAR(ptilde(ap, {0, 0.477}).real(), 0.438876626080727, 1e-12);
  EXPECT_NEAR(ptilde(ap, {0.477, 0}).real(), 0.438876626080727, 1e-12);
  // first zero of J1
  EXPECT_NEAR(ptilde(ap, {3.8317059702075125 / 5.0, 0}).real(), 0.0, 1e-12);
}

TEST(Ptilde, SlitRotationSwapsAxes) {
  ApertureSpec r{Slit{1.0, 7.0, kPi / 2}, {}};
  ApertureSpec s{Slit{7.0, 1.0, 0.0}, {}};
  for (Vec2 q : q_samples(3.0, 13)) EXPECT_NEAR(std::abs(ptilde(r, q) - ptilde(s, q)), 0.0, 1e-12);
  EXPECT_NEAR(ptilde(ApertureSpec{Slit{1, 7, 0}, {}}, {0.4, 0}).real(), sinc(2.8), 1e-15);
  EXPECT_NEAR(ptilde(ApertureSpec{Slit{1, 7, 0}, {}}, {0, 0.4}).real(), sinc(0.4), 1e-15);
}

TEST(Ptilde, ShiftIsAPhase) {
  ApertureSpec c{Circular{2.5}, {}};
  ApertureSpec s{Circular{2.5}, {0.7, -1.6}};
  for (Vec2 q : q_samples(2.0, 9)) {
    complex want = ptilde(c, q) * std::polar(1.0, -(0.7 * q.e1 - 1.6 * q.e2));
    EXPECT_NEAR(std::abs(ptilde(s, q) - want), 0.0, 1e-14);
  }
}

TEST(Ptilde, CentredShapesAreEven) {
  for (ApertureShape sh : {ApertureShape{Circular{5}}, ApertureShape{Slit{1, 7, 0.7}}, ApertureShape{Annular{2, 4}}}) {
    ApertureSpec ap{sh, {}};
    for (Vec2 q : q_samples(2.0, 9)) EXPECT_NEAR(std::abs(ptilde(ap, q) - ptilde(ap, -q)), 0.0, 1e-14);
  }
}

TEST(Raster, CircularMatchesClosedForm) {
  EXPECT_LT(max_raster_error({Circular{5.0}, {}}, 5.0), 1e-3);
  EXPECT_LT(max_raster_error({Circular{2.5}, {0.5, 1.0}}, 5.0), 1e-3);
}

TEST(Raster, SlitMatchesClosedForm) {
  EXPECT_LT(max_raster_error({Slit{1.0, 7.0, 0.0}, {}}, 5.0), 1e-3);
  EXPECT_LT(max_raster_error({Slit{7.0, 1.0, 0.0}, {}}, 5.0), 1e-3);
}

TEST(Raster, RotatedSlitMatchesClosedForm) {
  // edges at an angle to the grid alias a little more
  EXPECT_LT(max_raster_error({Slit{1.0, 7.0, deg(30)}, {}}, 5.0), 1e-3);
}

TEST(Raster, AnnulusFollowsRingNotClosedForm) {
  ApertureSpec ap{Annular{2.0, 4.0}, {}};
  ApertureSpec m{rasterize(ap, 256), {}};
  double err_ring = 0.0, diff_closed = 0.0;
  for (int i = 0; i <= 50; ++i) {
    double q = 5.0 * i / 50.0;
    err_ring = std::max(err_ring, std::abs(ptilde(m, {q, 0}) - ring(2, 4, q)));
    diff_closed = std::max(diff_closed, std::abs(ptilde(ap, {q, 0}) - ring(2, 4, q)));
  }
  EXPECT_LT(err_ring, 1e-3);
  EXPECT_GT(diff_closed, 0.1);  // the stated closed form is not the ring transform
}

TEST(Raster, AmplitudeIsSqrtCoverage) {
  Mask m = rasterize({Circular{1.0}, {}}, 64, 8);
  double area = 0.0;
  for (double v : m.amplitude) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    area += v * v * m.pitch_mm * m.pitch_mm;
  }
  EXPECT_NEAR(area, kPi, 2e-3);
}

TEST(Pupil, AnalyticMatchesRaster) {
  for (ApertureShape sh : {ApertureShape{Circular{1.0}}, ApertureShape{Slit{0.3, 0.8, 0.2}}, ApertureShape{Annular{0.5, 1.0}}}) {
    ApertureSpec ap{sh, {0.1, 0.2}};
    // raster amplitudes are sqrt(coverage); the pupil of a hard edge weighs coverage itself
    Mask cov = rasterize(ap, 256);
    for (double& v : cov.amplitude) v *= v;
    ApertureSpec m{cov, ap.shift_mm};
    double scale = std::abs(pupil_transform(ap, {}));
    for (Vec2 k : q_samples(5.0, 9))
      EXPECT_LT(std::abs(pupil_transform(ap, k) - pupil_transform(m, k)) / scale, 2e-4) << shape_name(sh);
  }
}

TEST(Mask, OrientationRowZeroIsPlusE2) {
  // single open pixel in the top row, centre column
  Mask m{3, 3, 1.0, {0, 1, 0, 0, 0, 0, 0, 0, 0}, ""};
  ApertureSpec ap{m, {}};
  Vec2 q{0.0, 0.9};
  EXPECT_NEAR(std::abs(ptilde(ap, q) - sinc(0.45) * std::polar(1.0, -0.9)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ptilde(ap, {0.9, 0.0}) - sinc(0.45)), 0.0, 1e-14);
}

TEST(Mask, LoadAndRoundTrip) {
  std::istringstream in("# test mask\npitch_mm 0.25\n0 1 0.5\n1 1 1  # comment\n\n0 0.25 0\n");
  Mask m = load_mask(in, "t");
  EXPECT_EQ(m.rows, 3u);
  EXPECT_EQ(m.cols, 3u);
  EXPECT_DOUBLE_EQ(m.pitch_mm, 0.25);
  EXPECT_DOUBLE_EQ(m.at(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(m.at(2, 1), 0.25);
  std::stringstream out;
  write_mask(out, m);
  Mask back = load_mask(out, "back");
  EXPECT_EQ(back.amplitude, m.amplitude);
  EXPECT_EQ(back.pitch_mm, m.pitch_mm);
}

TEST(Mask, LoaderErrorsNameTheLine) {
  auto fails_at = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      load_mask(in, "bad");
    } catch (const MaskFileError& e) {
      return std::string(e.what()).find("bad:" + std::to_string(line) + ":") != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails_at("0 1\n", 1));
  EXPECT_TRUE(fails_at("pitch_mm 0.1\n1 1\n1\n", 3));
  EXPECT_TRUE(fails_at("pitch_mm 0.1\n1 1.5\n", 2));
  EXPECT_TRUE(fails_at("pitch_mm 0.1\n1 x\n", 2));
  EXPECT_TRUE(fails_at("pitch_mm -1\n1\n", 1));
  std::istringstream opaque("pitch_mm 0.1\n0 0\n");
  EXPECT_THROW(load_mask(opaque), DomainError);
  EXPECT_THROW(load_mask_file("/nonexistent/mask.txt"), MaskFileError);
}

TEST(Aperture, Validation) {
  EXPECT_THROW((ApertureSpec{Circular{0}, {}}.validate()), DomainError);
  EXPECT_THROW((ApertureSpec{Slit{1, -1, 0}, {}}.validate()), DomainError);
  EXPECT_THROW((ApertureSpec{Annular{4, 2}, {}}.validate()), DomainError);
  EXPECT_THROW((ApertureSpec{Mask{2, 2, 0.1, {1, 1, 1}, ""}, {}}.validate()), DomainError);
  EXPECT_NO_THROW((ApertureSpec{Annular{2, 4}, {}}.validate()));
}

TEST(Aperture, Extent) {
  EXPECT_DOUBLE_EQ(aperture_extent({Circular{5}, {}}), 5.0);
  EXPECT_DOUBLE_EQ(aperture_extent({Slit{3, 4, 1.0}, {}}), 5.0);
  EXPECT_DOUBLE_EQ(aperture_extent({Annular{2, 4}, {}}), 4.0);
}
