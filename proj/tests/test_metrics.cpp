#include "test_main.hpp"

#include <cmath>
#include <limits>

#include "inr/error.hpp"
#include "inr/metrics.hpp"
#include "oracles.hpp"

using namespace inr;

namespace {

RealImage textured(Index h, Index w, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  RealImage img(h, w);
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < w; ++c) {
      img(r, c) = 0.5 + 0.3 * std::sin(0.7 * static_cast<double>(r)) * std::cos(0.4 * static_cast<double>(c)) +
                  0.1 * rng.uniform();
    }
  }
  return img;
}

// Direct per-window evaluation: for every top-left corner, build the
// normalized Gaussian weights and the weighted moments from scratch.
double ssim_oracle(const RealImage& x_in, const RealImage& y_in) {
  const int win = 11;
  const double sigma = 1.5;
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  double peak = 0.0;
  for (double v : y_in.values()) peak = std::max(peak, v);

  double total = 0.0;
  int windows = 0;
  for (Index r0 = 0; r0 + win <= x_in.rows(); ++r0) {
    for (Index c0 = 0; c0 + win <= x_in.cols(); ++c0) {
      double wsum = 0.0;
      double mx = 0.0;
      double my = 0.0;
      double sxx = 0.0;
      double syy = 0.0;
      double sxy = 0.0;
      for (int i = 0; i < win; ++i) {
        for (int j = 0; j < win; ++j) {
          const double di = i - win / 2;
          const double dj = j - win / 2;
          const double w = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
          const double x = x_in(r0 + i, c0 + j) / peak;
          const double y = y_in(r0 + i, c0 + j) / peak;
          wsum += w;
          mx += w * x;
          my += w * y;
          sxx += w * x * x;
          syy += w * y * y;
          sxy += w * x * y;
        }
      }
      mx /= wsum;
      my /= wsum;
      const double vx = sxx / wsum - mx * mx;
      const double vy = syy / wsum - my * my;
      const double cxy = sxy / wsum - mx * my;
      total += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  }
  return total / windows;
}

}  // namespace

TEST_CASE("rlne") {
  const auto ref = textured(12, 12, 1);
  CHECK(rlne(ref, ref) == 0.0);
  CHECK(rlne(RealImage(12, 12), ref) == doctest::Approx(1.0));
  RealImage twice = ref;
  for (double& v : twice.values()) v *= 2.0;
  CHECK(rlne(twice, ref) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rlne(ref, RealImage(12, 12)), InvalidInput);
  CHECK_THROWS_AS(rlne(ref, RealImage(12, 11, 1.0)), InvalidInput);

  SUBCASE("squared error identity") {
    const auto rec = textured(12, 12, 2);
    double err = 0.0;
    double norm = 0.0;
    for (Index p = 0; p < ref.size(); ++p) {
      err += (rec[p] - ref[p]) * (rec[p] - ref[p]);
      norm += ref[p] * ref[p];
    }
    const double q = rlne(rec, ref);
    CHECK(q * q * norm == doctest::Approx(err).epsilon(1e-13));
  }
}

TEST_CASE("psnr") {
  const auto ref = textured(12, 12, 3);
  CHECK(psnr(ref, ref) == std::numeric_limits<double>::infinity());

  RealImage unit(4, 4, 0.0);
  unit(0, 0) = 1.0;
  RealImage off = unit;
  for (double& v : off.values()) v += 1.0;
  CHECK(psnr(off, unit) == doctest::Approx(0.0).scale(1.0));

  RealImage a = ref;
  RealImage b = ref;
  for (Index p = 0; p < ref.size(); ++p) {
    const double e = (p % 3 == 0 ? 0.02 : -0.01);
    a[p] += e;
    b[p] += e / 2.0;
  }
  CHECK(psnr(b, ref) - psnr(a, ref) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(std::isfinite(psnr(a, ref)));
}

TEST_CASE("ssim") {
  const auto ref = textured(16, 16, 4);
  CHECK(ssim(ref, ref) == doctest::Approx(1.0).epsilon(1e-14));

  RealImage inv = ref;
  for (double& v : inv.values()) v = 1.0 - v;
  CHECK(ssim(inv, ref) < 1.0);

  SUBCASE("matches the windowed oracle on a 16x16 fixture") {
    const auto rec = textured(16, 16, 5);
    CHECK(std::abs(ssim(rec, ref) - ssim_oracle(rec, ref)) < 1e-6);
    CHECK(std::abs(ssim(inv, ref) - ssim_oracle(inv, ref)) < 1e-6);
    const auto big = textured(23, 19, 6);
    const auto big_ref = textured(23, 19, 7);
    CHECK(std::abs(ssim(big, big_ref) - ssim_oracle(big, big_ref)) < 1e-6);
  }

  SUBCASE("symmetric for images with equal maxima") {
    auto rec = textured(16, 16, 8);
    const double mr = *std::max_element(ref.values().begin(), ref.values().end());
    const double mx = *std::max_element(rec.values().begin(), rec.values().end());
    for (double& v : rec.values()) v *= mr / mx;
    CHECK(ssim(rec, ref) == doctest::Approx(ssim(ref, rec)).epsilon(1e-12));
  }

  SUBCASE("too small") { CHECK_THROWS_AS(ssim(RealImage(10, 16, 1.0), RealImage(10, 16, 1.0)), InvalidInput); }
}

TEST_CASE("metrics are invariant under joint positive rescaling") {
  const auto ref = textured(16, 16, 9);
  const auto rec = textured(16, 16, 10);
  const auto base = evaluate_metrics(rec, ref);
  for (double k : {0.01, 3.0, 250.0}) {
    RealImage r2 = rec;
    RealImage f2 = ref;
    for (double& v : r2.values()) v *= k;
    for (double& v : f2.values()) v *= k;
    const auto m = evaluate_metrics(r2, f2);
    CHECK(m.psnr == doctest::Approx(base.psnr).epsilon(1e-10));
    CHECK(m.ssim == doctest::Approx(base.ssim).epsilon(1e-10));
    CHECK(m.rlne == doctest::Approx(base.rlne).epsilon(1e-10));
  }
}
