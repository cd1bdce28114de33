#include "test_main.hpp"

#include <set>

#include "inr/error.hpp"
#include "inr/sampling.hpp"
#include "oracles.hpp"

using namespace inr;

namespace {

std::set<Index> sampled_lines(const SamplingMask& m) {
  std::set<Index> lines;
  for (Index c = 0; c < m.cols(); ++c) {
    if (m.sampled(0, c)) lines.insert(c);
  }
  return lines;
}

// Enumeration of the line rule: multiples of R, plus [n/2 - acs/2, n/2 - acs/2 + acs).
std::set<Index> expected_lines(Index n, int r, int acs) {
  std::set<Index> lines;
  for (Index l = 0; l < n; l += r) lines.insert(l);
  for (Index l = n / 2 - acs / 2; l < n / 2 - acs / 2 + acs; ++l) lines.insert(l);
  return lines;
}

}  // namespace

TEST_CASE("uniform_cartesian_mask") {
  SUBCASE("W=20, R=5, ACS=4") {
    const auto m = uniform_cartesian_mask(6, 20, 5, 4);
    CHECK(sampled_lines(m) == std::set<Index>{0, 5, 8, 9, 10, 11, 15});
    CHECK(m.count() == 7 * 6);
    for (Index r = 0; r < 6; ++r) {
      for (Index c = 0; c < 20; ++c) CHECK(m.sampled(r, c) == m.sampled(0, c));
    }
  }
  SUBCASE("R=1 and ACS=W are full sampling") {
    CHECK(uniform_cartesian_mask(8, 9, 1, 0).count() == 72);
    CHECK(uniform_cartesian_mask(8, 9, 7, 9).count() == 72);
  }
  SUBCASE("row axis") {
    const auto m = uniform_cartesian_mask(20, 3, 5, 4, LineAxis::Rows);
    for (Index r = 0; r < 20; ++r) CHECK(m.sampled(r, 1) == expected_lines(20, 5, 4).contains(r));
  }
  SUBCASE("line count matches enumeration for all W <= 64, R <= 8, ACS <= 16") {
    for (Index w = 1; w <= 64; ++w) {
      for (int r = 1; r <= std::min<Index>(8, w); ++r) {
        for (int acs = 0; acs <= std::min<Index>(16, w); ++acs) {
          const auto m = uniform_cartesian_mask(1, w, r, acs);
          REQUIRE(sampled_lines(m) == expected_lines(w, r, acs));
        }
      }
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(uniform_cartesian_mask(4, 4, 5, 0), InvalidParameter);
    CHECK_THROWS_AS(uniform_cartesian_mask(4, 4, 2, 5), InvalidParameter);
    CHECK_THROWS_AS(uniform_cartesian_mask(4, 4, 0, 0), InvalidParameter);
  }
  SUBCASE("offset shifts the periodic lines") {
    const auto m = uniform_cartesian_mask(1, 20, 5, 0, LineAxis::Cols, 2);
    CHECK(sampled_lines(m) == std::set<Index>{2, 7, 12, 17});
  }
}

TEST_CASE("gaussian_pointwise_mask") {
  CHECK(gaussian_pointwise_mask(16, 12, 1.0).count() == 16 * 12);
  CHECK(gaussian_pointwise_mask(64, 64, 0.25, 0.15, 1).count() == 1024);
  CHECK(gaussian_pointwise_mask(33, 17, 0.3, 0.2, 1).count() == std::llround(0.3 * 33 * 17));

  SUBCASE("determinism") {
    CHECK(gaussian_pointwise_mask(32, 32, 0.25, 0.15, 9) == gaussian_pointwise_mask(32, 32, 0.25, 0.15, 9));
    CHECK_FALSE(gaussian_pointwise_mask(32, 32, 0.25, 0.15, 9) == gaussian_pointwise_mask(32, 32, 0.25, 0.15, 10));
  }

  SUBCASE("denser near the centre than at the edges") {
    for (double sigma : {0.1, 0.15, 0.25}) {
      const auto m = gaussian_pointwise_mask(64, 64, 0.25, sigma, 4);
      Index centre = 0;
      Index centre_n = 0;
      Index edge = 0;
      Index edge_n = 0;
      for (Index r = 0; r < 64; ++r) {
        for (Index c = 0; c < 64; ++c) {
          const Index d = std::max(std::abs(r - 32), std::abs(c - 32));
          if (d < 8) {
            centre += m.sampled(r, c);
            ++centre_n;
          } else if (d >= 24) {
            edge += m.sampled(r, c);
            ++edge_n;
          }
        }
      }
      CHECK(static_cast<double>(centre) / centre_n > static_cast<double>(edge) / edge_n);
    }
  }

  SUBCASE("invalid rate") {
    CHECK_THROWS_AS(gaussian_pointwise_mask(8, 8, 0.0), InvalidParameter);
    CHECK_THROWS_AS(gaussian_pointwise_mask(8, 8, -0.5), InvalidParameter);
    CHECK_THROWS_AS(gaussian_pointwise_mask(8, 8, 1.5), InvalidParameter);
  }
}

TEST_CASE("apply_mask and apply_complement") {
  KspaceVolume k(3, 8, 6);
  for (Index j = 0; j < 3; ++j) k[j] = oracle::random_image(8, 6, 7 + j);

  SUBCASE("full mask is the identity") {
    CHECK(apply_mask(k, uniform_cartesian_mask(8, 6, 1, 0)) == k);
  }

  SUBCASE("single sampled point") {
    Image2D<std::uint8_t> one(8, 6);
    one(0, 0) = 1;
    const auto out = apply_mask(k, SamplingMask(MaskKind::Pointwise, one));
    for (Index j = 0; j < 3; ++j) {
      for (Index p = 0; p < 48; ++p) CHECK(out[j][p] == (p == 0 ? k[j][0] : cplx{}));
    }
  }

  SUBCASE("partition is bit-exact and disjoint for any mask") {
    Xoshiro256 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = trial % 2 ? gaussian_pointwise_mask(8, 6, 0.1 + 0.04 * trial, 0.2, rng.next())
                               : uniform_cartesian_mask(8, 6, 1 + trial % 5, trial % 7);
      const auto a = apply_mask(k, m);
      const auto b = apply_complement(k, m);
      for (Index j = 0; j < 3; ++j) {
        for (Index p = 0; p < 48; ++p) {
          CHECK(a[j][p] + b[j][p] == k[j][p]);
          CHECK((a[j][p] == cplx{} || b[j][p] == cplx{}));
          if (!m.sampled(p)) CHECK(a[j][p] == cplx{});
        }
      }
      CHECK(m.count() + m.complement().count() == 48);
    }
  }

  SUBCASE("shape mismatch") { CHECK_THROWS_AS(apply_mask(k, uniform_cartesian_mask(6, 8, 1, 0)), InvalidInput); }
}
