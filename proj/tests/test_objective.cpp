#include "test_main.hpp"

#include "inr/error.hpp"
#include "inr/objective.hpp"
#include "oracles.hpp"

using namespace inr;

namespace {

CoilSensitivitySet random_maps(Index coils, Index h, Index w, std::uint64_t seed) {
  CoilSensitivitySet s(coils, h, w);
  for (Index j = 0; j < coils; ++j) s[j] = oracle::random_image(h, w, seed + static_cast<std::uint64_t>(j));
  return s;
}

SamplingMask random_mask(Index h, Index w, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Image2D<std::uint8_t> pattern(h, w);
  for (Index p = 0; p < h * w; ++p) pattern[p] = rng.uniform() < 0.5 ? 1 : 0;
  pattern[0] = 1;
  return SamplingMask(MaskKind::Pointwise, pattern);
}

SamplingMask full_mask(Index h, Index w) { return SamplingMask(MaskKind::Pointwise, Image2D<std::uint8_t>(h, w, 1)); }

template <typename Fn>
double check_stack_gradient(const CoilSensitivitySet& s, Fn loss_and_grad) {
  const auto analytic = oracle::flatten(loss_and_grad(s).gradient);
  const auto numeric = oracle::finite_difference(
      [&](const std::vector<double>& v) {
        return loss_and_grad(oracle::unflatten_stack<CoilSensitivitySet>(v, s.coils(), s.rows(), s.cols())).value;
      },
      oracle::flatten(s), 1e-6);
  return oracle::max_rel_error(analytic, numeric);
}

}  // namespace

TEST_CASE("forward_model") {
  SUBCASE("zero image gives zero prediction") {
    const auto pred = forward_model(ComplexImage(4, 4), random_maps(2, 4, 4, 1), full_mask(4, 4));
    for (const auto& k : pred) {
      for (const auto& z : k.values()) CHECK(z == cplx{});
    }
  }
  SUBCASE("1x1 grid") {
    CoilSensitivitySet s(1, 1, 1);
    s[0][0] = 2.0;
    ComplexImage x(1, 1, 3.0);
    CHECK(forward_model(x, s, full_mask(1, 1))[0][0] == cplx{6.0, 0.0});
  }
  SUBCASE("matches direct composition of product, DFT sum and mask") {
    const auto x = oracle::random_image(4, 4, 11);
    const auto s = random_maps(2, 4, 4, 12);
    const auto m = random_mask(4, 4, 13);
    const auto pred = forward_model(x, s, m);
    for (Index j = 0; j < 2; ++j) {
      ComplexImage prod(4, 4);
      for (Index p = 0; p < 16; ++p) prod[p] = s[j][p] * x[p];
      const auto k = oracle::dft_centered(prod);
      for (Index p = 0; p < 16; ++p) {
        const cplx expect = m.sampled(p) ? k[p] : cplx{};
        CHECK(std::abs(pred[j][p] - expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("dc_loss") {
  const auto m = random_mask(4, 4, 3);
  KspaceVolume y(2, 4, 4);
  for (Index j = 0; j < 2; ++j) y[j] = oracle::random_image(4, 4, 20 + j);
  y = apply_mask(y, m);

  CHECK(dc_loss(y, y, m).value == 0.0);

  SUBCASE("single sampled entry") {
    Image2D<std::uint8_t> one(4, 4);
    one(1, 2) = 1;
    const SamplingMask single(MaskKind::Pointwise, one);
    KspaceVolume target(1, 4, 4);
    target[0](1, 2) = 1.0;
    CHECK(dc_loss(KspaceVolume(1, 4, 4), target, single).value == doctest::Approx(1.0));
  }

  SUBCASE("gradient matches finite differences") {
    KspaceVolume pred(2, 4, 4);
    for (Index j = 0; j < 2; ++j) pred[j] = oracle::random_image(4, 4, 40 + j);
    for (DataNorm norm : {DataNorm::L1, DataNorm::SquaredL2}) {
      auto fn = [&](const CoilSensitivitySet& p) {
        auto r = dc_loss(KspaceVolume(static_cast<const CoilArray&>(p)), y, m, norm);
        return Differentiated<CoilSensitivitySet>{r.value, CoilSensitivitySet(static_cast<const CoilArray&>(r.gradient))};
      };
      CHECK(check_stack_gradient(CoilSensitivitySet(static_cast<const CoilArray&>(pred)), fn) < 1e-4);
    }
  }
}

TEST_CASE("tv") {
  CHECK(tv(ComplexImage(5, 3, cplx{2.0, -1.0})).value == 0.0);

  ComplexImage row(1, 2);
  row(0, 1) = 1.0;
  CHECK(tv(row).value == doctest::Approx(1.0));

  // Row differences (down): |2-0| + |3-1| = 4; column differences: |1-0| + |3-2| = 2.
  ComplexImage fixture(2, 2);
  fixture(0, 0) = 0.0;
  fixture(0, 1) = 1.0;
  fixture(1, 0) = 2.0;
  fixture(1, 1) = 3.0;
  CHECK(tv(fixture).value == doctest::Approx(6.0).epsilon(1e-15));

  SUBCASE("gradient matches finite differences") {
    const auto img = oracle::random_image(5, 4, 77);
    CoilSensitivitySet one(1, 5, 4);
    one[0] = img;
    CHECK(check_stack_gradient(one, [](const CoilSensitivitySet& s) {
            auto r = tv(s[0]);
            CoilSensitivitySet g(1, s.rows(), s.cols());
            g[0] = r.gradient;
            return Differentiated<CoilSensitivitySet>{r.value, g};
          }) < 1e-4);
  }
}

TEST_CASE("sensitivity regularizers: oracle values") {
  CHECK(sens_reg_l1_fourier(CoilSensitivitySet(2, 4, 4)).value == 0.0);
  CHECK(sens_reg_low_rank(CoilSensitivitySet(2, 4, 4)).value == 0.0);
  CHECK(sens_reg_tv(CoilSensitivitySet(2, 4, 4)).value == 0.0);

  SUBCASE("l1 fourier of a constant map is |c| sqrt(HW)") {
    const cplx c{0.6, -0.8};
    CoilSensitivitySet s(1, 4, 4);
    s[0] = ComplexImage(4, 4, c);
    CHECK(sens_reg_l1_fourier(s).value == doctest::Approx(4.0 * std::abs(c)).epsilon(1e-12));
    // Direct-DFT cross-check of the same quantity.
    double direct = 0.0;
    const auto spectrum = oracle::dft_centered(s[0]);
    for (const auto& z : spectrum.values()) direct += std::abs(z);
    CHECK(direct == doctest::Approx(4.0).epsilon(1e-12));
  }

  SUBCASE("nuclear norm") {
    CoilSensitivitySet eye(1, 2, 2);
    eye[0](0, 0) = 1.0;
    eye[0](1, 1) = 1.0;
    CHECK(sens_reg_low_rank(eye).value == doctest::Approx(2.0).epsilon(1e-12));
    CoilSensitivitySet ones(1, 2, 2);
    ones[0] = ComplexImage(2, 2, 1.0);
    CHECK(sens_reg_low_rank(ones).value == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("tv regularizer reuses the image fixture and sums over coils") {
    CoilSensitivitySet s(3, 2, 2);
    s[0] = ComplexImage(2, 2, 0.5);
    s[1](0, 1) = 1.0;
    s[1](1, 0) = 2.0;
    s[1](1, 1) = 3.0;
    s[2] = ComplexImage(2, 2, cplx{0.0, 1.0});
    CHECK(sens_reg_tv(s).value == doctest::Approx(6.0));
  }

  SUBCASE("tv regularizer is additive over coils and equals tv on one coil") {
    const auto a = random_maps(2, 5, 5, 5);
    const auto b = random_maps(1, 5, 5, 9);
    CoilSensitivitySet joined(3, 5, 5);
    joined[0] = a[0];
    joined[1] = a[1];
    joined[2] = b[0];
    CHECK(sens_reg_tv(joined).value == doctest::Approx(sens_reg_tv(a).value + sens_reg_tv(b).value).epsilon(1e-14));
    CHECK(sens_reg_tv(b).value == tv(b[0]).value);
  }
}

TEST_CASE("sensitivity regularizers: gradients match finite differences") {
  const auto s = random_maps(2, 4, 4, 101);
  CHECK(check_stack_gradient(s, sens_reg_l1_fourier) < 1e-4);
  CHECK(check_stack_gradient(s, sens_reg_low_rank) < 1e-4);
  CHECK(check_stack_gradient(s, sens_reg_tv) < 1e-4);
  // Non-square maps exercise the thin SVD.
  CHECK(check_stack_gradient(random_maps(1, 3, 5, 7), sens_reg_low_rank) < 1e-4);
}

TEST_CASE("total_loss") {
  const Index h = 4;
  const Index w = 4;
  const auto x = oracle::random_image(h, w, 1);
  const auto s = random_maps(2, h, w, 2);
  const auto m = random_mask(h, w, 3);
  KspaceVolume y(2, h, w);
  for (Index j = 0; j < 2; ++j) y[j] = oracle::random_image(h, w, 30 + j);
  y = apply_mask(y, m);

  SUBCASE("zero weights reduce to the data term") {
    const LossWeights weights{0.0, 0.0, SensitivityRegularizer::TotalVariation, DataNorm::L1};
    const auto loss = total_loss(x, s, y, m, weights);
    CHECK(loss.report.total == dc_loss(forward_model(x, s, m), y, m).value);
    CHECK_FALSE(loss.sens_reg_evaluated);
  }

  SUBCASE("report identity and regularizer skipping") {
    for (auto kind : {SensitivityRegularizer::None, SensitivityRegularizer::L1Fourier, SensitivityRegularizer::LowRank,
                      SensitivityRegularizer::TotalVariation}) {
      const LossWeights weights{0.3, 0.7, kind, DataNorm::L1};
      const auto r = total_loss(x, s, y, m, weights).report;
      CHECK(std::abs(r.total - (r.dc + 0.3 * r.image_tv + 0.7 * r.sens_reg)) <= 1e-12);
      CHECK(r.dc >= 0.0);
      CHECK(r.image_tv >= 0.0);
      CHECK(r.sens_reg >= 0.0);
    }
    const auto none = total_loss(x, s, y, m, {0.3, 0.7, SensitivityRegularizer::None, DataNorm::L1});
    const auto no_weight = total_loss(x, s, y, m, {0.3, 0.0, SensitivityRegularizer::LowRank, DataNorm::L1});
    CHECK_FALSE(none.sens_reg_evaluated);
    CHECK_FALSE(no_weight.sens_reg_evaluated);
    CHECK(none.report.total == no_weight.report.total);
    CHECK(none.grad_sens == no_weight.grad_sens);
  }

  SUBCASE("gradients with respect to image and sensitivities") {
    for (auto kind : {SensitivityRegularizer::L1Fourier, SensitivityRegularizer::LowRank,
                      SensitivityRegularizer::TotalVariation}) {
      const LossWeights weights{0.2, 0.4, kind, DataNorm::L1};
      const auto loss = total_loss(x, s, y, m, weights);

      std::vector<double> packed = oracle::flatten(x);
      const auto sflat = oracle::flatten(s);
      packed.insert(packed.end(), sflat.begin(), sflat.end());
      std::vector<double> analytic = oracle::flatten(loss.grad_image);
      const auto gs = oracle::flatten(loss.grad_sens);
      analytic.insert(analytic.end(), gs.begin(), gs.end());

      const auto numeric = oracle::finite_difference(
          [&](const std::vector<double>& v) {
            const std::vector<double> xv(v.begin(), v.begin() + 2 * h * w);
            const std::vector<double> sv(v.begin() + 2 * h * w, v.end());
            return total_loss(oracle::unflatten_image(xv, h, w),
                              oracle::unflatten_stack<CoilSensitivitySet>(sv, 2, h, w), y, m, weights)
                .report.total;
          },
          packed, 1e-6);
      CHECK(oracle::max_rel_error(analytic, numeric) < 1e-4);
    }
  }

  SUBCASE("negative weights rejected") {
    CHECK_THROWS_AS(total_loss(x, s, y, m, {-1.0, 0.0, SensitivityRegularizer::None, DataNorm::L1}), InvalidParameter);
  }
}

TEST_CASE("regularizer names round-trip") {
  for (auto kind : {SensitivityRegularizer::None, SensitivityRegularizer::L1Fourier, SensitivityRegularizer::LowRank,
                    SensitivityRegularizer::TotalVariation}) {
    CHECK(parse_regularizer(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_regularizer("ridge"), InvalidParameter);
}
