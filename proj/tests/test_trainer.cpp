#include "test_main.hpp"

#include <algorithm>
#include <cmath>

#include "inr/error.hpp"
#include "inr/phantom.hpp"
#include "inr/trainer.hpp"

using namespace inr;

namespace {

NetworkConfig small_network() {
  NetworkConfig n;
  n.hidden = 16;
  n.hidden_layers = 2;
  n.embed_size = 16;
  return n;
}

struct Problem {
  KspaceVolume y;
  SamplingMask mask;
};

Problem phantom_problem(Index n, Index coils, int r, int acs) {
  const auto spec = PhantomSpec::head(n, n, coils);
  const auto mask = uniform_cartesian_mask(n, n, r, acs);
  const auto acq = simulate_acquisition(make_phantom(spec), make_coils(spec), mask, 0.0, 1);
  return {normalize_kspace(acq.undersampled), mask};
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("adam_step") {
  SUBCASE("zero gradient leaves parameters but advances t") {
    std::vector<double> p{0.5, -1.0};
    AdamState s(2, 1e-3);
    adam_step(p, {0.0, 0.0}, s);
    CHECK(p == std::vector<double>{0.5, -1.0});
    CHECK(s.t == 1);
  }

  SUBCASE("first step hand value") {
    // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
    std::vector<double> p{0.0};
    AdamState s(1, 1e-4);
    adam_step(p, {1.0}, s);
    CHECK(std::abs(p[0] - (-1e-4 / (1.0 + 1e-8))) < 1e-9);
    CHECK(std::abs(p[0] - (-9.9999e-5)) < 1e-9);
  }

  SUBCASE("first step is homogeneous in lr") {
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b = a;
    const std::vector<double> g{0.3, -2.0, 1e-3};
    AdamState sa(3, 1e-3);
    AdamState sb(3, 2e-3);
    adam_step(a, g, sa);
    adam_step(b, g, sb);
    for (int i = 0; i < 3; ++i) CHECK(b[i] - (i + 1.0) == doctest::Approx(2.0 * (a[i] - (i + 1.0))).epsilon(1e-14));
  }

  SUBCASE("non-finite gradient names the entry") {
    std::vector<double> p{0.0, 0.0, 0.0};
    AdamState s(3);
    try {
      adam_step(p, {0.0, std::nan(""), 0.0}, s);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find('1') != std::string::npos);
    }
  }

  SUBCASE("size mismatch") {
    std::vector<double> p{0.0};
    AdamState s(2);
    CHECK_THROWS_AS(adam_step(p, {0.0}, s), InvalidInput);
  }
}

TEST_CASE("fit contract") {
  const auto prob = phantom_problem(8, 2, 2, 2);
  TrainConfig cfg;
  cfg.network = small_network();
  cfg.seed = 3;

  SUBCASE("iters must be positive") {
    cfg.iters = 0;
    CHECK_THROWS_AS(fit(prob.y, prob.mask, cfg), InvalidParameter);
  }

  SUBCASE("one iteration moves both networks once") {
    cfg.iters = 1;
    const auto start = ReconModel::create(8, 8, 2, cfg.network, cfg.seed);
    const auto out = fit(start, prob.y, prob.mask, cfg);
    CHECK(out.trace.size() == 1);
    CHECK(out.model.image_net.params() != start.image_net.params());
    CHECK(out.model.sens_net.params() != start.sens_net.params());
    // Adam's first step has magnitude lr / (1 + eps / |g|) on every entry with a nonzero gradient.
    double biggest = 0.0;
    for (std::size_t i = 0; i < start.image_net.params().size(); ++i) {
      biggest = std::max(biggest, std::abs(out.model.image_net.params()[i] - start.image_net.params()[i]));
    }
    CHECK(biggest <= cfg.lr * (1.0 + 1e-12));
    CHECK(biggest > 0.5 * cfg.lr);
  }

  SUBCASE("identical configuration gives bit-identical traces") {
    cfg.iters = 25;
    const auto a = fit(prob.y, prob.mask, cfg);
    const auto b = fit(prob.y, prob.mask, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      CHECK(a.trace[i].total == b.trace[i].total);
      CHECK(a.trace[i].dc == b.trace[i].dc);
    }
    CHECK(a.model.image_net.params() == b.model.image_net.params());
    CHECK(a.model.sens_net.params() == b.model.sens_net.params());
  }

  SUBCASE("lambda2 = 0 never evaluates the sensitivity regularizer") {
    cfg.iters = 10;
    cfg.weights.lambda2 = 0.0;
    std::vector<std::vector<double>> params;
    for (auto kind : {SensitivityRegularizer::None, SensitivityRegularizer::L1Fourier, SensitivityRegularizer::LowRank,
                      SensitivityRegularizer::TotalVariation}) {
      cfg.weights.reg_kind = kind;
      const auto out = fit(prob.y, prob.mask, cfg);
      CHECK(out.sens_reg_evaluations == 0);
      params.push_back(out.model.image_net.params());
    }
    for (const auto& p : params) CHECK(p == params.front());

    cfg.weights.lambda2 = 1e-3;
    cfg.weights.reg_kind = SensitivityRegularizer::LowRank;
    CHECK(fit(prob.y, prob.mask, cfg).sens_reg_evaluations == 10);
  }

  SUBCASE("shape mismatch") {
    cfg.iters = 1;
    CHECK_THROWS_AS(fit(prob.y, uniform_cartesian_mask(8, 6, 1, 0), cfg), InvalidInput);
  }

  SUBCASE("a diverging run reports the iteration") {
    cfg.iters = 200;
    cfg.lr = 1e300;
    try {
      fit(prob.y, prob.mask, cfg);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("iteration") != std::string::npos);
    }
  }
}

TEST_CASE("fit converges on a fully sampled single-coil phantom") {
  const auto prob = phantom_problem(32, 1, 1, 0);
  TrainConfig cfg;
  cfg.network.hidden = 64;
  cfg.network.hidden_layers = 3;
  cfg.network.embed_size = 64;
  cfg.weights.lambda1 = 0.0;
  cfg.weights.lambda2 = 0.0;
  cfg.seed = 1;
  const auto out = fit(prob.y, prob.mask, cfg);
  REQUIRE(out.trace.size() == 1000);
  CHECK(out.trace.back().total < 0.02 * out.trace.front().total);

  std::vector<double> head;
  std::vector<double> tail;
  for (int i = 0; i < 100; ++i) head.push_back(out.trace[static_cast<std::size_t>(i)].total);
  for (int i = 900; i < 1000; ++i) tail.push_back(out.trace[static_cast<std::size_t>(i)].total);
  CHECK(median(tail) < median(head));
}
