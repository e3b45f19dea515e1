#include <doctest.h>

#include <cmath>

#include "ceo/errors.hpp"
#include "ceo/montecarlo.hpp"

using namespace ceo;

namespace {

const CeoInstance sym2 = CeoInstance::make(1.0, {1.0, 1.0});

SimConfig cfg(std::uint64_t n, std::uint64_t seed = 42) {
  SimConfig c;
  c.n_samples = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("zero allocation estimates nothing") {
  const auto rep = simulate_distortion(sym2, {0.0, 0.0}, cfg(100000));
  CHECK(rep.analytic_d[0] == 1.0);
  CHECK(std::abs(rep.z_scores[0]) <= 5.0);
  CHECK(rep.empirical_mse[0] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("SYM2 at r = (0.5, 0.5)") {
  const auto rep = simulate_distortion(sym2, {0.5, 0.5}, cfg(300000));
  CHECK(rep.analytic_d[0] == doctest::Approx(0.44164907712422996));
  CHECK(rep.std_error[0] > 0.0);
  CHECK(std::abs(rep.z_scores[0]) <= 4.0);
}

TEST_CASE("saturated single encoder observes Y directly") {
  const auto inst = CeoInstance::make(2.0, {0.5});
  const auto rep = simulate_distortion(inst, {kCap}, cfg(200000));
  CHECK(rep.analytic_d[0] == doctest::Approx(2.0 * 0.5 / 2.5));
  CHECK(std::abs(rep.z_scores[0]) <= 4.0);
}

TEST_CASE("determinism across thread counts") {
  SimConfig a = cfg(150000, 7), b = cfg(150000, 7);
  a.threads = 1;
  b.threads = 3;
  const auto x = simulate_distortion(sym2, {0.3, 0.9}, a);
  const auto y = simulate_distortion(sym2, {0.3, 0.9}, b);
  CHECK(x.empirical_mse == y.empirical_mse);
  CHECK(x.std_error == y.std_error);
  const auto z = simulate_distortion(sym2, {0.3, 0.9}, cfg(150000, 8));
  CHECK(z.empirical_mse != x.empirical_mse);
}

TEST_CASE("two-stage chain") {
  const auto rep = simulate_refinement(sym2, {{0.3, 0.3}, {0.5, 0.5}}, cfg(300000));
  REQUIRE(rep.z_scores.size() == 2);
  CHECK(rep.analytic_d[0] == doctest::Approx(distortion(sym2, {0.3, 0.3})));
  for (double z : rep.z_scores) CHECK(std::abs(z) <= 4.0);
  const auto same = simulate_refinement(sym2, {{0.4, 0.2}, {0.4, 0.2}}, cfg(100000));
  CHECK(same.analytic_d[0] == same.analytic_d[1]);
  CHECK(same.empirical_mse[0] == same.empirical_mse[1]);
  const auto one = simulate_refinement(sym2, {{0.5, 0.5}}, cfg(100000));
  CHECK(one.empirical_mse.size() == 1);
  CHECK_THROWS_AS(simulate_refinement(sym2, {{0.5, 0.5}, {0.4, 0.6}}, cfg(1000)), ArgumentError);
}

TEST_CASE("perturbed coefficients do worse on common samples") {
  const NoiseAllocation r{0.6, 0.2};
  const auto c = mmse_coefficients(sym2, r);
  const double base = simulate_linear(sym2, r, c, cfg(200000)).empirical_mse[0];
  for (std::size_t i = 0; i < 2; ++i)
    for (double f : {0.99, 1.01}) {
      auto p = c;
      p[i] *= f;
      CHECK(simulate_linear(sym2, r, p, cfg(200000)).empirical_mse[0] > base);
    }
}
