#include <doctest.h>

#include <cmath>
#include <limits>

#include "ceo/core_model.hpp"
#include "ceo/errors.hpp"

using namespace ceo;

namespace {
const CeoInstance sym2 = CeoInstance::make(1.0, {1.0, 1.0});
}

TEST_CASE("channel noise and rate are inverse maps") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(r_from_channel_noise(sym2, 0, inf) == 0.0);
  CHECK(r_from_channel_noise(sym2, 0, 0.0) == kCap);
  CHECK(r_from_channel_noise(sym2, 0, 1.0) == doctest::Approx(0.34657359027997264).epsilon(1e-14));
  CHECK(std::isinf(channel_noise_from_r(sym2, 0, 0.0)));
  CHECK(channel_noise_from_r(sym2, 0, 0.5 * std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  const auto two = CeoInstance::make(1.0, {2.0});
  CHECK(channel_noise_from_r(two, 0, kCap) == 0.0);
  for (double r : {1e-9, 0.01, 0.7, 3.0, 12.0})
    CHECK(r_from_channel_noise(sym2, 1, channel_noise_from_r(sym2, 1, r)) ==
          doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("precision and distortion") {
  CHECK(precision(sym2, {0.0, 0.0}) == 1.0);
  CHECK(precision(sym2, {kCap, kCap}) == 3.0);
  CHECK(precision(sym2, {0.5, 0.5}) == doctest::Approx(2.2642411176571153).epsilon(1e-14));
  CHECK(distortion(sym2, {0.0, 0.0}) == 1.0);
  CHECK(distortion(sym2, {kCap, kCap}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(distortion(sym2, {0.5, 0.5}) == doctest::Approx(0.44164907712422996).epsilon(1e-12));
  CHECK(exp_m2(kCap) == 0.0);
  CHECK(exp_m2(80.0) == 0.0);
}

TEST_CASE("d_min uses the k least noisy encoders") {
  CHECK(d_min(sym2, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(d_min(sym2, 1) == doctest::Approx(0.5));
  const auto inst = CeoInstance::make(2.0, {0.5, 2.0});
  CHECK(d_min(inst, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(d_min(inst, 1) == doctest::Approx(1.0 / 2.5));
  CHECK_THROWS_AS(d_min(sym2, 3), ArgumentError);
  CHECK_THROWS_AS(d_min(sym2, 0), ArgumentError);
}

TEST_CASE("feasible set") {
  CHECK(in_feasible_set(sym2, {0.5, 0.5}, 0.45));
  CHECK_FALSE(in_feasible_set(sym2, {0.0, 0.0}, 0.5));
  CHECK(in_feasible_set(sym2, {0.0, 0.0}, 1.0));
}

TEST_CASE("instances are validated") {
  CHECK_THROWS_AS(CeoInstance::make(0.0, {1.0}), ArgumentError);
  CHECK_THROWS_AS(CeoInstance::make(1.0, {}), ArgumentError);
  CHECK_THROWS_AS(CeoInstance::make(1.0, {1.0, -1.0}), ArgumentError);
  CHECK_THROWS_AS(CeoInstance::make(1.0, std::vector<double>(17, 1.0)), ArgumentError);
  CHECK_THROWS_AS(check_allocation(sym2, {0.1}), ArgumentError);
  CHECK_THROWS_AS(check_allocation(sym2, {0.1, -0.2}), ArgumentError);
  CHECK_THROWS_AS(check_rates(sym2, {0.1, std::nan("")}), ArgumentError);
}
