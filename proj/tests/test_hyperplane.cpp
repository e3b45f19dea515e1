#include <doctest.h>

#include <cmath>
#include <random>

#include "ceo/errors.hpp"
#include "ceo/hyperplane.hpp"

using namespace ceo;

namespace {
const CeoInstance sym2 = CeoInstance::make(1.0, {1.0, 1.0});
}

TEST_CASE("symmetric direction") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto h = support_value(sym2, {1.0, 1.0}, 0.5);
  CHECK(h.alpha[0] == doctest::Approx(s).epsilon(1e-15));
  CHECK(h.r_star[0] == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-9));
  CHECK(h.r_star[1] == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-9));
  // s * 1.5 ln 2
  CHECK(h.phi == doctest::Approx(0.7351936076014103).epsilon(1e-9));
  CHECK(h.alpha[0] * h.contact_vertex[0] + h.alpha[1] * h.contact_vertex[1] ==
        doctest::Approx(h.phi).epsilon(1e-12));
  const auto k = kkt_residual(sym2, h);
  CHECK(k.stationarity <= 1e-8);
  CHECK(k.complementary <= 1e-8);
  CHECK(std::abs(brute_force_phi(sym2, {1.0, 1.0}, 0.5, 0.005) - h.phi) <= 1e-3);
}

TEST_CASE("zero-alpha and trivial-distortion branches") {
  const auto h = support_value(sym2, {0.0, 1.0}, 0.6);
  CHECK(h.phi == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(h.r_star[0] == kCap);
  const auto z = support_value(sym2, {0.3, 0.7}, 1.0);
  CHECK(z.phi == doctest::Approx(0.0));
  CHECK(z.r_star == NoiseAllocation{0.0, 0.0});
  CHECK(brute_force_phi(sym2, {0.3, 0.7}, 1.0, 0.01) == doctest::Approx(0.0));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(support_value(sym2, {1.0, 1.0}, 1.0 / 3.0), InfeasibleDistortion);
  CHECK_THROWS_AS(support_value(sym2, {1.0, 1.0}, 1.5), ArgumentError);
  CHECK_THROWS_AS(support_value(sym2, {0.0, 0.0}, 0.5), ArgumentError);
  CHECK_THROWS_AS(support_value(sym2, {-1.0, 1.0}, 0.5), ArgumentError);
}

TEST_CASE("one heavy encoder approaches the single-encoder minimum") {
  // encoder 2 is useless, so phi for alpha = e1 is the remote rate-distortion value
  const auto inst = CeoInstance::make(1.0, {0.5, 1e6});
  const double D = 0.5;
  const auto h = support_value(inst, {1.0, 0.0}, D);
  // 1/D = 1 + (1 - e^{-2r}) / 0.5  =>  e^{-2r} = 0.5;  R = 1/2 ln(1/D) + r
  const double r = 0.5 * std::log(2.0);
  CHECK(h.phi == doctest::Approx(0.5 * std::log(2.0) + r).epsilon(1e-5));
  CHECK(std::abs(brute_force_phi(inst, {1.0, 0.0}, D, 0.005) - h.phi) <= 1e-3);
}

TEST_CASE("grid oracle on random instances") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(0.2, 2.0), w(0.05, 1.0);
  for (int t = 0; t < 4; ++t) {
    const auto inst = CeoInstance::make(u(g), {u(g), u(g)});
    const double lo = d_min(inst, 2), hi = inst.sigma_x2;
    const double D = lo + (0.15 + 0.7 * w(g)) * (hi - lo);
    const std::vector<double> alpha{w(g), w(g)};
    const auto h = support_value(inst, alpha, D);
    const auto k = kkt_residual(inst, h);
    CHECK(k.stationarity <= 1e-8);
    CHECK(k.complementary <= 1e-8);
    CHECK(std::abs(brute_force_phi(inst, alpha, D, 0.005) - h.phi) <= 1e-3);
    CHECK(distortion(inst, h.r_star) == doctest::Approx(D).epsilon(1e-9));
  }
}

TEST_CASE("vertex expansion equals the inner product with the vertex") {
  const auto inst = CeoInstance::make(1.4, {0.3, 0.9, 2.2});
  const NoiseAllocation r{0.4, 1.1, 0.2};
  const std::vector<double> alpha{0.2, 0.7, 0.5};
  const Permutation pi = alpha_order(alpha);
  CHECK(pi == Permutation{1, 2, 0});
  const auto v = vertex(inst, r, pi);
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += alpha[i] * v[i];
  CHECK(vertex_expansion(inst, r, alpha, pi) == doctest::Approx(dot).epsilon(1e-13));
}

TEST_CASE("multiplier below zero when the weaker encoder carries the rate") {
  const auto inst = CeoInstance::make(1.0, {1.0, 1.0});
  const std::vector<double> alpha{0.25045660453630353, 0.80187077600096712};
  const double D = 0.77513422722737069;
  const auto h = support_value(inst, alpha, D);
  CHECK(h.nu < 0.0);
  CHECK(h.r_star[1] == 0.0);
  CHECK(distortion(inst, h.r_star) == doctest::Approx(D).epsilon(1e-9));
  const auto k = kkt_residual(inst, h);
  CHECK(k.stationarity <= 1e-8);
  CHECK(k.complementary <= 1e-8);
  CHECK(std::abs(brute_force_phi(inst, alpha, D, 0.005) - h.phi) <= 1e-3);
}
