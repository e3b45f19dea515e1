#include <doctest.h>

#include <cmath>
#include <random>

#include "ceo/errors.hpp"
#include "ceo/polymatroid.hpp"

using namespace ceo;

namespace {

const CeoInstance sym2 = CeoInstance::make(1.0, {1.0, 1.0});
const SubsetMask s1{1}, s2{2}, s12{3};

CeoInstance random_instance(std::mt19937_64& g, std::size_t L) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::vector<double> sn(L);
  for (auto& s : sn) s = u(g);
  return CeoInstance::make(u(g), sn);
}

}  // namespace

TEST_CASE("rank function values") {
  CHECK(rank_f(sym2, {0.0, 0.0}, s12) == 0.0);
  CHECK(rank_f(sym2, {0.5, 0.5}, s12) == doctest::Approx(1.4086198277010387).epsilon(1e-13));
  CHECK(rank_f(sym2, {0.3, 0.9}, SubsetMask{}) == 0.0);
  CHECK(rank_fD(sym2, {0.0, 0.0}, s12, 1.0) == doctest::Approx(0.0));
  CHECK(rank_fD(sym2, {0.5, 0.5}, s2, 0.5) == doctest::Approx(0.6016335274575977).epsilon(1e-12));
  const double d = distortion(sym2, {0.5, 0.5});
  CHECK(rank_fD(sym2, {0.5, 0.5}, s1, d) == doctest::Approx(rank_f(sym2, {0.5, 0.5}, s1)).epsilon(1e-13));
}

TEST_CASE("rank_f - rank_fD does not depend on A") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto inst = random_instance(g, 4);
  NoiseAllocation r{u(g), u(g), u(g), u(g)};
  const double D = 0.9 * inst.sigma_x2;
  const double ref = rank_f(inst, r, SubsetMask{1}) - rank_fD(inst, r, SubsetMask{1}, D);
  for (std::uint32_t b = 1; b < 16; ++b)
    CHECK(rank_f(inst, r, SubsetMask{b}) - rank_fD(inst, r, SubsetMask{b}, D) ==
          doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("region membership") {
  CHECK(region_contains(sym2, {0.0, 0.0}, {0.0, 0.0}));
  CHECK_FALSE(region_contains(sym2, {0.5, 0.5}, {0.0, 0.0}));
  CHECK(region_contains(sym2, {0.5, 0.5}, vertex(sym2, {0.5, 0.5}, {0, 1})));
  SubsetMask w;
  CHECK(region_slack(sym2, {0.5, 0.5}, {0.0, 0.0}, &w) == doctest::Approx(-1.4086198277010387));
  CHECK(w == s12);
}

TEST_CASE("vertices") {
  CHECK(vertex(sym2, {0.0, 0.0}, {1, 0}) == RateVector{0.0, 0.0});
  const auto v = vertex(sym2, {0.5, 0.5}, {0, 1});
  // pi[0] = encoder 1 is decoded last
  CHECK(v[0] == doctest::Approx(0.66367976487866387).epsilon(1e-13));
  CHECK(v[1] == doctest::Approx(0.74494006282237502).epsilon(1e-13));
  CHECK_THROWS_AS(vertex(sym2, {0.5, 0.5}, {0, 0}), ArgumentError);
  CHECK(all_permutations(4).size() == 24);

  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int t = 0; t < 20; ++t) {
    const std::size_t L = 2 + t % 3;
    const auto inst = random_instance(g, L);
    NoiseAllocation r(L);
    for (auto& x : r) x = u(g);
    const double total = rank_f(inst, r, SubsetMask::full(L));
    for (const auto& pi : all_permutations(L)) {
      const auto R = vertex(inst, r, pi);
      double s = 0.0;
      for (double x : R) s += x;
      CHECK(std::abs(s - total) <= 1e-9);
      CHECK(region_contains(inst, r, R, 1e-9));
      CHECK(on_dominant_face(inst, r, R));
    }
  }
}

TEST_CASE("dominant face") {
  const NoiseAllocation r{0.5, 0.5};
  const auto a = vertex(sym2, r, {0, 1}), b = vertex(sym2, r, {1, 0});
  CHECK(on_dominant_face(sym2, r, {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])}));
  CHECK_FALSE(on_dominant_face(sym2, r, {a[0] + 1e-6, a[1]}));
}

TEST_CASE("face identification") {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  const auto inst = random_instance(g, 3);
  const NoiseAllocation r{u(g), u(g), u(g)};

  const auto f0 = identify_face(inst, r, vertex(inst, r, {2, 0, 1}));
  CHECK(f0.dimension == 0);
  REQUIRE(f0.chain.size() == 2);
  CHECK(f0.chain[0] == SubsetMask{4});
  CHECK(f0.chain[1] == SubsetMask{5});

  // edge between pi = (1,2,3) and (1,3,2): encoder 1 decoded last on both
  const auto v1 = vertex(inst, r, {0, 1, 2}), v2 = vertex(inst, r, {0, 2, 1});
  RateVector e(3);
  for (int i = 0; i < 3; ++i) e[i] = 0.3 * v1[i] + 0.7 * v2[i];
  const auto f1 = identify_face(inst, r, e);
  CHECK(f1.dimension == 1);
  REQUIRE(f1.chain.size() == 1);
  CHECK(f1.chain[0] == SubsetMask{1});

  RateVector c(3, 0.0);
  for (const auto& pi : all_permutations(3)) {
    const auto v = vertex(inst, r, pi);
    for (int i = 0; i < 3; ++i) c[i] += v[i] / 6.0;
  }
  const auto f2 = identify_face(inst, r, c);
  CHECK(f2.chain.empty());
  CHECK(f2.dimension == 2);

  CHECK_THROWS_AS(identify_face(inst, r, {c[0] + 0.1, c[1], c[2]}), ArgumentError);
}

TEST_CASE("vacuous encoders are projected out") {
  const auto inst = CeoInstance::make(1.0, {1.0, 0.5, 2.0});
  const NoiseAllocation r{0.4, 0.0, 0.9};
  const auto f = identify_face(inst, r, vertex(inst, r, {0, 1, 2}));
  CHECK(f.vacuous == SubsetMask{2});
  CHECK(f.dimension == 0);
}

TEST_CASE("supermodularity") {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t L = 2 + t % 3;
    const auto inst = random_instance(g, L);
    NoiseAllocation r(L);
    for (auto& x : r) x = u(g);
    CHECK(check_supermodular(inst, r));
  }
  CHECK(supermodular_gap(sym2, {0.0, 0.0}, s1, s2) == 0.0);
  CHECK(supermodular_gap(sym2, {0.5, 0.5}, s1, s12) == 0.0);
  CHECK(supermodular_gap(sym2, {0.5, 0.5}, s1, s2) > 0.0);
}
