#include <doctest.h>

#include <cmath>
#include <random>

#include "ceo/errors.hpp"
#include "ceo/inversion.hpp"
#include "ceo/refinement.hpp"

using namespace ceo;

namespace {

const CeoInstance sym2 = CeoInstance::make(1.0, {1.0, 1.0});

double full_set_slack(const RefinementReport& rep, std::size_t j) { return rep.per_stage[j].back().slack; }

}  // namespace

TEST_CASE("no increment is feasible and tight") {
  const RateVector R{0.9, 0.4};
  const auto rep = check_refinement(sym2, {{R, R}});
  CHECK(rep.feasible);
  REQUIRE(rep.per_stage.size() == 2);
  CHECK(std::abs(full_set_slack(rep, 1)) <= 1e-9);
  CHECK(rep.per_stage[1].size() == 3);
  CHECK(rep.r_chain_monotone);
}

TEST_CASE("Omega configurations on SYM2") {
  // both stages in Omega1, R1 frozen -> feasible
  const RateVector a{2.0, 0.05}, b{2.0, 0.2};
  REQUIRE(classify_omega(sym2, a) == OmegaTag::Omega1);
  REQUIRE(classify_omega(sym2, b) == OmegaTag::Omega1);
  CHECK(check_refinement(sym2, {{a, b}}).feasible);
  // both in Omega1 with both coordinates moving and R_{2,1} > 0 -> infeasible
  const RateVector c{2.5, 0.2};
  REQUIRE(classify_omega(sym2, c) == OmegaTag::Omega1);
  CHECK_FALSE(check_refinement(sym2, {{a, c}}).feasible);
  // R_{2,1} = 0 -> feasible
  const RateVector d{1.5, 0.0}, e{2.5, 0.2};
  REQUIRE(classify_omega(sym2, d) == OmegaTag::Omega1);
  CHECK(check_refinement(sym2, {{d, e}}).feasible);
  // Omega1 -> Omega2 with positive rates -> infeasible
  const RateVector f{2.0, 0.05}, h{2.0, 3.0};
  REQUIRE(classify_omega(sym2, h) == OmegaTag::Omega2);
  const auto rep = check_refinement(sym2, {{f, h}});
  CHECK_FALSE(rep.feasible);
  CHECK(rep.worst_stage == 1);
}

TEST_CASE("stages must be nondecreasing") {
  CHECK_THROWS_AS(check_refinement(sym2, {{{0.5, 0.5}, {0.4, 0.6}}}), ArgumentError);
  CHECK_THROWS_AS(check_refinement(sym2, {{}}), ArgumentError);
}

TEST_CASE("cross-form agreement and pairwise decomposition") {
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int feasible = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t L = 2 + t % 2;
    std::vector<double> sn(L);
    for (auto& s : sn) s = 0.2 + 2.0 * u(g);
    const auto inst = CeoInstance::make(0.5 + 2.0 * u(g), sn);
    RateVector a(L), b(L), c(L);
    for (std::size_t i = 0; i < L; ++i) {
      a[i] = u(g) < 0.2 ? 0.0 : 2.0 * u(g);
      b[i] = a[i] + (u(g) < 0.4 ? 0.0 : 1.5 * u(g));
      c[i] = b[i] + (u(g) < 0.4 ? 0.0 : u(g));
    }
    const auto rep = check_refinement(inst, {{a, b}});
    feasible += rep.feasible;
    CHECK(dominant_face_form(inst, a, b) == rep.feasible);
    for (std::size_t j = 0; j < rep.per_stage.size(); ++j) CHECK(std::abs(full_set_slack(rep, j)) <= 1e-6);
    CHECK(pairwise_equivalence(inst, {{a, b, c}}));
  }
  CHECK(feasible > 5);
  CHECK(feasible < 35);
  CHECK(pairwise_equivalence(sym2, {{{0.3, 0.3}}}));
  CHECK(dominant_face_form(sym2, {0.6, 0.2}, {0.6, 0.2}));
}

TEST_CASE("reachable set from an Omega2 point") {
  const RateVector s{0.2, 0.6};
  REQUIRE(classify_omega(sym2, s) == OmegaTag::Omega2);
  const GridAxis ax{0.0, 1.0, 0.05};
  const auto map = reachable_set_l2(sym2, s, ax, ax);
  CHECK(ax.count() == 21);
  // the R2-constant ray while it stays in Omega2
  for (std::size_t i = 4; i < ax.count(); ++i) {
    const RateVector p{ax.at(i), 0.6};
    if (classify_omega(sym2, p) != OmegaTag::Omega2) break;
    CHECK(map.at(i, 12));
  }
  // nothing below or left of s
  CHECK_FALSE(map.at(3, 12));
  CHECK_FALSE(map.at(4, 11));
  // Omega1 points are never reached
  for (std::size_t i = 0; i < ax.count(); ++i)
    for (std::size_t k = 0; k < ax.count(); ++k)
      if (classify_omega(sym2, {ax.at(i), ax.at(k)}) == OmegaTag::Omega1) CHECK_FALSE(map.at(i, k));
}

TEST_CASE("on the R1 axis everything to the right is reachable") {
  const GridAxis a1{0.0, 2.0, 0.1}, a2{0.0, 0.0, 0.1};
  const auto map = reachable_set_l2(sym2, {0.3, 0.0}, a1, a2);
  for (std::size_t i = 3; i < a1.count(); ++i) CHECK(map.at(i, 0));
}

TEST_CASE("parallel_for writes by index") {
  std::vector<int> v(1000, 0);
  parallel_for(v.size(), [&](std::size_t k) { v[k] = static_cast<int>(k) * 2; }, 4);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == static_cast<int>(k) * 2);
}
