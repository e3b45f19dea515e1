#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ceo/core_model.hpp"
#include "ceo/polymatroid.hpp"

namespace ceo {

inline constexpr double kRefineTol = 1e-6;

struct RefinementQuery {
  std::vector<RateVector> stages;  // nondecreasing; stage 0 is the zero vector
};

struct StageSlack {
  SubsetMask A;
  double slack = 0.0;  // lhs - rhs, nats
};

struct RefinementReport {
  bool feasible = true;
  std::vector<std::vector<StageSlack>> per_stage;  // [j][k], every nonempty A
  std::size_t worst_stage = 0;                     // 0-based
  SubsetMask worst_set;
  double worst_slack = 0.0;
  std::vector<NoiseAllocation> r_chain;  // r*(R_j), j = 1..M
  std::vector<double> d_chain;
  bool r_chain_monotone = true;  // reported, not required
};

RefinementReport check_refinement(const CeoInstance& inst, const RefinementQuery& q,
                                  double tol = kRefineTol);
bool pairwise_equivalence(const CeoInstance& inst, const RefinementQuery& q,
                          double tol = kRefineTol);
// R_next - R_prev on the dominant face of the conditional region of W*(R_next) given W*(R_prev)
bool dominant_face_form(const CeoInstance& inst, const RateVector& R_prev,
                        const RateVector& R_next, double tol = kRefineTol);

struct GridAxis {
  double min = 0.0, max = 0.0, step = 0.0;
  std::size_t count() const;
  double at(std::size_t k) const;
};

struct ReachableMap {
  GridAxis ax1, ax2;
  std::vector<char> reachable;  // row-major over (R1, R2), R2 fastest
  bool at(std::size_t i1, std::size_t i2) const { return reachable[i1 * ax2.count() + i2]; }
};

ReachableMap reachable_set_l2(const CeoInstance& inst, const RateVector& R_from,
                              const GridAxis& a1, const GridAxis& a2, double tol = kRefineTol);

// fn(k) for k in [0, n), results written by index so the order of threads never matters
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace ceo
