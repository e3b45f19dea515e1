#pragma once

#include <vector>

#include "ceo/core_model.hpp"
#include "ceo/polymatroid.hpp"

namespace ceo {

struct HyperplaneResult {
  std::vector<double> alpha;  // unit l2 norm
  double nu = 0.0;
  NoiseAllocation r_star;
  double phi = 0.0;
  RateVector contact_vertex;
  Permutation pi_star;
};

struct KktResidual {
  double stationarity = 0.0;   // max |alpha_k - E_k| over r_k > 0
  double complementary = 0.0;  // max (E_k - alpha_k)+ over r_k = 0
};

Permutation alpha_order(const std::vector<double>& alpha);
std::vector<double> normalize_alpha(const std::vector<double>& alpha, std::size_t L);

HyperplaneResult support_value(const CeoInstance& inst, const std::vector<double>& alpha,
                               double D);

// sum_k (a_pi(k) - a_pi(k+1)) f({pi(1..k)}, r)
double vertex_expansion(const CeoInstance& inst, const NoiseAllocation& r,
                        const std::vector<double>& alpha, const Permutation& pi);

KktResidual kkt_residual(const CeoInstance& inst, const HyperplaneResult& h);

// grid oracle for L <= 3: every coordinate in turn is set to make the distortion constraint
// tight while the others run over {0, step, ..., r_cap, CAP}
double brute_force_phi(const CeoInstance& inst, const std::vector<double>& alpha, double D,
                       double grid_step, double r_cap = 6.0);

}  // namespace ceo
