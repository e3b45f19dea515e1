#pragma once

#include <cstdint>
#include <vector>

#include "ceo/core_model.hpp"

namespace ceo {

struct SimConfig {
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 42;
  std::uint64_t shard_size = 1u << 16;  // the shard plan fixes the streams, not the thread count
  unsigned threads = 0;
};

struct SimReport {
  std::vector<double> empirical_mse;
  std::vector<double> analytic_d;
  std::vector<double> std_error;
  std::vector<double> z_scores;
};

SimReport simulate_distortion(const CeoInstance& inst, const NoiseAllocation& r, const SimConfig& cfg);

// same channel as simulate_distortion but with an arbitrary linear estimator sum_i c_i W_i
SimReport simulate_linear(const CeoInstance& inst, const NoiseAllocation& r,
                          const std::vector<double>& coefficients, const SimConfig& cfg);

std::vector<double> mmse_coefficients(const CeoInstance& inst, const NoiseAllocation& r);

SimReport simulate_refinement(const CeoInstance& inst, const std::vector<NoiseAllocation>& r_chain,
                              const SimConfig& cfg);

}  // namespace ceo
