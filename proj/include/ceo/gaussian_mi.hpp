#pragma once

#include <cstddef>
#include <vector>

#include "ceo/core_model.hpp"

namespace ceo {

// W = Y_encoder + T, Var(T) = sigma_t2_total. Stage 1 = coarse, 2 = fine.
struct Description {
  std::size_t encoder = 0;
  double sigma_t2_total = 0.0;
  int stage = 2;

  bool operator==(const Description&) const = default;
};

Description fine_description(const CeoInstance& inst, std::size_t i, double r);

// I(Y_e; W_target | decoded [, X]) in nats, e = target.encoder.
// Conditioning reduces to the finest decoded description per encoder; a decoded
// description of the target's own encoder that is at least as fine gives 0.
double gaussian_mi(const CeoInstance& inst, const Description& target,
                   const std::vector<Description>& decoded, bool given_x = false);

// Var(X | descriptions)
double conditional_source_variance(const CeoInstance& inst,
                                   const std::vector<Description>& decoded);

}  // namespace ceo
