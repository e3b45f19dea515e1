#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ceo/core_model.hpp"

namespace ceo {

struct SubsetMask {
  std::uint32_t bits = 0;

  static SubsetMask full(std::size_t L) { return {static_cast<std::uint32_t>((1u << L) - 1u)}; }
  static SubsetMask single(std::size_t i) { return {1u << i}; }

  bool contains(std::size_t i) const { return (bits >> i) & 1u; }
  bool empty() const { return bits == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits)); }
  SubsetMask complement(std::size_t L) const { return {full(L).bits & ~bits}; }
  bool subset_of(SubsetMask o) const { return (bits & ~o.bits) == 0; }
  std::vector<std::size_t> members() const;

  SubsetMask operator|(SubsetMask o) const { return {bits | o.bits}; }
  SubsetMask operator&(SubsetMask o) const { return {bits & o.bits}; }
  bool operator==(const SubsetMask&) const = default;
};

// pi[k] is the encoder in position k+1; pi[0] is decoded last
using Permutation = std::vector<std::size_t>;

struct FaceDescriptor {
  std::vector<SubsetMask> chain;   // A_1 < ... < A_k, proper tight sets
  std::vector<SubsetMask> blocks;  // A_1, A_2\A_1, ..., rest; vacuous encoders sit in the last
  SubsetMask vacuous;              // r_i = 0 encoders, projected out
  int dimension = 0;
};

double rank_f(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask A);
double rank_fD(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask A, double D);

// sum of R over A; +inf if some member is at CAP
double rate_sum(const RateVector& R, SubsetMask A);

bool region_contains(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                     double tol = kTolEq);
// min over nonempty A of R(A) - f(A); witness in *where
double region_slack(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                    SubsetMask* where = nullptr);

RateVector vertex(const CeoInstance& inst, const NoiseAllocation& r, const Permutation& pi);
std::vector<Permutation> all_permutations(std::size_t L);
void check_permutation(const Permutation& pi, std::size_t L);

bool on_dominant_face(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                      double tol = kTolEq);

FaceDescriptor identify_face(const CeoInstance& inst, const NoiseAllocation& r,
                             const RateVector& R, double tol = 1e-7);

// f(S u T) + f(S n T) - f(S) - f(T), evaluated without cancellation
double supermodular_gap(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask S,
                        SubsetMask T);
bool check_supermodular(const CeoInstance& inst, const NoiseAllocation& r);

}  // namespace ceo
