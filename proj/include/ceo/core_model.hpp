#pragma once

#include <cstddef>
#include <vector>

namespace ceo {

// "infinite" rate, in nats. exp(-2*kCap) is treated as exactly zero.
inline constexpr double kCap = 50.0;
inline constexpr double kTolEq = 1e-9;
inline constexpr double kTolIter = 1e-6;
inline constexpr std::size_t kMaxEncoders = 16;

using NoiseAllocation = std::vector<double>;
using RateVector = std::vector<double>;

struct CeoInstance {
  double sigma_x2 = 1.0;
  std::vector<double> sigma_n2;

  std::size_t L() const { return sigma_n2.size(); }

  // throws ArgumentError on bad variances or L out of [1, 16]
  static CeoInstance make(double sigma_x2, std::vector<double> sigma_n2);
  void validate() const;
};

bool is_cap(double r);
// e^{-2r}, exactly 0 at CAP
double exp_m2(double r);
// (1 - e^{-2r}) / sigma_n2
double precision_term(double sigma_n2, double r);

double r_from_channel_noise(const CeoInstance& inst, std::size_t i, double sigma_t2);
double channel_noise_from_r(const CeoInstance& inst, std::size_t i, double r);

double precision(const CeoInstance& inst, const NoiseAllocation& r);
double distortion(const CeoInstance& inst, const NoiseAllocation& r);
double d_min(const CeoInstance& inst, std::size_t k);
bool in_feasible_set(const CeoInstance& inst, const NoiseAllocation& r, double D);

void check_allocation(const CeoInstance& inst, const NoiseAllocation& r);
void check_rates(const CeoInstance& inst, const RateVector& R);

}  // namespace ceo
