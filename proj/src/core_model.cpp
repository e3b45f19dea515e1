#include "ceo/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ceo/errors.hpp"

namespace ceo {

CeoInstance CeoInstance::make(double sigma_x2, std::vector<double> sigma_n2) {
  CeoInstance inst{sigma_x2, std::move(sigma_n2)};
  inst.validate();
  return inst;
}

void CeoInstance::validate() const {
  if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2))
    throw ArgumentError("sigma_x2 must be positive and finite");
  if (sigma_n2.empty() || sigma_n2.size() > kMaxEncoders)
    throw ArgumentError("encoder count must be in [1, 16]");
  for (double v : sigma_n2)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ArgumentError("sigma_n2 entries must be positive and finite");
}

bool is_cap(double r) { return r >= kCap; }

double exp_m2(double r) { return is_cap(r) ? 0.0 : std::exp(-2.0 * r); }

double precision_term(double sigma_n2, double r) {
  if (is_cap(r)) return 1.0 / sigma_n2;
  return -std::expm1(-2.0 * r) / sigma_n2;
}

double r_from_channel_noise(const CeoInstance& inst, std::size_t i, double sigma_t2) {
  if (i >= inst.L()) throw ArgumentError("encoder index out of range");
  if (std::isnan(sigma_t2) || sigma_t2 < 0.0) throw ArgumentError("sigma_t2 must be >= 0");
  if (std::isinf(sigma_t2)) return 0.0;
  if (sigma_t2 == 0.0) return kCap;
  return std::min(kCap, 0.5 * std::log1p(inst.sigma_n2[i] / sigma_t2));
}

double channel_noise_from_r(const CeoInstance& inst, std::size_t i, double r) {
  if (i >= inst.L()) throw ArgumentError("encoder index out of range");
  if (std::isnan(r) || r < 0.0) throw ArgumentError("r must be >= 0");
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  if (is_cap(r)) return 0.0;
  return inst.sigma_n2[i] / std::expm1(2.0 * r);
}

void check_allocation(const CeoInstance& inst, const NoiseAllocation& r) {
  if (r.size() != inst.L())
    throw ArgumentError("allocation length " + std::to_string(r.size()) + " != L = " +
                        std::to_string(inst.L()));
  for (double v : r)
    if (std::isnan(v) || v < 0.0) throw ArgumentError("allocation entries must be >= 0");
}

void check_rates(const CeoInstance& inst, const RateVector& R) {
  if (R.size() != inst.L())
    throw ArgumentError("rate vector length " + std::to_string(R.size()) + " != L = " +
                        std::to_string(inst.L()));
  for (double v : R)
    if (std::isnan(v) || v < 0.0) throw ArgumentError("rates must be >= 0");
}

double precision(const CeoInstance& inst, const NoiseAllocation& r) {
  check_allocation(inst, r);
  double p = 1.0 / inst.sigma_x2;
  for (std::size_t i = 0; i < r.size(); ++i) p += precision_term(inst.sigma_n2[i], r[i]);
  return p;
}

double distortion(const CeoInstance& inst, const NoiseAllocation& r) {
  return 1.0 / precision(inst, r);
}

double d_min(const CeoInstance& inst, std::size_t k) {
  if (k < 1 || k > inst.L())
    throw ArgumentError("d_min: k = " + std::to_string(k) + " outside [1, L]");
  std::vector<double> s = inst.sigma_n2;
  std::sort(s.begin(), s.end());
  double p = 1.0 / inst.sigma_x2;
  for (std::size_t i = 0; i < k; ++i) p += 1.0 / s[i];
  return 1.0 / p;
}

bool in_feasible_set(const CeoInstance& inst, const NoiseAllocation& r, double D) {
  if (!(D > 0.0)) throw ArgumentError("D must be positive");
  return precision(inst, r) >= 1.0 / D - kTolEq;
}

}  // namespace ceo
