#pragma once

#include <array>
#include <string>

#include "ceo/core_model.hpp"

namespace ceo {

enum class InversionMethod { closed_form_l1, closed_form_l2, bisection };
std::string to_string(InversionMethod m);

struct InversionResult {
  NoiseAllocation r_star;
  double d_star = 0.0;
  InversionMethod method = InversionMethod::bisection;
  double residuals = 0.0;  // max of the precision, sum-rate and membership violations
  int branch = 0;          // L = 2 closed form: 1, 2 or 3
};

enum class OmegaTag { Omega1, Omega2, Omega3, Boundary12, Boundary13, Boundary23 };
std::string to_string(OmegaTag t);

struct TildeParams {
  int L_tilde = 1;
  double D_tilde = 0.0;
  std::array<double, 2> r_tilde{0.0, 0.0};  // original encoder labels
};

// min D with R in R(D); bisection on t = 1/D with an interior-point feasibility test
double d_star(const CeoInstance& inst, const RateVector& R);
// exists r >= 0 with precision(r) >= t and R(A) >= f_{1/t}(A, r) for all A
bool feasible_at(const CeoInstance& inst, const RateVector& R, double t);

InversionResult r_star(const CeoInstance& inst, const RateVector& R);
InversionResult r_star_general(const CeoInstance& inst, const RateVector& R);
InversionResult r_star_l1(const CeoInstance& inst, const RateVector& R);
InversionResult r_star_l2(const CeoInstance& inst, const RateVector& R);

TildeParams tilde_params(const CeoInstance& inst, double sum_rate);
// R_i - threshold_i(r_tilde_i) for i = 1, 2
std::array<double, 2> omega_margins(const CeoInstance& inst, const RateVector& R);
OmegaTag classify_omega(const CeoInstance& inst, const RateVector& R, double tol = 1e-7);

// max violation of precision(r) = 1/D, sum-rate tightness and membership
double inversion_residual(const CeoInstance& inst, const RateVector& R, const NoiseAllocation& r,
                          double d);

}  // namespace ceo
