#pragma once

#include <string>
#include <vector>

#include "ceo/core_model.hpp"
#include "ceo/gaussian_mi.hpp"

namespace ceo {

struct WzStep {
  Description description;
  double rate = 0.0;
  std::vector<Description> side_info;  // everything decoded before this step
};

struct Schedule {
  std::vector<WzStep> steps;  // decode order
  int total_steps = 0;
};

struct ScheduleCheck {
  bool ok = true;
  std::vector<std::string> diagnostics;
};

Schedule build_schedule(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                        double tol = kTolEq);
Schedule schedule_for_face(const CeoInstance& inst, const NoiseAllocation& r,
                           const RateVector& R, double tol = kTolEq);

// r, when given, is the allocation the final descriptions must realize
ScheduleCheck validate_schedule(const CeoInstance& inst, const Schedule& schedule,
                                const RateVector& R, double tol = kTolEq,
                                const NoiseAllocation* r = nullptr);

int split_count(const Schedule& schedule);

}  // namespace ceo
