#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

namespace ceo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// minimize f(x) subject to c_j(x) < 0, all smooth and convex
struct BarrierProblem {
  int n = 0;
  int m = 0;
  std::function<double(const Vec& x, Vec* grad, Mat* hess)> objective;
  // fills values (size m); grads/hess optional
  std::function<void(const Vec& x, Vec& values, std::vector<Vec>* grads, std::vector<Mat>* hess)>
      constraints;
};

struct BarrierOptions {
  double gap_tol = 1e-12;
  double t0 = 1.0;
  double mu = 10.0;
  int max_newton = 100;
  // stop as soon as the objective drops below this value (feasibility certificates)
  double stop_below = -std::numeric_limits<double>::infinity();
  // stop once objective - m/t exceeds this value
  double stop_above = std::numeric_limits<double>::infinity();
};

struct BarrierResult {
  Vec x;
  double f = 0.0;
  double gap = 0.0;  // m/t at exit
  int newton_steps = 0;
  bool converged = false;
};

// x0 must be strictly feasible
BarrierResult barrier_minimize(const BarrierProblem& p, Vec x0, const BarrierOptions& opt = {});

}  // namespace ceo
