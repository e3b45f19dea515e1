#include "ceo/barrier.hpp"

#include <cmath>
#include <limits>

#include "ceo/errors.hpp"

namespace ceo {

namespace {

bool interior(const Vec& c) {
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (!(c(j) < 0.0)) return false;
  return true;
}

double phi(const BarrierProblem& p, const Vec& x, double t, bool& ok) {
  Vec c(p.m);
  p.constraints(x, c, nullptr, nullptr);
  ok = interior(c);
  if (!ok) return std::numeric_limits<double>::infinity();
  double v = t * p.objective(x, nullptr, nullptr);
  for (Eigen::Index j = 0; j < c.size(); ++j) v -= std::log(-c(j));
  return v;
}

}  // namespace

BarrierResult barrier_minimize(const BarrierProblem& p, Vec x0, const BarrierOptions& opt) {
  BarrierResult res;
  Vec c(p.m);
  p.constraints(x0, c, nullptr, nullptr);
  if (!interior(c)) throw InternalError("barrier_minimize: start point not strictly feasible");

  Vec x = std::move(x0);
  std::vector<Vec> cg(p.m, Vec::Zero(p.n));
  std::vector<Mat> ch(p.m, Mat::Zero(p.n, p.n));
  Vec g0(p.n);
  Mat H0(p.n, p.n);
  double t = opt.t0;

  while (true) {
    for (int it = 0; it < opt.max_newton; ++it) {
      p.objective(x, &g0, &H0);
      p.constraints(x, c, &cg, &ch);
      Vec g = t * g0;
      Mat H = t * H0;
      for (int j = 0; j < p.m; ++j) {
        const double inv = -1.0 / c(j);
        g += inv * cg[j];
        H += inv * ch[j];
        H.noalias() += (inv * inv) * cg[j] * cg[j].transpose();
      }
      Eigen::LDLT<Mat> ldlt(H);
      Vec dx = ldlt.solve(-g);
      if (ldlt.info() != Eigen::Success || !dx.allFinite()) break;
      const double lambda2 = -g.dot(dx);
      ++res.newton_steps;
      if (!(lambda2 > 1e-20)) break;

      bool ok = false;
      const double f_now = phi(p, x, t, ok);
      double s = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, s *= 0.5) {
        Vec xn = x + s * dx;
        const double f_new = phi(p, xn, t, ok);
        if (!ok) continue;
        // near the center the barrier value is too large to resolve the decrease
        if (lambda2 < 1e-6 || f_new <= f_now - 0.25 * s * lambda2) {
          x = std::move(xn);
          moved = true;
          break;
        }
      }
      if (!moved) break;
      if (lambda2 < 1e-14) break;
    }
    res.f = p.objective(x, nullptr, nullptr);
    res.gap = p.m / t;
    if (res.f < opt.stop_below || res.f - res.gap > opt.stop_above) break;
    if (res.gap < opt.gap_tol) {
      res.converged = true;
      break;
    }
    t *= opt.mu;
  }
  res.x = x;
  return res;
}

}  // namespace ceo
