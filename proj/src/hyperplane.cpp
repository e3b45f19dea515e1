#include "ceo/hyperplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ceo/errors.hpp"

namespace ceo {

std::vector<double> normalize_alpha(const std::vector<double>& alpha, std::size_t L) {
  if (alpha.size() != L) throw ArgumentError("alpha length != L");
  double n2 = 0.0;
  for (double a : alpha) {
    if (!std::isfinite(a) || a < 0.0) throw ArgumentError("alpha must be finite and >= 0");
    n2 += a * a;
  }
  if (!(n2 > 0.0)) throw ArgumentError("alpha must be nonzero");
  std::vector<double> out(alpha);
  const double n = std::sqrt(n2);
  for (double& a : out) a /= n;
  return out;
}

Permutation alpha_order(const std::vector<double>& alpha) {
  Permutation pi(alpha.size());
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  std::stable_sort(pi.begin(), pi.end(),
                   [&](std::size_t a, std::size_t b) { return alpha[a] > alpha[b]; });
  return pi;
}

double vertex_expansion(const CeoInstance& inst, const NoiseAllocation& r,
                        const std::vector<double>& alpha, const Permutation& pi) {
  const std::size_t L = inst.L();
  double phi = 0.0;
  SubsetMask prefix;
  for (std::size_t k = 0; k < L; ++k) {
    prefix = prefix | SubsetMask::single(pi[k]);
    const double c = alpha[pi[k]] - (k + 1 < L ? alpha[pi[k + 1]] : 0.0);
    if (c != 0.0) phi += c * rank_f(inst, r, prefix);
  }
  return phi;
}

namespace {

struct Recursion {
  const CeoInstance& inst;
  const std::vector<double>& a;  // normalized alpha
  const Permutation& pi;
  std::size_t m;  // positive-alpha count, a prefix of pi
  double inv_d;
  double base;  // 1/sigma_x2 + zero-alpha saturated terms

  // fills r on the positive-alpha encoders; returns precision or +inf on overshoot
  double operator()(double nu, NoiseAllocation& r) const {
    double sumq = 0.0, acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t e = pi[k];
      const double num = 2.0 * nu + acc;
      double rk = 0.0;
      if (num > 0.0) rk = std::max(0.0, 0.5 * std::log(num / (a[e] * inst.sigma_n2[e])));
      rk = std::min(rk, kCap);
      r[e] = rk;
      sumq += precision_term(inst.sigma_n2[e], rk);
      if (k + 1 < m) {
        const double c = a[e] - a[pi[k + 1]];
        if (c > 0.0) {
          const double den = inv_d - sumq;
          if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
          acc += c / den;
        }
      }
    }
    return base + sumq;
  }
};

}  // namespace

HyperplaneResult support_value(const CeoInstance& inst, const std::vector<double>& alpha,
                               double D) {
  inst.validate();
  const std::size_t L = inst.L();
  HyperplaneResult h;
  h.alpha = normalize_alpha(alpha, L);
  h.pi_star = alpha_order(h.alpha);
  if (!(D <= inst.sigma_x2)) throw ArgumentError("D exceeds sigma_x2");
  if (!(D > d_min(inst, L))) throw InfeasibleDistortion("D <= d_min(L)");

  h.r_star.assign(L, 0.0);
  if (D == inst.sigma_x2) {
    h.contact_vertex = vertex(inst, h.r_star, h.pi_star);
    return h;
  }

  std::size_t m = 0;
  double base = 1.0 / inst.sigma_x2;
  for (std::size_t k = 0; k < L; ++k) {
    const std::size_t e = h.pi_star[k];
    if (h.alpha[e] > 0.0) {
      ++m;
    } else {
      h.r_star[e] = kCap;
      base += 1.0 / inst.sigma_n2[e];
    }
  }
  const double target = 1.0 / D;
  if (base >= target) {
    h.contact_vertex = vertex(inst, h.r_star, h.pi_star);
    h.phi = 0.0;
    return h;
  }

  Recursion rec{inst, h.alpha, h.pi_star, m, target, base};
  NoiseAllocation r = h.r_star;
  // nu may be negative; at -a_max * D every numerator is <= 0 and r = 0
  double lo = -h.alpha[h.pi_star[0]] * D, hi = 1.0;
  double p_lo = rec(lo, r), p_hi = rec(hi, r);
  for (int it = 0; p_hi < target; ++it) {
    if (it > 2000) throw ConvergenceError("support_value: could not bracket nu");
    lo = hi;
    p_lo = p_hi;
    hi = 2.0 * std::abs(hi) + 1.0;
    p_hi = rec(hi, r);
    if (p_hi < p_lo) throw ConvergenceError("support_value: precision not monotone in nu");
  }
  double nu = hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double p = rec(mid, r);
    if (p < p_lo || p > p_hi) throw ConvergenceError("support_value: precision not monotone in nu");
    if (p < target) {
      lo = mid;
      p_lo = p;
    } else {
      hi = mid;
      p_hi = p;
    }
    if (std::isfinite(p) && std::abs(p - target) <= 1e-12 * target) {
      nu = mid;
      break;
    }
    nu = hi;
  }
  const double p = rec(nu, r);
  if (!std::isfinite(p) || std::abs(p - target) > 1e-9 * target)
    throw ConvergenceError("support_value: distortion equality not met");
  h.nu = nu;
  h.r_star = r;
  h.phi = vertex_expansion(inst, r, h.alpha, h.pi_star);
  h.contact_vertex = vertex(inst, r, h.pi_star);
  return h;
}

KktResidual kkt_residual(const CeoInstance& inst, const HyperplaneResult& h) {
  const std::size_t L = inst.L();
  const auto& a = h.alpha;
  const auto& pi = h.pi_star;
  const auto& r = h.r_star;
  KktResidual out;
  // tail[i] = 1/sigma_x2 + sum over positions > i
  std::vector<double> tail(L + 1, 1.0 / inst.sigma_x2);
  for (std::size_t k = L; k-- > 0;)
    tail[k] = tail[k + 1] + precision_term(inst.sigma_n2[pi[k]], r[pi[k]]);
  double acc = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const std::size_t e = pi[k];
    if (a[e] == 0.0) break;
    const double num = 2.0 * h.nu + acc;
    const double E = exp_m2(r[e]) / inst.sigma_n2[e] * num;
    if (r[e] > 0.0)
      out.stationarity = std::max(out.stationarity, std::abs(a[e] - E));
    else
      out.complementary = std::max(out.complementary, std::max(0.0, E - a[e]));
    if (k + 1 < L) acc += (a[e] - a[pi[k + 1]]) / tail[k + 1];
  }
  return out;
}

double brute_force_phi(const CeoInstance& inst, const std::vector<double>& alpha, double D,
                       double grid_step, double r_cap) {
  inst.validate();
  const std::size_t L = inst.L();
  if (L > 3) throw ArgumentError("brute_force_phi supports L <= 3 only");
  if (!(grid_step > 0.0)) throw ArgumentError("grid_step must be positive");
  if (!(D <= inst.sigma_x2)) throw ArgumentError("D exceeds sigma_x2");
  if (!(D > d_min(inst, L))) throw InfeasibleDistortion("D <= d_min(L)");
  if (D == inst.sigma_x2) return 0.0;
  const auto a = normalize_alpha(alpha, L);
  const Permutation pi = alpha_order(a);

  std::vector<double> axis;
  for (double v = 0.0; v <= r_cap + 1e-12; v += grid_step) axis.push_back(v);
  axis.push_back(kCap);

  // one coordinate is solved exactly from the precision equality, the rest run over the grid
  const double target = 1.0 / D;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t lead = 0; lead < L; ++lead) {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < L; ++i)
      if (i != lead) others.push_back(i);
    NoiseAllocation r(L, 0.0);
    std::vector<std::size_t> idx(others.size(), 0);
    while (true) {
      double p = 1.0 / inst.sigma_x2;
      for (std::size_t j = 0; j < others.size(); ++j) {
        r[others[j]] = axis[idx[j]];
        p += precision_term(inst.sigma_n2[others[j]], r[others[j]]);
      }
      const double need = (target - p) * inst.sigma_n2[lead];
      bool ok = true;
      if (need <= 0.0)
        r[lead] = 0.0;
      else if (need < 1.0)
        r[lead] = std::min(kCap, -0.5 * std::log1p(-need));
      else
        ok = false;
      if (ok) best = std::min(best, vertex_expansion(inst, r, a, pi));

      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] == axis.size()) idx[j++] = 0;
      if (j == idx.size()) break;
    }
  }
  return best;
}

}  // namespace ceo
