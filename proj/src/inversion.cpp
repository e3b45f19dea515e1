#include "ceo/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ceo/barrier.hpp"
#include "ceo/errors.hpp"
#include "ceo/polymatroid.hpp"

namespace ceo {

std::string to_string(InversionMethod m) {
  switch (m) {
    case InversionMethod::closed_form_l1: return "closed_form_l1";
    case InversionMethod::closed_form_l2: return "closed_form_l2";
    case InversionMethod::bisection: return "bisection";
  }
  return "?";
}

std::string to_string(OmegaTag t) {
  switch (t) {
    case OmegaTag::Omega1: return "OMEGA1";
    case OmegaTag::Omega2: return "OMEGA2";
    case OmegaTag::Omega3: return "OMEGA3";
    case OmegaTag::Boundary12: return "BOUNDARY_12";
    case OmegaTag::Boundary13: return "BOUNDARY_13";
    case OmegaTag::Boundary23: return "BOUNDARY_23";
  }
  return "?";
}

namespace {

RateVector clamp_rates(const CeoInstance& inst, const RateVector& R) {
  check_rates(inst, R);
  RateVector out(R);
  for (double& v : out) v = std::min(v, kCap);
  return out;
}

// Encoders with R_i = 0 get r_i = 0 and drop out; R_i = CAP gets r_i = CAP and every
// constraint through it is void. What remains is a problem over `var`.
struct Reduced {
  const CeoInstance* inst = nullptr;
  std::vector<std::size_t> var;
  std::vector<double> sn;
  std::vector<double> RA;  // R summed over masks of var
  double base = 0.0;       // 1/sigma_x2 plus saturated encoders
  NoiseAllocation fixed;

  std::size_t n() const { return var.size(); }
  double t_max() const {
    double t = base;
    for (double s : sn) t += 1.0 / s;
    return t;
  }
};

Reduced reduce(const CeoInstance& inst, const RateVector& R) {
  Reduced red;
  red.inst = &inst;
  red.base = 1.0 / inst.sigma_x2;
  red.fixed.assign(inst.L(), 0.0);
  std::vector<double> rv;
  for (std::size_t i = 0; i < inst.L(); ++i) {
    if (R[i] >= kCap) {
      red.fixed[i] = kCap;
      red.base += 1.0 / inst.sigma_n2[i];
    } else if (R[i] > 0.0) {
      red.var.push_back(i);
      red.sn.push_back(inst.sigma_n2[i]);
      rv.push_back(R[i]);
    }
  }
  const std::size_t n = red.var.size();
  red.RA.assign(std::size_t{1} << n, 0.0);
  for (std::uint32_t b = 1; b < (1u << n); ++b)
    for (std::size_t k = 0; k < n; ++k)
      if ((b >> k) & 1u) red.RA[b] += rv[k];
  return red;
}

// max-violation program in (r, s): minimize s subject to
//   g_0 = 0.5 ln t - 0.5 ln P(r) <= s
//   g_A = 0.5 ln t - 0.5 ln P_{A^c}(r) + r(A) - R(A) <= s
//   r >= 0
BarrierProblem phase_one(const Reduced& red, double t) {
  const int n = static_cast<int>(red.n());
  const int nsets = 1 << n;  // index 0 is the precision constraint, masks 1..2^n-1
  BarrierProblem p;
  p.n = n + 1;
  p.m = nsets + n;
  p.objective = [n](const Vec& x, Vec* g, Mat* H) {
    if (g) {
      g->setZero(n + 1);
      (*g)(n) = 1.0;
    }
    if (H) H->setZero(n + 1, n + 1);
    return x(n);
  };
  const double half_ln_t = 0.5 * std::log(t);
  p.constraints = [&red, n, nsets, half_ln_t](const Vec& x, Vec& c, std::vector<Vec>* grads,
                                              std::vector<Mat>* hess) {
    double q[kMaxEncoders], dq[kMaxEncoders], ddq[kMaxEncoders];
    for (int k = 0; k < n; ++k) {
      const double e = std::exp(-2.0 * x(k));
      q[k] = -std::expm1(-2.0 * x(k)) / red.sn[k];
      dq[k] = 2.0 * e / red.sn[k];
      ddq[k] = -4.0 * e / red.sn[k];
    }
    const double s = x(n);
    const std::uint32_t full = (1u << n) - 1u;
    for (int j = 0; j < nsets; ++j) {
      // j = 0: precision over everything; otherwise A = j, complement = full ^ j
      const std::uint32_t A = static_cast<std::uint32_t>(j);
      const std::uint32_t comp = j == 0 ? full : (full ^ A);
      double Q = red.base, ra = 0.0;
      for (int k = 0; k < n; ++k) {
        if ((comp >> k) & 1u) Q += q[k];
        if ((A >> k) & 1u) ra += x(k);
      }
      c(j) = half_ln_t - 0.5 * std::log(Q) + (j == 0 ? 0.0 : ra - red.RA[A]) - s;
      if (grads) {
        Vec& g = (*grads)[j];
        g.setZero(n + 1);
        g(n) = -1.0;
        for (int k = 0; k < n; ++k) {
          if ((comp >> k) & 1u) g(k) = -0.5 * dq[k] / Q;
          if (j != 0 && ((A >> k) & 1u)) g(k) = 1.0;
        }
        Mat& H = (*hess)[j];
        H.setZero(n + 1, n + 1);
        for (int a = 0; a < n; ++a) {
          if (!((comp >> a) & 1u)) continue;
          for (int b = 0; b < n; ++b)
            if ((comp >> b) & 1u) H(a, b) = 0.5 * dq[a] * dq[b] / (Q * Q);
          H(a, a) -= 0.5 * ddq[a] / Q;
        }
      }
    }
    for (int k = 0; k < n; ++k) {
      c(nsets + k) = -x(k);
      if (grads) {
        (*grads)[nsets + k].setZero(n + 1);
        (*grads)[nsets + k](k) = -1.0;
        (*hess)[nsets + k].setZero(n + 1, n + 1);
      }
    }
  };
  return p;
}

Vec phase_one_start(const Reduced& red, const BarrierProblem& p) {
  const int n = static_cast<int>(red.n());
  Vec x(n + 1);
  for (int k = 0; k < n; ++k) x(k) = 0.1;
  x(n) = 0.0;
  Vec c(p.m);
  p.constraints(x, c, nullptr, nullptr);
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < (1 << n); ++j) worst = std::max(worst, c(j));
  x(n) = worst + 1.0;
  return x;
}

// returns the minimal max-violation point; sign of x(n) decides feasibility
BarrierResult solve_phase_one(const Reduced& red, double t, bool early_exit) {
  BarrierProblem p = phase_one(red, t);
  BarrierOptions opt;
  opt.gap_tol = 1e-13;
  if (early_exit) {
    opt.stop_below = 0.0;
    opt.stop_above = 0.0;
  }
  return barrier_minimize(p, phase_one_start(red, p), opt);
}

bool feasible_reduced(const Reduced& red, double t) {
  if (red.n() == 0) return t <= red.base;
  return solve_phase_one(red, t, true).f <= 0.0;
}

double bisect_t(const Reduced& red) {
  double lo = red.base, hi = red.t_max();
  while (hi - lo > 1e-8 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_reduced(red, mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

bool feasible_at(const CeoInstance& inst, const RateVector& R, double t) {
  inst.validate();
  const Reduced red = reduce(inst, clamp_rates(inst, R));
  return feasible_reduced(red, t);
}

double d_star(const CeoInstance& inst, const RateVector& R) {
  inst.validate();
  const Reduced red = reduce(inst, clamp_rates(inst, R));
  if (red.n() == 0) return 1.0 / red.base;
  return 1.0 / bisect_t(red);
}

double inversion_residual(const CeoInstance& inst, const RateVector& R, const NoiseAllocation& r,
                          double d) {
  const RateVector Rc = clamp_rates(inst, R);
  const double P = precision(inst, r);
  double res = std::abs(P * d - 1.0);
  // sum-rate tightness over encoders that are not saturated
  double cond = 1.0 / inst.sigma_x2, lhs = 0.0, rs = 0.0;
  for (std::size_t i = 0; i < inst.L(); ++i) {
    if (is_cap(Rc[i])) {
      cond += 1.0 / inst.sigma_n2[i];
    } else {
      lhs += Rc[i];
      rs += r[i];
    }
  }
  res = std::max(res, std::abs(lhs - (0.5 * std::log(1.0 / (d * cond)) + rs)));
  res = std::max(res, std::max(0.0, -region_slack(inst, r, Rc)));
  return res;
}

namespace {

InversionResult finish(const CeoInstance& inst, const RateVector& R, InversionResult out) {
  out.residuals = inversion_residual(inst, R, out.r_star, out.d_star);
  if (!(out.residuals <= 1e-5)) {
    std::ostringstream os;
    os << "r_star (" << to_string(out.method) << "): residual " << out.residuals
       << " above 1e-5";
    throw ConvergenceError(os.str());
  }
  return out;
}

double l1_closed(double sigma_x2, double sigma_n2, double R) {
  if (R <= 0.0) return 0.0;
  if (R >= kCap) return kCap;
  const double a = sigma_x2 / sigma_n2;
  return std::min(kCap, 0.5 * std::log((std::exp(2.0 * R) + a) / (1.0 + a)));
}

}  // namespace

InversionResult r_star_general(const CeoInstance& inst, const RateVector& R) {
  inst.validate();
  const RateVector Rc = clamp_rates(inst, R);
  const Reduced red = reduce(inst, Rc);
  InversionResult out;
  out.method = InversionMethod::bisection;
  out.r_star = red.fixed;
  if (red.n() == 0) {
    out.d_star = 1.0 / red.base;
    return finish(inst, Rc, out);
  }
  const double t = bisect_t(red);
  const BarrierResult br = solve_phase_one(red, t, false);
  for (std::size_t k = 0; k < red.n(); ++k) out.r_star[red.var[k]] = std::max(0.0, br.x(k));
  out.d_star = 1.0 / t;
  return finish(inst, Rc, out);
}

InversionResult r_star_l1(const CeoInstance& inst, const RateVector& R) {
  inst.validate();
  if (inst.L() != 1) throw ArgumentError("r_star_l1 needs L = 1");
  const RateVector Rc = clamp_rates(inst, R);
  InversionResult out;
  out.method = InversionMethod::closed_form_l1;
  out.r_star = {l1_closed(inst.sigma_x2, inst.sigma_n2[0], Rc[0])};
  out.d_star = distortion(inst, out.r_star);
  return finish(inst, Rc, out);
}

TildeParams tilde_params(const CeoInstance& inst, double sum_rate) {
  inst.validate();
  if (inst.L() != 2) throw ArgumentError("tilde_params needs L = 2");
  if (std::isnan(sum_rate) || sum_rate < 0.0) throw ArgumentError("sum_rate must be >= 0");
  const bool swap = inst.sigma_n2[1] < inst.sigma_n2[0];
  const double sa = inst.sigma_n2[swap ? 1 : 0], sb = inst.sigma_n2[swap ? 0 : 1];
  const double px = 1.0 / inst.sigma_x2;
  const double A1 = px + 1.0 / sa, A2 = A1 + 1.0 / sb;

  // v = 1/D_min(2) - 1/D; the sum rate decreases in v
  auto k_of = [&](double v) { return (2.0 / sb - v) >= 0.0 ? 2 : 1; };
  auto sum_of = [&](double v) {
    const double u = A2 - v;
    if (k_of(v) == 2)
      return 0.5 * (std::log(u / px) + std::log(2.0 / (sa * v)) + std::log(2.0 / (sb * v)));
    return 0.5 * (std::log(u / px) + std::log(1.0 / (sa * (v - 1.0 / sb))));
  };

  TildeParams tp;
  const double v_max = A2 - px;
  double v = v_max;
  if (sum_rate > 0.0) {
    double hi = std::log(v_max), lo = hi - 1.0;
    while (sum_of(std::exp(lo)) < sum_rate) lo -= 2.0 * (hi - lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      if (sum_of(std::exp(mid)) > sum_rate)
        lo = mid;
      else
        hi = mid;
    }
    v = std::exp(0.5 * (lo + hi));
  }
  tp.L_tilde = k_of(v);
  tp.D_tilde = 1.0 / (A2 - v);
  double ra = 0.0, rb = 0.0;
  if (sum_rate > 0.0) {
    if (tp.L_tilde == 2) {
      ra = 0.5 * std::log(2.0 / (sa * v));
      rb = 0.5 * std::log(2.0 / (sb * v));
    } else {
      ra = 0.5 * std::log(1.0 / (sa * (v - 1.0 / sb)));
    }
  }
  ra = std::max(0.0, ra);
  rb = std::max(0.0, rb);
  tp.r_tilde = swap ? std::array<double, 2>{rb, ra} : std::array<double, 2>{ra, rb};
  return tp;
}

namespace {

double threshold(const CeoInstance& inst, std::size_t i, double r) {
  return 0.5 * std::log(1.0 / inst.sigma_x2 + precision_term(inst.sigma_n2[i], r)) +
         0.5 * std::log(inst.sigma_x2) + r;
}

}  // namespace

std::array<double, 2> omega_margins(const CeoInstance& inst, const RateVector& R) {
  inst.validate();
  if (inst.L() != 2) throw ArgumentError("Omega regions need L = 2");
  check_rates(inst, R);
  const TildeParams tp = tilde_params(inst, R[0] + R[1]);
  return {R[0] - threshold(inst, 0, tp.r_tilde[0]), R[1] - threshold(inst, 1, tp.r_tilde[1])};
}

OmegaTag classify_omega(const CeoInstance& inst, const RateVector& R, double tol) {
  const auto d = omega_margins(inst, R);
  const bool on1 = std::abs(d[0]) <= tol, on2 = std::abs(d[1]) <= tol;
  if (on1 && on2) return OmegaTag::Boundary12;
  if (d[0] > tol) return OmegaTag::Omega1;
  if (d[1] > tol) return OmegaTag::Omega2;
  if (on1) return OmegaTag::Boundary13;
  if (on2) return OmegaTag::Boundary23;
  return OmegaTag::Omega3;
}

InversionResult r_star_l2(const CeoInstance& inst, const RateVector& R) {
  inst.validate();
  if (inst.L() != 2) throw ArgumentError("r_star_l2 needs L = 2");
  check_rates(inst, R);
  if (R[0] >= kCap || R[1] >= kCap) return r_star_general(inst, R);

  InversionResult out;
  out.method = InversionMethod::closed_form_l2;
  const double S = R[0] + R[1];
  const TildeParams tp = tilde_params(inst, S);
  const auto d = omega_margins(inst, R);
  out.r_star.assign(2, 0.0);

  // j is encoded first at full rate R_j, the other one fills the sum rate
  auto vertex_branch = [&](std::size_t j) {
    const std::size_t o = 1 - j;
    const double rj = l1_closed(inst.sigma_x2, inst.sigma_n2[j], R[j]);
    const double c = 1.0 + inst.sigma_x2 * precision_term(inst.sigma_n2[j], rj);
    const double b = inst.sigma_x2 / inst.sigma_n2[o];
    const double E = std::exp(2.0 * std::min(S - rj, kCap));
    out.r_star[j] = rj;
    out.r_star[o] = std::clamp(0.5 * std::log((E + b) / (c + b)), 0.0, kCap);
  };
  if (d[0] >= 0.0) {
    out.branch = 1;
    vertex_branch(0);
  } else if (d[1] >= 0.0) {
    out.branch = 2;
    vertex_branch(1);
  } else {
    out.branch = 3;
    out.r_star = {tp.r_tilde[0], tp.r_tilde[1]};
  }
  out.d_star = distortion(inst, out.r_star);
  return finish(inst, R, out);
}

InversionResult r_star(const CeoInstance& inst, const RateVector& R) {
  inst.validate();
  check_rates(inst, R);
  if (inst.L() == 1) return r_star_l1(inst, R);
  if (inst.L() == 2) return r_star_l2(inst, R);
  return r_star_general(inst, R);
}

}  // namespace ceo
