#include "ceo/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "ceo/errors.hpp"
#include "ceo/gaussian_mi.hpp"
#include "ceo/inversion.hpp"

namespace ceo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct StagePoint {
  RateVector R;
  NoiseAllocation r;
  double d = 0.0;
};

StagePoint origin(const CeoInstance& inst) {
  return {RateVector(inst.L(), 0.0), NoiseAllocation(inst.L(), 0.0), inst.sigma_x2};
}

StagePoint solve_stage(const CeoInstance& inst, const RateVector& R, std::size_t j) {
  try {
    const InversionResult res = r_star(inst, R);
    return {R, res.r_star, res.d_star};
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("stage " + std::to_string(j + 1) + ": " + e.what());
  }
}

// increment b - a where both may sit at CAP
double increment(double a, double b) {
  if (is_cap(b)) return is_cap(a) ? 0.0 : kInf;
  return b - a;
}

double stage_slack(const CeoInstance& inst, const StagePoint& p, const StagePoint& n, SubsetMask A) {
  double lhs = 0.0, dr = 0.0;
  double mixed = 1.0 / inst.sigma_x2;
  for (std::size_t i = 0; i < inst.L(); ++i) {
    if (A.contains(i)) {
      lhs += increment(p.R[i], n.R[i]);
      dr += increment(p.r[i], n.r[i]);
      mixed += precision_term(inst.sigma_n2[i], p.r[i]);
    } else {
      mixed += precision_term(inst.sigma_n2[i], n.r[i]);
    }
  }
  if (std::isinf(lhs)) return kInf;
  if (std::isinf(dr)) return -kInf;
  const double rhs = -0.5 * std::log(n.d) - 0.5 * std::log(mixed) + dr;
  return lhs - rhs;
}

void check_nondecreasing(const CeoInstance& inst, const std::vector<RateVector>& stages) {
  for (std::size_t j = 0; j < stages.size(); ++j) {
    check_rates(inst, stages[j]);
    if (j == 0) continue;
    for (std::size_t i = 0; i < inst.L(); ++i)
      if (stages[j][i] < stages[j - 1][i])
        throw ArgumentError("refinement stages must be nondecreasing (stage " +
                            std::to_string(j + 1) + ", encoder " + std::to_string(i + 1) + ")");
  }
}

RefinementReport evaluate(const CeoInstance& inst, const std::vector<StagePoint>& pts, double tol) {
  RefinementReport rep;
  rep.worst_slack = kInf;
  const std::size_t L = inst.L();
  const std::uint32_t nsets = 1u << L;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    std::vector<StageSlack> row;
    for (std::uint32_t b = 1; b < nsets; ++b) {
      const double s = stage_slack(inst, pts[j - 1], pts[j], SubsetMask{b});
      row.push_back({SubsetMask{b}, s});
      if (s < rep.worst_slack) {
        rep.worst_slack = s;
        rep.worst_stage = j - 1;
        rep.worst_set = SubsetMask{b};
      }
    }
    rep.per_stage.push_back(std::move(row));
    rep.r_chain.push_back(pts[j].r);
    rep.d_chain.push_back(pts[j].d);
    for (std::size_t i = 0; i < L; ++i)
      if (pts[j].r[i] < pts[j - 1].r[i] - 1e-7) rep.r_chain_monotone = false;
  }
  rep.feasible = rep.worst_slack >= -tol;
  return rep;
}

}  // namespace

RefinementReport check_refinement(const CeoInstance& inst, const RefinementQuery& q, double tol) {
  inst.validate();
  if (q.stages.empty()) throw ArgumentError("refinement query needs at least one stage");
  check_nondecreasing(inst, q.stages);
  std::vector<StagePoint> pts{origin(inst)};
  for (std::size_t j = 0; j < q.stages.size(); ++j) pts.push_back(solve_stage(inst, q.stages[j], j));
  return evaluate(inst, pts, tol);
}

bool pairwise_equivalence(const CeoInstance& inst, const RefinementQuery& q, double tol) {
  inst.validate();
  check_nondecreasing(inst, q.stages);
  std::vector<StagePoint> pts{origin(inst)};
  for (std::size_t j = 0; j < q.stages.size(); ++j) pts.push_back(solve_stage(inst, q.stages[j], j));
  const bool whole = evaluate(inst, pts, tol).feasible;
  bool parts = true;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    std::vector<StagePoint> two{origin(inst)};
    if (j > 1) two.push_back(pts[j - 1]);
    two.push_back(pts[j]);
    parts = parts && evaluate(inst, two, tol).feasible;
  }
  return whole == parts;
}

bool dominant_face_form(const CeoInstance& inst, const RateVector& R_prev, const RateVector& R_next,
                        double tol) {
  inst.validate();
  check_nondecreasing(inst, {R_prev, R_next});
  const std::size_t L = inst.L();
  const NoiseAllocation rp = r_star(inst, R_prev).r_star;
  const NoiseAllocation rn = r_star(inst, R_next).r_star;
  std::vector<Description> prev(L), next(L);
  for (std::size_t i = 0; i < L; ++i) {
    prev[i] = fine_description(inst, i, rp[i]);
    prev[i].stage = 1;
    next[i] = fine_description(inst, i, rn[i]);
  }
  auto add = [&](std::vector<Description>& z, const NoiseAllocation& r,
                 const std::vector<Description>& src, std::size_t i) {
    if (r[i] > 0.0) z.push_back(src[i]);
  };

  const SubsetMask full = SubsetMask::full(L);
  for (std::uint32_t b = 1; b <= full.bits; ++b) {
    const SubsetMask A{b};
    double dR = 0.0;
    for (std::size_t i : A.members()) dR += increment(R_prev[i], R_next[i]);
    std::vector<Description> z;
    for (std::size_t i = 0; i < L; ++i) {
      if (A.contains(i))
        add(z, rp, prev, i);
      else
        add(z, rn, next, i);
    }
    // chain rule over the members of A
    double info = 0.0;
    for (std::size_t i : A.members()) {
      if (rn[i] > 0.0) info += gaussian_mi(inst, next[i], z);
      add(z, rn, next, i);
    }
    if (std::isinf(dR)) continue;
    if (dR - info < -tol) return false;
    if (A == full && dR - info > tol) return false;
  }
  return true;
}

std::size_t GridAxis::count() const {
  if (!(step > 0.0) || max < min) throw ArgumentError("grid needs step > 0 and max >= min");
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

double GridAxis::at(std::size_t k) const { return std::min(min + static_cast<double>(k) * step, kCap); }

ReachableMap reachable_set_l2(const CeoInstance& inst, const RateVector& R_from, const GridAxis& a1,
                              const GridAxis& a2, double tol) {
  inst.validate();
  if (inst.L() != 2) throw ArgumentError("reachable set maps need L = 2");
  check_rates(inst, R_from);
  ReachableMap map{a1, a2, {}};
  const std::size_t n1 = a1.count(), n2 = a2.count();
  map.reachable.assign(n1 * n2, 0);
  const StagePoint from = solve_stage(inst, R_from, 0);
  parallel_for(n1 * n2, [&](std::size_t k) {
    RateVector to{a1.at(k / n2), a2.at(k % n2)};
    for (std::size_t i = 0; i < 2; ++i) {
      if (to[i] < R_from[i] - 1e-12) return;
      to[i] = std::max(to[i], R_from[i]);
    }
    const StagePoint next = solve_stage(inst, to, 1);
    map.reachable[k] = evaluate(inst, {origin(inst), from, next}, tol).feasible ? 1 : 0;
  });
  return map;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = t; k < n; k += threads) fn(k);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ceo
