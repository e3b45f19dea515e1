#include "ceo/scheduler.hpp"

#include <cmath>
#include <bit>
#include <limits>
#include <optional>
#include <sstream>

#include "ceo/errors.hpp"
#include "ceo/polymatroid.hpp"

namespace ceo {

namespace {

using Order = std::vector<Description>;

std::vector<Description> with(std::vector<Description> z, const Description& d) {
  z.push_back(d);
  return z;
}

struct Builder {
  const CeoInstance& inst;
  std::vector<Description> fine;  // per encoder
  double tol;

  // I(W_B | Z, W_{A\B}) by the chain rule
  double cond_rank(const std::vector<std::size_t>& A, std::uint32_t b,
                   const std::vector<Description>& Z) const {
    std::vector<Description> z = Z;
    for (std::size_t k = 0; k < A.size(); ++k)
      if (!((b >> k) & 1u)) z.push_back(fine[A[k]]);
    double info = 0.0;
    for (std::size_t k = 0; k < A.size(); ++k) {
      if (!((b >> k) & 1u)) continue;
      info += gaussian_mi(inst, fine[A[k]], z);
      z.push_back(fine[A[k]]);
    }
    return info;
  }

  // smallest slack over proper nonempty subsets of A (bit k = A[k])
  double min_slack(const std::vector<std::size_t>& A, const std::vector<Description>& Z,
                   const std::vector<double>& target, std::uint32_t* arg = nullptr) const {
    const std::uint32_t full = (1u << A.size()) - 1u;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t b = 1; b < full; ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < A.size(); ++k)
        if ((b >> k) & 1u) sum += target[A[k]];
      const double s = sum - cond_rank(A, b, Z);
      // ties go to the smaller set
      if (s < best - 1e-15 || (arg && std::abs(s - best) <= 1e-15 &&
                                std::popcount(b) < std::popcount(*arg))) {
        best = s;
        if (arg) *arg = b;
      }
    }
    return best;
  }

  double floor_variance(std::size_t j) const {
    const double s = fine[j].sigma_t2_total;
    return s > 0.0 ? s : inst.sigma_n2[j] * std::exp(-2.0 * kCap);
  }

  // coarse description of j, decoded first, at which some constraint of the rest turns tight
  std::optional<Description> split(std::size_t j, const std::vector<std::size_t>& A,
                                   const std::vector<Description>& Z,
                                   const std::vector<double>& target) const {
    auto m = [&](double u) {
      const Description c{j, std::exp(u), 1};
      auto t = target;
      t[j] -= gaussian_mi(inst, c, Z);
      return min_slack(A, with(Z, c), t);
    };
    double lo = std::log(floor_variance(j)) + 1e-12, hi = 60.0;
    double m_lo = m(lo), m_hi = m(hi);
    if (!(m_lo < 0.0 && m_hi > 0.0)) return std::nullopt;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const double v = m(mid);
      // slacks only shrink as the coarse part gets finer
      if (v < m_lo - 1e-12 || v > m_hi + 1e-12) return std::nullopt;
      if (v > 0.0) {
        hi = mid;
        m_hi = v;
      } else {
        lo = mid;
        m_lo = v;
      }
      if (m_hi <= 1e-14) break;
    }
    return Description{j, std::exp(hi), 1};
  }

  // decode order realizing `target` on A given Z decoded earlier
  std::optional<Order> solve(const std::vector<std::size_t>& A, const std::vector<Description>& Z,
                             const std::vector<double>& target, std::vector<char> split_done) const {
    if (A.empty()) return Order{};
    if (A.size() == 1) {
      const std::size_t j = A[0];
      if (std::abs(target[j] - gaussian_mi(inst, fine[j], Z)) <= tol) return Order{fine[j]};
      return std::nullopt;
    }
    std::uint32_t tight = 0;
    const double slack = min_slack(A, Z, target, &tight);
    if (slack < -tol) return std::nullopt;
    if (slack <= tol) {
      // the tight block is decoded after the rest
      std::vector<std::size_t> first, last;
      for (std::size_t k = 0; k < A.size(); ++k) ((tight >> k) & 1u ? last : first).push_back(A[k]);
      auto head = solve(first, Z, target, split_done);
      if (!head) return std::nullopt;
      auto z = Z;
      for (std::size_t i : first) z.push_back(fine[i]);
      auto tail = solve(last, z, target, split_done);
      if (!tail) return std::nullopt;
      head->insert(head->end(), tail->begin(), tail->end());
      return head;
    }
    // relative interior: split an encoder that has no coarse part yet, ascending index
    for (std::size_t j : A) {
      if (split_done[j]) continue;
      auto c = split(j, A, Z, target);
      if (!c) continue;
      auto t2 = target;
      t2[j] -= gaussian_mi(inst, *c, Z);
      auto done = split_done;
      done[j] = 1;
      auto sub = solve(A, with(Z, *c), t2, done);
      if (!sub) continue;
      sub->insert(sub->begin(), *c);
      return sub;
    }
    return std::nullopt;
  }
};

Schedule assemble(const CeoInstance& inst, const Order& order) {
  Schedule s;
  std::vector<Description> prefix;
  for (const auto& d : order) {
    s.steps.push_back(WzStep{d, gaussian_mi(inst, d, prefix), prefix});
    prefix.push_back(d);
  }
  s.total_steps = static_cast<int>(s.steps.size());
  return s;
}

Builder make_builder(const CeoInstance& inst, const NoiseAllocation& r, double tol) {
  Builder b{inst, {}, tol};
  for (std::size_t i = 0; i < inst.L(); ++i) b.fine.push_back(fine_description(inst, i, r[i]));
  return b;
}

std::vector<std::size_t> active_encoders(const NoiseAllocation& r, SubsetMask within) {
  std::vector<std::size_t> A;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (within.contains(i) && r[i] > 0.0) A.push_back(i);
  return A;
}

void finish(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R, double tol,
            const Schedule& s) {
  const ScheduleCheck chk = validate_schedule(inst, s, R, std::max(tol, 1e-9), &r);
  if (!chk.ok) {
    std::string msg = "schedule failed validation:";
    for (const auto& d : chk.diagnostics) msg += " " + d + ";";
    throw InternalError(msg);
  }
}

}  // namespace

Schedule build_schedule(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                        double tol) {
  inst.validate();
  if (!on_dominant_face(inst, r, R, tol))
    throw ArgumentError("build_schedule: rate vector is not on the dominant face");
  const Builder b = make_builder(inst, r, tol);
  auto order = b.solve(active_encoders(r, SubsetMask::full(inst.L())), {}, R,
                       std::vector<char>(inst.L(), 0));
  if (!order) throw InternalError("build_schedule: no split candidate succeeded");
  Schedule s = assemble(inst, *order);
  finish(inst, r, R, tol, s);
  return s;
}

Schedule schedule_for_face(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                           double tol) {
  inst.validate();
  const FaceDescriptor face = identify_face(inst, r, R, std::max(tol, 1e-7));
  const Builder b = make_builder(inst, r, tol);
  // the last block (outside every tight set) is decoded first, A_1 last
  Order order;
  std::vector<Description> Z;
  for (std::size_t k = face.blocks.size(); k-- > 0;) {
    auto part = b.solve(active_encoders(r, face.blocks[k]), Z, R, std::vector<char>(inst.L(), 0));
    if (!part) throw InternalError("schedule_for_face: block could not be scheduled");
    for (const auto& d : *part) order.push_back(d);
    for (std::size_t i : active_encoders(r, face.blocks[k])) Z.push_back(b.fine[i]);
  }
  Schedule s = assemble(inst, order);
  finish(inst, r, R, tol, s);
  return s;
}

int split_count(const Schedule& schedule) {
  int n = 0;
  for (const auto& st : schedule.steps)
    if (st.description.stage == 1) ++n;
  return n;
}

ScheduleCheck validate_schedule(const CeoInstance& inst, const Schedule& schedule,
                                const RateVector& R, double tol, const NoiseAllocation* r) {
  ScheduleCheck out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.diagnostics.push_back(msg);
  };
  const std::size_t L = inst.L();
  if (R.size() != L) {
    fail("rate vector length != L");
    return out;
  }
  if (schedule.total_steps != static_cast<int>(schedule.steps.size()))
    fail("total_steps does not match the step list");
  if (schedule.steps.size() > 2 * L - 1) fail("more than 2L-1 steps");

  std::vector<Description> prefix;
  std::vector<double> sums(L, 0.0);
  std::vector<std::vector<const Description*>> per(L);
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    const WzStep& st = schedule.steps[k];
    const Description& d = st.description;
    std::ostringstream who;
    who << "step " << k + 1 << " (encoder " << d.encoder + 1 << ", stage " << d.stage << ")";
    if (d.encoder >= L) {
      fail(who.str() + ": unknown encoder");
      return out;
    }
    if (st.side_info != prefix) fail(who.str() + ": side information is not the decoded prefix");
    double again = 0.0;
    try {
      again = gaussian_mi(inst, d, prefix);
    } catch (const std::exception& e) {
      fail(who.str() + ": " + e.what());
    }
    if (!(std::abs(again - st.rate) <= tol)) {
      std::ostringstream os;
      os.precision(17);
      os << who.str() << ": stored rate " << st.rate << " but recomputed " << again;
      fail(os.str());
    }
    if (st.rate < 0.0) fail(who.str() + ": negative rate");
    sums[d.encoder] += st.rate;
    per[d.encoder].push_back(&d);
    prefix.push_back(d);
  }

  std::vector<Description> finest;
  for (std::size_t i = 0; i < L; ++i) {
    const auto& ds = per[i];
    if (ds.size() > 2) fail("encoder " + std::to_string(i + 1) + " has more than two steps");
    if (ds.size() == 2 &&
        !(ds[0]->stage == 1 && ds[1]->stage == 2 && ds[0]->sigma_t2_total > ds[1]->sigma_t2_total))
      fail("encoder " + std::to_string(i + 1) + ": coarse step must precede a finer step");
    if (ds.size() == 1 && ds[0]->stage != 2)
      fail("encoder " + std::to_string(i + 1) + ": lone description must be fine");
    if (!ds.empty()) finest.push_back(*ds.back());
    if (!(std::abs(sums[i] - R[i]) <= tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "encoder " << i + 1 << ": rates sum to " << sums[i] << ", target " << R[i];
      fail(os.str());
    }
  }

  if (r) {
    const double mmse = conditional_source_variance(inst, finest);
    const double d = distortion(inst, *r);
    if (!(std::abs(mmse - d) <= tol * std::max(1.0, d))) {
      std::ostringstream os;
      os.precision(17);
      os << "final MMSE " << mmse << " != distortion(r) " << d;
      fail(os.str());
    }
  }
  return out;
}

}  // namespace ceo
