#include "ceo/polymatroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ceo/errors.hpp"
#include "ceo/gaussian_mi.hpp"

namespace ceo {

std::vector<std::size_t> SubsetMask::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 32; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

namespace {

double partial_precision(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask A) {
  double p = 1.0 / inst.sigma_x2;
  for (std::size_t i = 0; i < inst.L(); ++i)
    if (A.contains(i)) p += precision_term(inst.sigma_n2[i], r[i]);
  return p;
}

double q_sum(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask A) {
  double s = 0.0;
  for (std::size_t i = 0; i < inst.L(); ++i)
    if (A.contains(i)) s += precision_term(inst.sigma_n2[i], r[i]);
  return s;
}

}  // namespace

double rank_f(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask A) {
  check_allocation(inst, r);
  if (A.empty()) return 0.0;
  const SubsetMask all = SubsetMask::full(inst.L());
  double v = 0.5 * std::log(partial_precision(inst, r, all) /
                            partial_precision(inst, r, A.complement(inst.L())));
  for (std::size_t i : A.members()) v += r[i];
  return v;
}

double rank_fD(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask A, double D) {
  check_allocation(inst, r);
  if (!(D > 0.0)) throw ArgumentError("D must be positive");
  if (A.empty()) return 0.0;
  double v = 0.5 * std::log(1.0 / D) -
             0.5 * std::log(partial_precision(inst, r, A.complement(inst.L())));
  for (std::size_t i : A.members()) v += r[i];
  return v;
}

double rate_sum(const RateVector& R, SubsetMask A) {
  double s = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (!A.contains(i)) continue;
    if (is_cap(R[i])) return std::numeric_limits<double>::infinity();
    s += R[i];
  }
  return s;
}

double region_slack(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                    SubsetMask* where) {
  check_allocation(inst, r);
  check_rates(inst, R);
  double worst = std::numeric_limits<double>::infinity();
  const std::uint32_t n = 1u << inst.L();
  for (std::uint32_t b = 1; b < n; ++b) {
    SubsetMask A{b};
    double s = rate_sum(R, A);
    if (std::isinf(s)) continue;
    s -= rank_f(inst, r, A);
    if (s < worst) {
      worst = s;
      if (where) *where = A;
    }
  }
  return worst;
}

bool region_contains(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                     double tol) {
  return region_slack(inst, r, R) >= -tol;
}

void check_permutation(const Permutation& pi, std::size_t L) {
  if (pi.size() != L) throw ArgumentError("permutation length != L");
  std::vector<bool> seen(L, false);
  for (std::size_t v : pi) {
    if (v >= L || seen[v]) throw ArgumentError("not a permutation");
    seen[v] = true;
  }
}

RateVector vertex(const CeoInstance& inst, const NoiseAllocation& r, const Permutation& pi) {
  check_allocation(inst, r);
  check_permutation(pi, inst.L());
  const std::size_t L = inst.L();
  RateVector R(L, 0.0);
  std::vector<Description> later;
  // pi(L) is decoded first, with no side information
  for (std::size_t k = L; k-- > 0;) {
    const std::size_t e = pi[k];
    Description d = fine_description(inst, e, r[e]);
    R[e] = gaussian_mi(inst, d, later);
    later.push_back(d);
  }
  return R;
}

std::vector<Permutation> all_permutations(std::size_t L) {
  Permutation p(L);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool on_dominant_face(const CeoInstance& inst, const NoiseAllocation& r, const RateVector& R,
                      double tol) {
  if (!region_contains(inst, r, R, tol)) return false;
  double total = 0.0;
  for (double v : R) total += v;
  return std::abs(total - rank_f(inst, r, SubsetMask::full(inst.L()))) <= tol;
}

FaceDescriptor identify_face(const CeoInstance& inst, const NoiseAllocation& r,
                             const RateVector& R, double tol) {
  if (!on_dominant_face(inst, r, R, tol))
    throw ArgumentError("identify_face: rate vector is not on the dominant face");
  const std::size_t L = inst.L();
  FaceDescriptor face;
  SubsetMask active;
  for (std::size_t i = 0; i < L; ++i) {
    if (r[i] > 0.0)
      active = active | SubsetMask::single(i);
    else
      face.vacuous = face.vacuous | SubsetMask::single(i);
  }

  std::vector<SubsetMask> tight;
  for (std::uint32_t b = 1; b < (1u << L); ++b) {
    SubsetMask A{b};
    if (!A.subset_of(active) || A == active) continue;
    if (std::abs(rate_sum(R, A) - rank_f(inst, r, A)) <= tol) tight.push_back(A);
  }
  std::sort(tight.begin(), tight.end(),
            [](SubsetMask a, SubsetMask b) { return a.size() < b.size(); });
  for (std::size_t k = 1; k < tight.size(); ++k)
    if (!tight[k - 1].subset_of(tight[k]) || tight[k - 1] == tight[k])
      throw InternalError("tight sets are not nested; tolerance too loose?");

  face.chain = tight;
  SubsetMask prev;
  for (SubsetMask A : tight) {
    face.blocks.push_back({A.bits & ~prev.bits});
    prev = A;
  }
  SubsetMask rest{(active.bits & ~prev.bits) | face.vacuous.bits};
  if (!rest.empty()) face.blocks.push_back(rest);
  const int g = static_cast<int>(active.size());
  face.dimension = g == 0 ? 0 : g - static_cast<int>(tight.size()) - 1;
  return face;
}

double supermodular_gap(const CeoInstance& inst, const NoiseAllocation& r, SubsetMask S,
                        SubsetMask T) {
  check_allocation(inst, r);
  const std::size_t L = inst.L();
  const double p = 1.0 / inst.sigma_x2 + q_sum(inst, r, (S | T).complement(L));
  const double a = q_sum(inst, r, {T.bits & ~S.bits});
  const double b = q_sum(inst, r, {S.bits & ~T.bits});
  return 0.5 * std::log1p(a * b / (p * (p + a + b)));
}

bool check_supermodular(const CeoInstance& inst, const NoiseAllocation& r) {
  check_allocation(inst, r);
  const std::size_t L = inst.L();
  const bool positive = std::all_of(r.begin(), r.end(), [](double v) { return v > 0.0; });
  const std::uint32_t n = 1u << L;
  std::vector<double> f(n);
  for (std::uint32_t b = 0; b < n; ++b) f[b] = rank_f(inst, r, {b});
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t t = s + 1; t < n; ++t) {
      const double lhs = f[s] + f[t];
      const double rhs = f[s | t] + f[s & t];
      const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
      if (lhs > rhs + 1e-13 * scale) return false;
      const bool comparable = (s & ~t) == 0 || (t & ~s) == 0;
      if (positive && !comparable && !(supermodular_gap(inst, r, {s}, {t}) > 0.0)) return false;
    }
  }
  return true;
}

}  // namespace ceo
