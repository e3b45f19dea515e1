#include "ceo/gaussian_mi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ceo/errors.hpp"

namespace ceo {

namespace {

// variance standing in for sigma_t2 = 0, i.e. the test channel at r = CAP
double cap_floor(double sigma_n2) { return sigma_n2 * std::exp(-2.0 * kCap); }

double effective(const CeoInstance& inst, const Description& d) {
  return d.sigma_t2_total == 0.0 ? cap_floor(inst.sigma_n2[d.encoder]) : d.sigma_t2_total;
}

void check_description(const CeoInstance& inst, const Description& d) {
  if (d.encoder >= inst.L()) throw ArgumentError("description references unknown encoder");
  if (std::isnan(d.sigma_t2_total) || d.sigma_t2_total < 0.0)
    throw ArgumentError("description noise variance must be >= 0");
  if (d.stage != 1 && d.stage != 2) throw ArgumentError("description stage must be 1 or 2");
}

// finest informative description per encoder, as (encoder, effective variance)
std::vector<std::pair<std::size_t, double>> reduce(const CeoInstance& inst,
                                                   const std::vector<Description>& decoded) {
  std::vector<double> best(inst.L(), std::numeric_limits<double>::infinity());
  std::vector<int> zeros(inst.L(), 0);
  for (const auto& d : decoded) {
    check_description(inst, d);
    if (d.sigma_t2_total == 0.0 && ++zeros[d.encoder] > 1)
      throw DegeneracyError("duplicate noiseless descriptions of encoder " +
                            std::to_string(d.encoder + 1) + " make the covariance singular");
    if (std::isinf(d.sigma_t2_total)) continue;
    best[d.encoder] = std::min(best[d.encoder], effective(inst, d));
  }
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t e = 0; e < inst.L(); ++e)
    if (std::isfinite(best[e])) out.emplace_back(e, best[e]);
  return out;
}

// Var(a | b) from the joint covariance [[saa, sab^T], [sab, Sbb]]
double schur(double saa, const Eigen::VectorXd& sab, const Eigen::MatrixXd& Sbb) {
  if (sab.size() == 0) return saa;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Sbb);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all())
    throw DegeneracyError("singular conditioning covariance");
  return saa - sab.dot(ldlt.solve(sab));
}

}  // namespace

Description fine_description(const CeoInstance& inst, std::size_t i, double r) {
  return Description{i, channel_noise_from_r(inst, i, r), 2};
}

double gaussian_mi(const CeoInstance& inst, const Description& target,
                   const std::vector<Description>& decoded, bool given_x) {
  check_description(inst, target);
  if (std::isinf(target.sigma_t2_total)) return 0.0;

  const std::size_t e = target.encoder;
  const double st = effective(inst, target);
  auto kept = reduce(inst, decoded);

  double coarser = std::numeric_limits<double>::infinity();
  for (auto it = kept.begin(); it != kept.end(); ++it) {
    if (it->first != e) continue;
    if (it->second <= st) return 0.0;  // target adds nothing
    coarser = it->second;
  }

  // conditioning set o: optional X, then the other encoders' descriptions
  std::vector<std::pair<std::size_t, double>> others;
  for (const auto& k : kept)
    if (k.first != e) others.push_back(k);
  const double sx = inst.sigma_x2;
  const Eigen::Index n = static_cast<Eigen::Index>(others.size()) + (given_x ? 1 : 0);
  Eigen::MatrixXd S(n, n);
  Eigen::VectorXd c(n);
  Eigen::Index off = 0;
  if (given_x) {
    S(0, 0) = sx;
    for (Eigen::Index j = 1; j < n; ++j) S(0, j) = S(j, 0) = sx;
    c(0) = sx;
    off = 1;
  }
  for (std::size_t a = 0; a < others.size(); ++a) {
    const auto [ea, va] = others[a];
    for (std::size_t b = 0; b < others.size(); ++b) {
      const auto [eb, vb] = others[b];
      double v = sx;
      if (ea == eb) v += inst.sigma_n2[ea] + std::min(va, vb);
      S(off + a, off + b) = v;
    }
    c(off + a) = sx;
  }
  // Var(W_target | o)
  const double vt = schur(sx + inst.sigma_n2[e] + st, c, S);
  if (!(vt > 0.0)) throw DegeneracyError("nonpositive conditional variance in gaussian_mi");
  if (!std::isfinite(coarser)) return std::max(0.0, 0.5 * std::log(vt / st));

  // W_coarse = W_target + T', Var T' = d:
  // I = 1/2 ln((vt + d) st ... ) rearranged to avoid cancellation when d is small
  const double d = coarser - st;
  return std::max(0.0, 0.5 * (std::log1p(d / st) - std::log1p(d / vt)));
}

double conditional_source_variance(const CeoInstance& inst,
                                   const std::vector<Description>& decoded) {
  double p = 1.0 / inst.sigma_x2;
  for (const auto& [enc, v] : reduce(inst, decoded)) p += 1.0 / (inst.sigma_n2[enc] + v);
  return 1.0 / p;
}

}  // namespace ceo
