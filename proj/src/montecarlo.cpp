#include "ceo/montecarlo.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ceo/errors.hpp"
#include "ceo/refinement.hpp"

namespace ceo {

namespace {

struct Moments {
  double s2 = 0.0, s4 = 0.0;
};

// per stage: c[j][i] coefficients, extra[j][i] variance added on top of stage j+1 (stage M: sigma_t2)
struct Plan {
  std::vector<std::vector<double>> coef;
  std::vector<std::vector<double>> extra;
  std::vector<std::vector<char>> present;
};

void check_config(const SimConfig& cfg) {
  if (cfg.n_samples < 2) throw ArgumentError("n_samples must be at least 2");
  if (cfg.shard_size == 0) throw ArgumentError("shard_size must be positive");
}

std::vector<Moments> run(const CeoInstance& inst, const Plan& plan, const SimConfig& cfg) {
  check_config(cfg);
  const std::size_t L = inst.L(), M = plan.coef.size();
  const std::uint64_t shards = (cfg.n_samples + cfg.shard_size - 1) / cfg.shard_size;
  std::vector<std::vector<Moments>> per(shards, std::vector<Moments>(M));
  const double sx = std::sqrt(inst.sigma_x2);
  std::vector<double> sn(L);
  for (std::size_t i = 0; i < L; ++i) sn[i] = std::sqrt(inst.sigma_n2[i]);
  std::vector<std::vector<double>> st(M, std::vector<double>(L, 0.0));
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t i = 0; i < L; ++i)
      if (plan.present[j][i]) st[j][i] = std::sqrt(plan.extra[j][i]);

  parallel_for(shards, [&](std::size_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::uint64_t begin = s * cfg.shard_size;
    const std::uint64_t end = std::min(cfg.n_samples, begin + cfg.shard_size);
    std::vector<double> w(L);
    std::vector<double> est(M);
    std::vector<Moments>& acc = per[s];
    for (std::uint64_t k = begin; k < end; ++k) {
      const double x = sx * g(gen);
      for (std::size_t j = 0; j < M; ++j) est[j] = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        const double y = x + sn[i] * g(gen);
        w[i] = y;
        // finest stage first, coarser ones add independent noise
        for (std::size_t j = M; j-- > 0;) {
          if (!plan.present[j][i]) break;
          if (st[j][i] > 0.0) w[i] += st[j][i] * g(gen);
          est[j] += plan.coef[j][i] * w[i];
        }
      }
      for (std::size_t j = 0; j < M; ++j) {
        const double e2 = (x - est[j]) * (x - est[j]);
        acc[j].s2 += e2;
        acc[j].s4 += e2 * e2;
      }
    }
  }, cfg.threads);

  std::vector<Moments> total(M);
  for (const auto& shard : per)
    for (std::size_t j = 0; j < M; ++j) {
      total[j].s2 += shard[j].s2;
      total[j].s4 += shard[j].s4;
    }
  return total;
}

SimReport report(const std::vector<Moments>& m, const std::vector<double>& analytic, std::uint64_t n) {
  SimReport rep;
  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double mean = m[j].s2 / dn;
    const double var = std::max(0.0, (m[j].s4 / dn - mean * mean) * dn / (dn - 1.0));
    const double se = std::sqrt(var / dn);
    rep.empirical_mse.push_back(mean);
    rep.analytic_d.push_back(analytic[j]);
    rep.std_error.push_back(se);
    rep.z_scores.push_back(se > 0.0 ? (mean - analytic[j]) / se : 0.0);
  }
  return rep;
}

Plan single_plan(const CeoInstance& inst, const NoiseAllocation& r, std::vector<double> coef) {
  Plan p;
  std::vector<double> extra(inst.L(), 0.0);
  std::vector<char> present(inst.L(), 0);
  for (std::size_t i = 0; i < inst.L(); ++i) {
    present[i] = r[i] > 0.0;
    if (present[i]) extra[i] = channel_noise_from_r(inst, i, r[i]);
  }
  p.coef.push_back(std::move(coef));
  p.extra.push_back(std::move(extra));
  p.present.push_back(std::move(present));
  return p;
}

}  // namespace

std::vector<double> mmse_coefficients(const CeoInstance& inst, const NoiseAllocation& r) {
  inst.validate();
  check_allocation(inst, r);
  const double D = distortion(inst, r);
  std::vector<double> c(inst.L(), 0.0);
  for (std::size_t i = 0; i < inst.L(); ++i)
    if (r[i] > 0.0) c[i] = D / (inst.sigma_n2[i] + channel_noise_from_r(inst, i, r[i]));
  return c;
}

SimReport simulate_linear(const CeoInstance& inst, const NoiseAllocation& r,
                          const std::vector<double>& coefficients, const SimConfig& cfg) {
  inst.validate();
  check_allocation(inst, r);
  if (coefficients.size() != inst.L()) throw ArgumentError("one coefficient per encoder");
  const Plan p = single_plan(inst, r, coefficients);
  return report(run(inst, p, cfg), {distortion(inst, r)}, cfg.n_samples);
}

SimReport simulate_distortion(const CeoInstance& inst, const NoiseAllocation& r, const SimConfig& cfg) {
  return simulate_linear(inst, r, mmse_coefficients(inst, r), cfg);
}

SimReport simulate_refinement(const CeoInstance& inst, const std::vector<NoiseAllocation>& r_chain,
                              const SimConfig& cfg) {
  inst.validate();
  if (r_chain.empty()) throw ArgumentError("allocation chain is empty");
  const std::size_t L = inst.L(), M = r_chain.size();
  for (const auto& r : r_chain) check_allocation(inst, r);
  Plan p;
  std::vector<double> analytic;
  for (std::size_t j = 0; j < M; ++j) {
    p.coef.push_back(mmse_coefficients(inst, r_chain[j]));
    analytic.push_back(distortion(inst, r_chain[j]));
    std::vector<double> extra(L, 0.0);
    std::vector<char> present(L, 0);
    for (std::size_t i = 0; i < L; ++i) {
      if (j + 1 < M && r_chain[j][i] > r_chain[j + 1][i])
        throw ArgumentError("allocation chain decreases at stage " + std::to_string(j + 2) +
                            ", encoder " + std::to_string(i + 1));
      present[i] = r_chain[j][i] > 0.0;
      if (!present[i]) continue;
      const double here = channel_noise_from_r(inst, i, r_chain[j][i]);
      const double finer = j + 1 < M ? channel_noise_from_r(inst, i, r_chain[j + 1][i]) : 0.0;
      extra[i] = std::max(0.0, here - finer);
    }
    p.extra.push_back(std::move(extra));
    p.present.push_back(std::move(present));
  }
  return report(run(inst, p, cfg), analytic, cfg.n_samples);
}

}  // namespace ceo
