#include "risrsma/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace risrsma {

namespace {

constexpr std::uint64_t kCornerSalt = 1000;
constexpr std::uint64_t kErgodicSalt = 5000;

ChannelSet single_user(const ChannelSet& ch, int k) {
  return ChannelSet{ch.direct.col(k), ch.ris_user.col(k), ch.ap_ris};
}

DesignOutput design_for(const ChannelSet& ch, const TransmitSetup& tx, const RVector& u,
                        const SchemeSpec& scheme, const std::optional<RisArchitecture>& arch,
                        const OptimizerSettings& settings, std::uint64_t seed) {
  return alternating_optimize(ch, tx, u, scheme, arch, settings, seed);
}

const DesignOutput& cached(std::map<int, DesignOutput>& cache, int i,
                           const std::function<DesignOutput()>& make) {
  auto it = cache.find(i);
  if (it == cache.end()) it = cache.emplace(i, make()).first;
  return it->second;
}

RateResult evaluate(const DesignOutput& d, const ChannelSet& ch, const TransmitSetup& tx,
                    const RVector& u, const std::optional<CsiEvaluation>& csi,
                    std::uint64_t seed) {
  if (!csi) return d.rates;
  Rng rng(seed);
  const auto avg = ergodic_rates(d.precoder, d.ris, ch, csi->error, csi->n_samples,
                                 tx.sigma_z2, rng);
  return with_optimal_allocation(avg, u);
}

}  // namespace

RVector region_weights(int index, int n_weights) {
  if (n_weights < 2) throw std::invalid_argument("a region sweep needs at least two weights");
  if (index < 0 || index >= n_weights) throw std::out_of_range("weight index out of range");
  const double w = 0.5 * std::numbers::pi * index / (n_weights - 1);
  RVector u(2);
  u << std::cos(w) * std::cos(w), std::sin(w) * std::sin(w);
  return u;
}

std::vector<int> pareto_frontier(const std::vector<RegionPoint>& points, int n_weights) {
  std::vector<int> keep;
  for (size_t i = 0; i < points.size(); ++i) {
    // Corners anchor the frontier even when a sweep point ties them.
    bool dominated = false;
    if (points[i].weight_idx >= n_weights) {
      keep.push_back(static_cast<int>(i));
      continue;
    }
    for (size_t j = 0; j < points.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& a = points[i];
      const auto& b = points[j];
      dominated = b.r1 >= a.r1 && b.r2 >= a.r2 && (b.r1 > a.r1 || b.r2 > a.r2);
    }
    if (!dominated) keep.push_back(static_cast<int>(i));
  }
  // Corner n_weights sits before the sweep, corner n_weights + 1 after it.
  auto rank = [&](int idx) {
    const int w = points[static_cast<size_t>(idx)].weight_idx;
    if (w == n_weights) return -1;
    return w;
  };
  std::stable_sort(keep.begin(), keep.end(), [&](int a, int b) { return rank(a) < rank(b); });
  return keep;
}

RegionPoint region_point(const ChannelSet& ch, const TransmitSetup& tx, const SchemeSpec& scheme,
                         const std::optional<RisArchitecture>& arch, int index, int n_weights,
                         const OptimizerSettings& settings, std::uint64_t seed,
                         const std::optional<CsiEvaluation>& csi, SharedDesigns* shared,
                         DesignOutput* design) {
  ch.validate();
  if (ch.n_users() != 2) throw UnsupportedConfiguration("rate-region sweeps need K = 2");
  scheme.validate(2);
  const RVector u = region_weights(index, n_weights);
  SharedDesigns local;
  SharedDesigns& cache = shared ? *shared : local;
  const int i = index;
  const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
  DesignOutput best;
  switch (scheme.kind) {
    case Scheme::SDMA:
      best = cached(cache.sdma, i, [&] { return design_for(ch, tx, u, scheme, arch, settings, s); });
      break;
    case Scheme::NOMA:
      if (scheme.decode_order.empty()) {
        best = cached(cache.noma, i, [&] { return design_for(ch, tx, u, scheme, arch, settings, s); });
      } else {
        best = design_for(ch, tx, u, scheme, arch, settings, s);
      }
      break;
    case Scheme::RS1Layer: {
      best = design_for(ch, tx, u, scheme, arch, settings, s);
      if (settings.embed_baselines) {
        const auto& sd = cached(cache.sdma, i, [&] {
          return design_for(ch, tx, u, SchemeSpec::sdma(), arch, settings, s);
        });
        const auto& nd = cached(cache.noma, i, [&] {
          return design_for(ch, tx, u, SchemeSpec::noma(), arch, settings, s);
        });
        auto from_sdma = alternating_optimize_from(ch, tx, u, embed_sdma_in_rs1(sd.precoder), sd.ris, settings);
        auto from_noma = alternating_optimize_from(ch, tx, u, embed_noma_in_rs1(nd.precoder), nd.ris, settings);
        if (from_sdma.wsr > best.wsr) best = std::move(from_sdma);
        if (from_noma.wsr > best.wsr) best = std::move(from_noma);
        best.seed = s;
      }
      break;
    }
    case Scheme::HRS2Layer:
      best = design_for(ch, tx, u, scheme, arch, settings, s);
      break;
  }
  const RateResult r = evaluate(best, ch, tx, u, csi, derive_seed(seed, kErgodicSalt + i));
  if (design) *design = std::move(best);
  return {i, u[0], u[1], r.user_totals[0], r.user_totals[1], weighted_sum(r, u)};
}

RegionResult rate_region(const ChannelSet& ch, const TransmitSetup& tx, const SchemeSpec& scheme,
                         const std::optional<RisArchitecture>& arch, int n_weights,
                         const OptimizerSettings& settings, std::uint64_t seed,
                         const std::optional<CsiEvaluation>& csi, SharedDesigns* shared) {
  ch.validate();
  if (ch.n_users() != 2) throw UnsupportedConfiguration("rate-region sweeps need K = 2");
  scheme.validate(2);
  if (n_weights < 2) throw std::invalid_argument("a region sweep needs at least two weights");
  SharedDesigns local;
  SharedDesigns& cache = shared ? *shared : local;

  RegionResult out;
  for (int i = 0; i < n_weights; ++i) {
    DesignOutput d;
    out.points.push_back(region_point(ch, tx, scheme, arch, i, n_weights, settings, seed, csi, &cache, &d));
    out.designs.push_back(std::move(d));
  }

  for (int k = 0; k < 2; ++k) {
    auto& corner = cache.corners[static_cast<size_t>(k)];
    const ChannelSet sub = single_user(ch, k);
    const RVector one = RVector::Ones(1);
    if (!corner) {
      corner = design_for(sub, tx, one, SchemeSpec::sdma(), arch, settings,
                          derive_seed(seed, kCornerSalt + k));
    }
    const RateResult r = evaluate(*corner, sub, tx, one, csi, derive_seed(seed, kErgodicSalt + kCornerSalt + k));
    const double rate = r.user_totals[0];
    RegionPoint p{n_weights + k, k == 0 ? 1.0 : 0.0, k == 0 ? 0.0 : 1.0, k == 0 ? rate : 0.0,
                  k == 0 ? 0.0 : rate, rate};
    out.points.push_back(p);
    out.corner_designs[static_cast<size_t>(k)] = corner;
  }
  out.frontier = pareto_frontier(out.points, n_weights);
  return out;
}

RegionResult rate_region_ensemble(const std::vector<ChannelSet>& channels,
                                  const std::vector<std::uint64_t>& seeds,
                                  const TransmitSetup& tx, const SchemeSpec& scheme,
                                  const std::optional<RisArchitecture>& arch, int n_weights,
                                  const OptimizerSettings& settings,
                                  const std::optional<CsiEvaluation>& csi) {
  if (channels.empty()) throw std::invalid_argument("empty channel ensemble");
  if (seeds.size() != channels.size()) throw std::invalid_argument("one seed per channel expected");
  RegionResult avg;
  for (size_t c = 0; c < channels.size(); ++c) {
    const auto one = rate_region(channels[c], tx, scheme, arch, n_weights, settings, seeds[c], csi);
    if (avg.points.empty()) {
      avg.points = one.points;
      continue;
    }
    for (size_t i = 0; i < one.points.size(); ++i) {
      avg.points[i].r1 += one.points[i].r1;
      avg.points[i].r2 += one.points[i].r2;
      avg.points[i].wsr += one.points[i].wsr;
    }
  }
  const double n = static_cast<double>(channels.size());
  for (auto& p : avg.points) {
    p.r1 /= n;
    p.r2 /= n;
    p.wsr /= n;
  }
  avg.frontier = pareto_frontier(avg.points, n_weights);
  return avg;
}

}  // namespace risrsma
