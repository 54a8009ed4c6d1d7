#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "risrsma/optimizer.hpp"

namespace risrsma {

/// One achieved two-user rate pair. Sweep points carry weight_idx in
/// [0, n_weights); the single-user corners use n_weights and n_weights + 1.
struct RegionPoint {
  int weight_idx = 0;
  double u1 = 0.0;
  double u2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double wsr = 0.0;
};

/// Evaluate designs over the CSI error distribution instead of on the
/// channel they were designed for.
struct CsiEvaluation {
  CsiErrorModel error;
  int n_samples = 2000;
};

/// Designs that several schemes of one (channel, architecture) pair share:
/// the SDMA/NOMA sweeps RS embeds and the single-user corners.
struct SharedDesigns {
  std::map<int, DesignOutput> sdma;
  std::map<int, DesignOutput> noma;
  std::array<std::optional<DesignOutput>, 2> corners;
};

struct RegionResult {
  std::vector<RegionPoint> points;          // sweep in weight order, then the two corners
  std::vector<DesignOutput> designs;        // one per sweep point
  std::array<std::optional<DesignOutput>, 2> corner_designs;
  std::vector<int> frontier;                // indices into points, u=(1,0) end first
};

/// u_i = (cos^2 w_i, sin^2 w_i), w_i = (pi/2) i / (n - 1).
RVector region_weights(int index, int n_weights);

/// Non-dominated sweep points plus both corners, ordered from the user-1 corner through
/// the sweep to the user-2 corner.
std::vector<int> pareto_frontier(const std::vector<RegionPoint>& points, int n_weights);

/// One sweep point: the design for weight `index` of `n_weights`, evaluated
/// on `ch` (or ergodically when `csi` is set). Identical to the matching
/// entry of rate_region. `design`, when given, receives the chosen design.
RegionPoint region_point(const ChannelSet& ch, const TransmitSetup& tx, const SchemeSpec& scheme,
                         const std::optional<RisArchitecture>& arch, int index, int n_weights,
                         const OptimizerSettings& settings, std::uint64_t seed,
                         const std::optional<CsiEvaluation>& csi = std::nullopt,
                         SharedDesigns* shared = nullptr, DesignOutput* design = nullptr);

/// Weighted-sum-rate sweep of the two-user rate region for one channel.
/// Seeds for every design are derived from `seed` and the weight index only,
/// so different schemes see the same random starts.
RegionResult rate_region(const ChannelSet& ch, const TransmitSetup& tx, const SchemeSpec& scheme,
                         const std::optional<RisArchitecture>& arch, int n_weights,
                         const OptimizerSettings& settings, std::uint64_t seed,
                         const std::optional<CsiEvaluation>& csi = std::nullopt,
                         SharedDesigns* shared = nullptr);

/// Point-wise average of per-channel regions (matched weight indices)
/// followed by frontier extraction. `seeds[i]` drives channel i.
RegionResult rate_region_ensemble(const std::vector<ChannelSet>& channels,
                                  const std::vector<std::uint64_t>& seeds,
                                  const TransmitSetup& tx, const SchemeSpec& scheme,
                                  const std::optional<RisArchitecture>& arch, int n_weights,
                                  const OptimizerSettings& settings,
                                  const std::optional<CsiEvaluation>& csi = std::nullopt);

}  // namespace risrsma
