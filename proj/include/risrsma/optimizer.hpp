#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/rates.hpp"
#include "risrsma/ris.hpp"
#include "risrsma/types.hpp"

namespace risrsma {

struct OptimizerSettings {
  double wsr_tol = 1e-4;      // relative WSR change that ends a loop
  int max_outer_iters = 50;   // precoder/RIS alternations
  int max_wmmse_iters = 200;
  int restarts = 3;
  double fd_step = 1e-6;
  double ls_backtrack = 0.5;
  int ls_max = 30;
  int max_ris_iters = 100;    // BFGS iterations per RIS step
  /// RS1Layer region points also start from the optimized SDMA and NOMA
  /// designs, so RS never falls below either baseline.
  bool embed_baselines = true;

  void validate() const;
};

/// What the transmitter is allowed to do: antennas per AP, one power budget
/// per AP (Watts) and the receiver noise power (Watts).
struct TransmitSetup {
  int n_tx = 1;
  RVector ap_power;
  double sigma_z2 = 1.0;

  int n_aps() const { return static_cast<int>(ap_power.size()); }
  int tx_total() const { return n_aps() * n_tx; }
  void validate() const;
};

struct WmmseOutput {
  Precoder precoder;
  RateResult rates;               // WSR-optimal common allocation applied
  double wsr = 0.0;
  std::vector<double> wsr_trace;  // entry 0 is the starting point
  bool converged = false;
};

/// Weighted-sum-rate precoder design through the rate/MSE equivalence:
/// alternate MMSE equalizers, MSE weights and a convex quadratically
/// constrained subproblem in the precoder and common-rate variables.
/// Runs from a fixed set of full-power MRT-style starts (equal split, then
/// 90% of the power on one stream at a time) and keeps the best. NOMA
/// without an explicit order solves both orders and keeps the better.
WmmseOutput wmmse_precoder(const CMatrix& h_eff, const RVector& weights,
                           const TransmitSetup& tx, const SchemeSpec& scheme,
                           const OptimizerSettings& settings = {});

/// Same, from a caller-supplied starting precoder (its scheme, including
/// any NOMA order, is kept).
WmmseOutput wmmse_precoder(const CMatrix& h_eff, const RVector& weights,
                           const TransmitSetup& tx, const Precoder& start,
                           const OptimizerSettings& settings = {});

/// Weighted sum rate with precoder fixed and common rates allocated
/// greedily to the heaviest user.
double ris_objective(const ChannelSet& ch, const Precoder& pre, const RisMatrix& ris,
                     const RVector& weights, const TransmitSetup& tx);

/// Quasi-Newton ascent over the unconstrained RIS parameters with the
/// precoder fixed. Never returns a worse objective than `ris0`.
RisMatrix optimize_ris(const ChannelSet& ch, const Precoder& pre, const RisMatrix& ris0,
                       const RVector& weights, const TransmitSetup& tx,
                       const OptimizerSettings& settings = {});

struct DesignOutput {
  Precoder precoder;
  std::optional<RisMatrix> ris;   // empty without RIS
  RateResult rates;               // on the design channel, optimal allocation
  double wsr = 0.0;
  std::vector<double> wsr_trace;  // one entry per outer iteration, entry 0 = start
  std::uint64_t seed = 0;
  bool converged = false;
};

/// Random start: i.i.d. CN(0,1) columns scaled so every AP uses its full budget.
Precoder random_precoder(const SchemeSpec& scheme, int n_users, const TransmitSetup& tx,
                         Rng& rng);

/// Joint precoder/RIS design from `restarts` random starts; returns the best.
/// `arch` empty (or a channel set without RIS rows) means direct links only.
DesignOutput alternating_optimize(const ChannelSet& ch, const TransmitSetup& tx,
                                  const RVector& weights, const SchemeSpec& scheme,
                                  const std::optional<RisArchitecture>& arch,
                                  const OptimizerSettings& settings, std::uint64_t seed);

/// One alternating run from a given precoder and RIS state.
DesignOutput alternating_optimize_from(const ChannelSet& ch, const TransmitSetup& tx,
                                       const RVector& weights, const Precoder& start,
                                       const std::optional<RisMatrix>& ris_start,
                                       const OptimizerSettings& settings);

/// RS1Layer precoder equal in every rate to an SDMA precoder (p_c = 0).
Precoder embed_sdma_in_rs1(const Precoder& sdma);
/// RS1Layer precoder carrying a two-user NOMA design: the first-decoded
/// user's stream becomes the common stream, the other stays private.
Precoder embed_noma_in_rs1(const Precoder& noma);

/// Mean rates over `n_samples` channels drawn as estimate + fresh CSI error.
/// Per-user quantities are averaged before any min is taken.
RateResult ergodic_rates(const Precoder& pre, const std::optional<RisMatrix>& ris,
                         const ChannelSet& estimate, const CsiErrorModel& err,
                         int n_samples, double sigma_z2, Rng& rng);

}  // namespace risrsma
