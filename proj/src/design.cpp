#include <algorithm>
#include <cmath>

#include "rate_program.hpp"
#include "risrsma/optimizer.hpp"
#include "risrsma/quasi_newton.hpp"

namespace risrsma {

namespace {

using detail::RateProgram;

// Channels divided by the noise amplitude: H_d and H_r scale, G does not,
// so every effective channel comes out noise-normalized.
ChannelSet noise_normalized(const ChannelSet& ch, double sigma_z2) {
  const double s = 1.0 / std::sqrt(sigma_z2);
  return ChannelSet{ch.direct * s, ch.ris_user * s, ch.ap_ris};
}

bool uses_ris(const ChannelSet& ch, const std::optional<RisArchitecture>& arch) {
  return arch.has_value() && arch->elements() > 0 && ch.ris_total() > 0;
}

int surfaces_for(const ChannelSet& ch, const RisArchitecture& arch) {
  if (ch.ris_total() % arch.elements() != 0) {
    throw std::invalid_argument("channel RIS rows are not a multiple of M");
  }
  return ch.ris_total() / arch.elements();
}

}  // namespace

double ris_objective(const ChannelSet& ch, const Precoder& pre, const RisMatrix& ris,
                     const RVector& weights, const TransmitSetup& tx) {
  const auto prog = RateProgram::build(pre.scheme, ch.n_users(), weights);
  const CMatrix h = effective_channels(noise_normalized(ch, tx.sigma_z2), ris);
  return prog.wsr(h, pre.P, 1.0);
}

RisMatrix optimize_ris(const ChannelSet& ch, const Precoder& pre, const RisMatrix& ris0,
                       const RVector& weights, const TransmitSetup& tx,
                       const OptimizerSettings& settings) {
  tx.validate();
  settings.validate();
  ch.validate();
  if (ris0.params().size() == 0 && ris0.arch().params_per_surface() * ris0.n_surfaces() > 0) {
    throw std::invalid_argument("RIS optimization needs a parameterized starting RIS");
  }
  if (!validate(ris0, 1e-9).pass) throw std::invalid_argument("starting RIS violates its constraints");

  const auto prog = RateProgram::build(pre.scheme, ch.n_users(), weights);
  const ChannelSet chn = noise_normalized(ch, tx.sigma_z2);
  const auto& arch = ris0.arch();
  const int surfaces = ris0.n_surfaces();
  const bool single = arch.kind() == RisArchitecture::Kind::SingleConnected;

  // Phi^H H_r for diagonal Phi is a row scaling; skip the generic path.
  auto objective = [&](const RVector& x) -> double {
    if (single) {
      CMatrix reflected = chn.ris_user;
      for (Eigen::Index i = 0; i < x.size(); ++i) reflected.row(i) *= std::polar(1.0, -x[i]);
      const CMatrix h = chn.direct + chn.ap_ris.adjoint() * reflected;
      return -prog.wsr(h, pre.P, 1.0);
    }
    const RisMatrix r = RisMatrix::from_params(arch, surfaces, x);
    return -prog.wsr(effective_channels(chn, r), pre.P, 1.0);
  };

  BfgsOptions opts;
  opts.fd_step = settings.fd_step;
  opts.backtrack = settings.ls_backtrack;
  opts.ls_max = settings.ls_max;
  opts.max_iters = settings.max_ris_iters;
  const RVector x0 = ris0.params();
  const double f0 = objective(x0);
  const auto res = bfgs_minimize(objective, x0, opts);
  if (!(res.f < f0)) return ris0;
  return RisMatrix::from_params(arch, surfaces, res.x);
}

namespace {

struct Candidate {
  Precoder precoder;
  std::optional<RisMatrix> ris;
  double wsr = 0.0;
  std::vector<double> trace;
  bool converged = false;
};

Candidate run_alternation(const ChannelSet& ch, const TransmitSetup& tx, const RVector& weights,
                          const Precoder& start, const std::optional<RisMatrix>& ris_start,
                          const OptimizerSettings& settings) {
  Candidate c;
  c.ris = ris_start;
  if (!c.ris) {
    auto w = wmmse_precoder(ch.direct, weights, tx, start, settings);
    c.precoder = std::move(w.precoder);
    c.wsr = w.wsr;
    c.trace = std::move(w.wsr_trace);
    c.converged = w.converged;
    return c;
  }
  const auto prog = RateProgram::build(start.scheme, ch.n_users(), weights);
  const ChannelSet chn = noise_normalized(ch, tx.sigma_z2);
  c.precoder = start;
  c.wsr = prog.wsr(effective_channels(chn, *c.ris), start.P, 1.0);
  c.trace.push_back(c.wsr);
  for (int it = 0; it < settings.max_outer_iters; ++it) {
    auto w = wmmse_precoder(effective_channels(ch, *c.ris), weights, tx, c.precoder, settings);
    c.precoder = std::move(w.precoder);
    c.ris = optimize_ris(ch, c.precoder, *c.ris, weights, tx, settings);
    const double next = prog.wsr(effective_channels(chn, *c.ris), c.precoder.P, 1.0);
    const double change = next - c.wsr;
    c.wsr = std::max(next, c.wsr);
    c.trace.push_back(c.wsr);
    if (change <= settings.wsr_tol * std::max(std::abs(c.wsr), 1e-12)) {
      c.converged = true;
      break;
    }
  }
  return c;
}

DesignOutput to_output(const ChannelSet& ch, const TransmitSetup& tx, const RVector& weights,
                       Candidate c, std::uint64_t seed) {
  DesignOutput out;
  const CMatrix h = c.ris ? effective_channels(ch, *c.ris) : ch.direct;
  out.rates = with_optimal_allocation(compute_rates(h, c.precoder, tx.sigma_z2), weights);
  out.precoder = std::move(c.precoder);
  out.ris = std::move(c.ris);
  out.wsr = c.wsr;
  out.wsr_trace = std::move(c.trace);
  out.seed = seed;
  out.converged = c.converged;
  return out;
}

void check_design_inputs(const ChannelSet& ch, const TransmitSetup& tx, const RVector& weights,
                         const OptimizerSettings& settings) {
  ch.validate();
  tx.validate();
  settings.validate();
  if (ch.tx_total() != tx.tx_total()) throw std::invalid_argument("channel rows must equal N*N_t");
  if (weights.size() != ch.n_users()) throw std::invalid_argument("one weight per user expected");
}

}  // namespace

DesignOutput alternating_optimize_from(const ChannelSet& ch, const TransmitSetup& tx,
                                       const RVector& weights, const Precoder& start,
                                       const std::optional<RisMatrix>& ris_start,
                                       const OptimizerSettings& settings) {
  check_design_inputs(ch, tx, weights, settings);
  std::optional<RisMatrix> ris = ris_start;
  if (ris && (ris->arch().elements() == 0 || ch.ris_total() == 0)) ris.reset();
  if (start.scheme.kind == Scheme::NOMA && start.scheme.decode_order.empty()) {
    throw std::invalid_argument("alternating run from a NOMA start needs a decode order");
  }
  return to_output(ch, tx, weights, run_alternation(ch, tx, weights, start, ris, settings), 0);
}

DesignOutput alternating_optimize(const ChannelSet& ch, const TransmitSetup& tx,
                                  const RVector& weights, const SchemeSpec& scheme,
                                  const std::optional<RisArchitecture>& arch,
                                  const OptimizerSettings& settings, std::uint64_t seed) {
  check_design_inputs(ch, tx, weights, settings);
  const int K = ch.n_users();
  scheme.validate(K);
  const bool with_ris = uses_ris(ch, arch);
  const int surfaces = with_ris ? surfaces_for(ch, *arch) : 0;

  Rng rng(seed);
  std::vector<std::pair<Precoder, std::optional<RisMatrix>>> starts;
  for (int r = 0; r < settings.restarts; ++r) {
    Precoder p = random_precoder(scheme, K, tx, rng);
    std::optional<RisMatrix> ris;
    if (with_ris) ris = random_ris(*arch, surfaces, rng);
    starts.emplace_back(std::move(p), std::move(ris));
  }

  std::vector<std::vector<int>> orders{scheme.decode_order};
  if (scheme.kind == Scheme::NOMA && scheme.decode_order.empty()) orders = {{0, 1}, {1, 0}};

  std::optional<Candidate> best;
  for (const auto& order : orders) {
    for (const auto& [p0, ris0] : starts) {
      Precoder p = p0;
      p.scheme.decode_order = order;
      Candidate c = run_alternation(ch, tx, weights, p, ris0, settings);
      if (!best || c.wsr > best->wsr) best = std::move(c);
    }
  }
  return to_output(ch, tx, weights, std::move(*best), seed);
}

Precoder embed_sdma_in_rs1(const Precoder& sdma) {
  if (sdma.scheme.kind != Scheme::SDMA) throw std::invalid_argument("expected an SDMA precoder");
  Precoder rs{SchemeSpec::rs1(), CMatrix::Zero(sdma.P.rows(), sdma.P.cols() + 1)};
  rs.P.rightCols(sdma.P.cols()) = sdma.P;
  return rs;
}

Precoder embed_noma_in_rs1(const Precoder& noma) {
  if (noma.scheme.kind != Scheme::NOMA || noma.scheme.decode_order.size() != 2) {
    throw std::invalid_argument("expected a two-user NOMA precoder with a decode order");
  }
  const int w = noma.scheme.decode_order[0];
  const int s = noma.scheme.decode_order[1];
  Precoder rs{SchemeSpec::rs1(), CMatrix::Zero(noma.P.rows(), 3)};
  rs.P.col(0) = noma.P.col(w);
  rs.P.col(rs.private_col(s)) = noma.P.col(s);
  return rs;
}

RateResult ergodic_rates(const Precoder& pre, const std::optional<RisMatrix>& ris,
                         const ChannelSet& estimate, const CsiErrorModel& err, int n_samples,
                         double sigma_z2, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("need at least one error sample");
  estimate.validate();
  std::vector<RateResult> samples;
  samples.reserve(static_cast<size_t>(n_samples));
  const bool with_ris = ris.has_value() && estimate.ris_total() > 0;
  for (int s = 0; s < n_samples; ++s) {
    const ChannelSet truth = apply_csi_error(estimate, err, rng);
    const CMatrix h = with_ris ? effective_channels(truth, *ris) : truth.direct;
    samples.push_back(compute_rates(h, pre, sigma_z2));
  }
  return average_rates(samples);
}

}  // namespace risrsma
