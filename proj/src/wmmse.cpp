#include <algorithm>
#include <cmath>
#include <numbers>

#include "rate_program.hpp"
#include "risrsma/optimizer.hpp"
#include "risrsma/qcqp.hpp"

namespace risrsma {

void OptimizerSettings::validate() const {
  if (!(wsr_tol > 0.0 && wsr_tol < 1.0)) throw std::invalid_argument("wsr_tol must lie in (0, 1)");
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
  if (max_wmmse_iters < 1) throw std::invalid_argument("max_wmmse_iters must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be > 0");
  if (!(ls_backtrack > 0.0 && ls_backtrack < 1.0)) {
    throw std::invalid_argument("ls_backtrack must lie in (0, 1)");
  }
  if (ls_max < 1) throw std::invalid_argument("ls_max must be >= 1");
  if (max_ris_iters < 1) throw std::invalid_argument("max_ris_iters must be >= 1");
}

void TransmitSetup::validate() const {
  if (n_tx < 1) throw std::invalid_argument("N_t must be >= 1");
  if (ap_power.size() < 1) throw std::invalid_argument("need at least one AP power budget");
  if ((ap_power.array() <= 0.0).any()) throw std::invalid_argument("AP power budgets must be > 0");
  if (!(sigma_z2 > 0.0)) throw std::invalid_argument("noise power must be > 0 for optimization");
}

namespace {

using detail::RateProgram;

constexpr double kLn2 = std::numbers::ln2;

// Real coordinates: stream j occupies [Re p_j; Im p_j] at offset 2*n*j,
// followed by one slack variable per rate term.
struct Layout {
  int n = 0;
  int streams = 0;
  int terms = 0;
  int block() const { return 2 * n; }
  int dim() const { return 2 * n * streams + terms; }
  int stream_offset(int j) const { return 2 * n * j; }
  int slack(int t) const { return 2 * n * streams + t; }
};

RVector pack(const CMatrix& P, const Layout& L) {
  RVector z = RVector::Zero(L.dim());
  for (int j = 0; j < L.streams; ++j) {
    z.segment(L.stream_offset(j), L.n) = P.col(j).real();
    z.segment(L.stream_offset(j) + L.n, L.n) = P.col(j).imag();
  }
  return z;
}

CMatrix unpack(const RVector& z, const Layout& L) {
  CMatrix P(L.n, L.streams);
  for (int j = 0; j < L.streams; ++j) {
    for (int i = 0; i < L.n; ++i) {
      P(i, j) = cdouble(z[L.stream_offset(j) + i], z[L.stream_offset(j) + L.n + i]);
    }
  }
  return P;
}

// |h^H p|^2 = v^T (a a^T + b b^T) v with a = [Re h; Im h], b = [-Im h; Re h].
struct UserForms {
  RVector a;
  RVector b;
  RMatrix gram;
};

UserForms user_forms(const CVector& h) {
  const auto n = h.size();
  UserForms f;
  f.a.resize(2 * n);
  f.b.resize(2 * n);
  f.a << h.real(), h.imag();
  f.b << -h.imag(), h.real();
  f.gram = f.a * f.a.transpose() + f.b * f.b.transpose();
  return f;
}

// Builds the convex subproblem around P: every decode event contributes
// slack_t <= (1 - u*eps(P') + ln u)/ln 2, a concave lower bound on its rate
// that is tight at P' = P for the MMSE equalizer and weight u = 1/eps.
QcqpProblem build_subproblem(const RateProgram& prog, const CMatrix& h, const CMatrix& P,
                             const TransmitSetup& tx, const Layout& L) {
  QcqpProblem prob;
  const int d = L.dim();
  prob.cost = RVector::Zero(d);
  for (int t = 0; t < L.terms; ++t) prob.cost[L.slack(t)] = -prog.terms[static_cast<size_t>(t)].weight;

  std::vector<UserForms> forms;
  forms.reserve(static_cast<size_t>(h.cols()));
  for (Eigen::Index k = 0; k < h.cols(); ++k) forms.push_back(user_forms(h.col(k)));

  const int B = L.block();
  for (int t = 0; t < L.terms; ++t) {
    for (int ei : prog.terms[static_cast<size_t>(t)].events) {
      const auto& e = prog.events[static_cast<size_t>(ei)];
      const auto& hk = h.col(e.user);
      const auto& uf = forms[static_cast<size_t>(e.user)];
      const cdouble s = hk.dot(P.col(e.stream));
      double intf = 1.0;
      for (int i : e.interferers) intf += std::norm(hk.dot(P.col(i)));
      const double sig = std::norm(s);

      QuadConstraint c{RMatrix::Zero(d, d), RVector::Zero(d), 0.0};
      c.q[L.slack(t)] = 1.0;
      if (sig > 0.0) {
        const double total = sig + intf;
        const cdouble g = std::conj(s) / total;  // MMSE equalizer
        const double u = total / intf;           // 1 / MMSE
        const double coef = sig / (total * intf * kLn2);  // u |g|^2 / ln 2
        auto add_gram = [&](int stream) {
          const int o = L.stream_offset(stream);
          c.Q.block(o, o, B, B) += coef * uf.gram;
        };
        add_gram(e.stream);
        for (int i : e.interferers) add_gram(i);
        c.q.segment(L.stream_offset(e.stream), B) =
            -(2.0 * u / kLn2) * (g.real() * uf.a - g.imag() * uf.b);
        c.r = (u / kLn2) * (std::norm(g) + 1.0) - (1.0 + std::log(u)) / kLn2;
      }
      prob.constraints.push_back(std::move(c));
    }
  }

  for (int ap = 0; ap < tx.n_aps(); ++ap) {
    QuadConstraint c{RMatrix::Zero(d, d), RVector::Zero(d), -tx.ap_power[ap]};
    for (int j = 0; j < L.streams; ++j) {
      for (int i = 0; i < tx.n_tx; ++i) {
        const int row = ap * tx.n_tx + i;
        c.Q(L.stream_offset(j) + row, L.stream_offset(j) + row) = 1.0;
        c.Q(L.stream_offset(j) + L.n + row, L.stream_offset(j) + L.n + row) = 1.0;
      }
    }
    prob.constraints.push_back(std::move(c));
  }
  return prob;
}

// Scales P strictly inside every AP budget.
CMatrix shrink_inside(const CMatrix& P, const TransmitSetup& tx) {
  const RVector e = ap_energy(P, tx.n_tx);
  double s = 1.0;
  for (int n = 0; n < tx.n_aps(); ++n) {
    const double cap = (1.0 - 1e-7) * tx.ap_power[n];
    if (e[n] > cap) s = std::min(s, std::sqrt(cap / e[n]));
  }
  return s * P;
}

WmmseOutput finish(const CMatrix& h, const RVector& weights, const TransmitSetup& tx,
                   const SchemeSpec& scheme, CMatrix P, std::vector<double> trace,
                   bool converged) {
  WmmseOutput out;
  out.precoder = Precoder{scheme, std::move(P)};
  out.rates = with_optimal_allocation(compute_rates(h, out.precoder, tx.sigma_z2), weights);
  out.wsr = trace.back();
  out.wsr_trace = std::move(trace);
  out.converged = converged;
  return out;
}

WmmseOutput run_wmmse(const CMatrix& h, const RVector& weights, const TransmitSetup& tx,
                      const Precoder& start, const OptimizerSettings& settings) {
  const int K = static_cast<int>(h.cols());
  const auto prog = RateProgram::build(start.scheme, K, weights);
  const CMatrix hn = h / std::sqrt(tx.sigma_z2);
  Layout L{static_cast<int>(h.rows()), prog.n_streams, static_cast<int>(prog.terms.size())};

  CMatrix P = start.P;
  double wsr = prog.wsr(hn, P, 1.0);
  std::vector<double> trace{wsr};
  bool converged = false;

  for (int it = 0; it < settings.max_wmmse_iters; ++it) {
    const QcqpProblem prob = build_subproblem(prog, hn, P, tx, L);

    RVector z0 = pack(shrink_inside(P, tx), L);
    for (int t = 0; t < L.terms; ++t) {
      double lowest = std::numeric_limits<double>::infinity();
      for (int ei : prog.terms[static_cast<size_t>(t)].events) {
        // Constraint rows follow event order; evaluate with the slack at 0.
        lowest = std::min(lowest, -prob.constraints[static_cast<size_t>(ei)].value(z0));
      }
      z0[L.slack(t)] = lowest - 1.0;
    }
    const QcqpResult sol = solve_qcqp(prob, z0);
    const CMatrix candidate = unpack(sol.z, L);
    const double next = prog.wsr(hn, candidate, 1.0);
    if (!(next >= wsr)) {
      converged = true;  // no further ascent available at this precision
      break;
    }
    const double change = next - wsr;
    P = candidate;
    wsr = next;
    trace.push_back(wsr);
    if (change <= settings.wsr_tol * std::max(std::abs(wsr), 1e-12)) {
      converged = true;
      break;
    }
  }
  return finish(h, weights, tx, start.scheme, std::move(P), std::move(trace), converged);
}

CVector unit_or_first_axis(const CVector& v) {
  const double n = v.norm();
  if (n > 0.0) return v / n;
  CVector e = CVector::Zero(v.size());
  e[0] = 1.0;
  return e;
}

// Every AP meets its budget with equality (rows of an idle AP stay zero).
CMatrix fill_budgets(CMatrix P, const TransmitSetup& tx) {
  const RVector e = ap_energy(P, tx.n_tx);
  for (int n = 0; n < tx.n_aps(); ++n) {
    if (e[n] > 0.0) P.middleRows(n * tx.n_tx, tx.n_tx) *= std::sqrt(tx.ap_power[n] / e[n]);
  }
  return P;
}

Precoder mrt_start(const CMatrix& h, const SchemeSpec& scheme, const TransmitSetup& tx) {
  const int K = static_cast<int>(h.cols());
  const Eigen::Index n = h.rows();
  Precoder pre{scheme, CMatrix::Zero(n, scheme.n_streams(K))};
  CVector sum = CVector::Zero(n);
  for (int k = 0; k < K; ++k) {
    const CVector dir = unit_or_first_axis(h.col(k));
    pre.P.col(pre.private_col(k)) = dir;
    sum += dir;
  }
  if (scheme.kind == Scheme::RS1Layer || scheme.kind == Scheme::HRS2Layer) {
    pre.P.col(0) = unit_or_first_axis(sum);
  }
  if (scheme.kind == Scheme::HRS2Layer) {
    for (int g = 0; g < scheme.n_groups(); ++g) {
      CVector gs = CVector::Zero(n);
      for (int k : scheme.groups[static_cast<size_t>(g)]) gs += pre.P.col(pre.private_col(k));
      pre.P.col(1 + g) = unit_or_first_axis(gs);
    }
  }
  pre.P = fill_budgets(pre.P, tx);
  return pre;
}

// MRT directions with the power tilted toward one stream at a time: the
// common stream (RS), then each private stream. 90% goes to the favored
// stream; nothing is zeroed, since a silent stream never wakes up again.
std::vector<Precoder> tilted_starts(const CMatrix& h, const SchemeSpec& scheme, const TransmitSetup& tx) {
  const int K = static_cast<int>(h.cols());
  const Precoder base = mrt_start(h, scheme, tx);
  std::vector<int> favored;
  if (scheme.kind == Scheme::RS1Layer || scheme.kind == Scheme::HRS2Layer) favored.push_back(0);
  for (int k = 0; k < K; ++k) favored.push_back(base.private_col(k));
  std::vector<Precoder> out{base};
  const auto n = static_cast<double>(base.P.cols());
  if (n < 2) return out;
  for (int col : favored) {
    Precoder p = base;
    for (Eigen::Index j = 0; j < p.P.cols(); ++j) {
      p.P.col(j) *= std::sqrt(j == col ? 0.9 * n : 0.1 * n / (n - 1.0));
    }
    p.P = fill_budgets(p.P, tx);
    out.push_back(std::move(p));
  }
  return out;
}

void check_common(const CMatrix& h, const RVector& weights, const TransmitSetup& tx,
                  const OptimizerSettings& settings) {
  tx.validate();
  settings.validate();
  if (h.rows() != tx.tx_total()) throw std::invalid_argument("channel rows must equal N*N_t");
  if (weights.size() != h.cols()) throw std::invalid_argument("one weight per user expected");
  if ((weights.array() < 0.0).any() || !(weights.sum() > 0.0)) {
    throw std::invalid_argument("weights must be nonnegative with a positive sum");
  }
}

}  // namespace

WmmseOutput wmmse_precoder(const CMatrix& h, const RVector& weights, const TransmitSetup& tx,
                           const Precoder& start, const OptimizerSettings& settings) {
  check_common(h, weights, tx, settings);
  start.scheme.validate(static_cast<int>(h.cols()));
  if (start.P.rows() != h.rows() || start.P.cols() != start.scheme.n_streams(static_cast<int>(h.cols()))) {
    throw std::invalid_argument("starting precoder has the wrong shape");
  }
  if (start.scheme.kind == Scheme::NOMA && start.scheme.decode_order.empty()) {
    WmmseOutput best;
    bool have = false;
    for (std::vector<int> order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
      Precoder p = start;
      p.scheme.decode_order = order;
      auto out = run_wmmse(h, weights, tx, p, settings);
      if (!have || out.wsr > best.wsr) {
        best = std::move(out);
        have = true;
      }
    }
    return best;
  }
  return run_wmmse(h, weights, tx, start, settings);
}

WmmseOutput wmmse_precoder(const CMatrix& h, const RVector& weights, const TransmitSetup& tx,
                           const SchemeSpec& scheme, const OptimizerSettings& settings) {
  check_common(h, weights, tx, settings);
  scheme.validate(static_cast<int>(h.cols()));
  WmmseOutput best;
  bool have = false;
  for (const auto& start : tilted_starts(h, scheme, tx)) {
    auto out = wmmse_precoder(h, weights, tx, start, settings);
    if (!have || out.wsr > best.wsr) {
      best = std::move(out);
      have = true;
    }
  }
  return best;
}

Precoder random_precoder(const SchemeSpec& scheme, int n_users, const TransmitSetup& tx,
                         Rng& rng) {
  tx.validate();
  scheme.validate(n_users);
  Precoder pre{scheme, CMatrix(tx.tx_total(), scheme.n_streams(n_users))};
  fill_complex_normal(pre.P, rng);
  pre.P = fill_budgets(pre.P, tx);
  return pre;
}

}  // namespace risrsma
