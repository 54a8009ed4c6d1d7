#include "risrsma/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace risrsma {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::RS1Layer: return "rs1";
    case Scheme::HRS2Layer: return "hrs";
    case Scheme::SDMA: return "sdma";
    case Scheme::NOMA: return "noma";
  }
  return "?";
}

Scheme parse_scheme(const std::string& text) {
  if (text == "rs1") return Scheme::RS1Layer;
  if (text == "hrs") return Scheme::HRS2Layer;
  if (text == "sdma") return Scheme::SDMA;
  if (text == "noma") return Scheme::NOMA;
  throw std::invalid_argument("unknown scheme '" + text + "' (expected rs1, hrs, sdma or noma)");
}

int SchemeSpec::n_streams(int n_users) const {
  switch (kind) {
    case Scheme::RS1Layer: return n_users + 1;
    case Scheme::HRS2Layer: return n_users + n_groups() + 1;
    case Scheme::SDMA:
    case Scheme::NOMA: return n_users;
  }
  return 0;
}

void SchemeSpec::validate(int n_users) const {
  if (n_users < 1) throw std::invalid_argument("need at least one user");
  if (kind == Scheme::NOMA) {
    if (n_users != 2) throw UnsupportedConfiguration("NOMA is supported for K = 2 only");
    if (!decode_order.empty()) {
      if (decode_order.size() != 2 || decode_order[0] == decode_order[1] ||
          std::ranges::any_of(decode_order, [](int k) { return k < 0 || k > 1; })) {
        throw std::invalid_argument("NOMA decode order must be a permutation of {0, 1}");
      }
    }
  }
  if (kind == Scheme::HRS2Layer) {
    if (groups.empty()) throw std::invalid_argument("HRS needs at least one user group");
    std::vector<int> seen(static_cast<size_t>(n_users), 0);
    for (const auto& g : groups) {
      if (g.empty()) throw std::invalid_argument("HRS user groups must be non-empty");
      for (int k : g) {
        if (k < 0 || k >= n_users) throw std::invalid_argument("HRS group names an unknown user");
        ++seen[static_cast<size_t>(k)];
      }
    }
    if (std::ranges::any_of(seen, [](int c) { return c != 1; })) {
      throw std::invalid_argument("HRS groups must partition the users");
    }
  }
}

std::vector<int> SchemeSpec::group_of_users(int n_users) const {
  std::vector<int> out(static_cast<size_t>(n_users), -1);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int k : groups[g]) out.at(static_cast<size_t>(k)) = static_cast<int>(g);
  }
  return out;
}

int Precoder::private_col(int k) const {
  switch (scheme.kind) {
    case Scheme::RS1Layer: return 1 + k;
    case Scheme::HRS2Layer: return 1 + scheme.n_groups() + k;
    case Scheme::SDMA:
    case Scheme::NOMA: return k;
  }
  return k;
}

RVector ap_energy(const CMatrix& P, int n_tx) {
  if (n_tx < 1 || P.rows() % n_tx != 0) {
    throw std::invalid_argument("precoder rows are not a multiple of N_t");
  }
  const auto n_aps = P.rows() / n_tx;
  RVector e(n_aps);
  for (Eigen::Index n = 0; n < n_aps; ++n) e[n] = P.middleRows(n * n_tx, n_tx).squaredNorm();
  return e;
}

double power_residual(const CMatrix& P, int n_tx, const RVector& budgets) {
  const RVector e = ap_energy(P, n_tx);
  if (e.size() != budgets.size()) throw std::invalid_argument("one power budget per AP expected");
  return (e - budgets).maxCoeff();
}

namespace {

// |h_k^H p_j|^2 for every (user, stream); explicit dots keep each entry
// independent of the matrix width so related schemes agree bit for bit.
RMatrix stream_gains(const CMatrix& h, const CMatrix& P) {
  RMatrix g(h.cols(), P.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) g(k, j) = std::norm(h.col(k).dot(P.col(j)));
  }
  return g;
}

double rate_bits(double signal, double interference_plus_noise) {
  if (signal == 0.0) return 0.0;
  return std::log2(1.0 + signal / interference_plus_noise);
}

void check_inputs(const CMatrix& h, const Precoder& pre, double sigma_z2, Scheme expected) {
  if (pre.scheme.kind != expected) {
    throw std::invalid_argument("precoder scheme does not match the rate function");
  }
  if (!(sigma_z2 >= 0.0)) throw std::invalid_argument("noise power must be >= 0");
  const int k = static_cast<int>(h.cols());
  pre.scheme.validate(k);
  if (pre.P.rows() != h.rows()) throw std::invalid_argument("precoder/channel antenna mismatch");
  if (pre.P.cols() != pre.scheme.n_streams(k)) {
    throw std::invalid_argument("precoder has the wrong number of streams for its scheme");
  }
}

RateResult blank(const SchemeSpec& s, int k) {
  RateResult r;
  r.scheme = s;
  r.private_rates = RVector::Zero(k);
  r.common_alloc = RVector::Zero(k);
  r.user_totals = RVector::Zero(k);
  return r;
}

}  // namespace

RateResult rate_rs1(const CMatrix& h, const Precoder& pre, double sigma_z2) {
  check_inputs(h, pre, sigma_z2, Scheme::RS1Layer);
  const int K = static_cast<int>(h.cols());
  const RMatrix g = stream_gains(h, pre.P);
  RateResult r = blank(pre.scheme, K);
  r.common_per_user.resize(K);
  for (int k = 0; k < K; ++k) {
    double all_private = 0.0;
    double other_private = 0.0;
    for (int q = 0; q < K; ++q) {
      all_private += g(k, 1 + q);
      if (q != k) other_private += g(k, 1 + q);
    }
    r.common_per_user[k] = rate_bits(g(k, 0), all_private + sigma_z2);
    r.private_rates[k] = rate_bits(g(k, 1 + k), other_private + sigma_z2);
  }
  r.common_rate = r.common_per_user.minCoeff();
  r.user_totals = r.private_rates;
  return r;
}

RateResult rate_hrs(const CMatrix& h, const Precoder& pre, double sigma_z2) {
  check_inputs(h, pre, sigma_z2, Scheme::HRS2Layer);
  const int K = static_cast<int>(h.cols());
  const int G = pre.scheme.n_groups();
  const auto group_of = pre.scheme.group_of_users(K);
  const RMatrix g = stream_gains(h, pre.P);
  RateResult r = blank(pre.scheme, K);
  r.common_per_user.resize(K);
  r.inner_common_per_user.resize(K);
  r.inner_alloc = RVector::Zero(K);
  for (int k = 0; k < K; ++k) {
    const int own = group_of[static_cast<size_t>(k)];
    double all_inner = 0.0;
    double other_inner = 0.0;
    for (int o = 0; o < G; ++o) {
      all_inner += g(k, 1 + o);
      if (o != own) other_inner += g(k, 1 + o);
    }
    double all_private = 0.0;
    double other_private = 0.0;
    for (int q = 0; q < K; ++q) {
      all_private += g(k, pre.private_col(q));
      if (q != k) other_private += g(k, pre.private_col(q));
    }
    r.common_per_user[k] = rate_bits(g(k, 0), all_inner + all_private + sigma_z2);
    r.inner_common_per_user[k] =
        rate_bits(g(k, 1 + own), other_inner + all_private + sigma_z2);
    r.private_rates[k] =
        rate_bits(g(k, pre.private_col(k)), other_inner + other_private + sigma_z2);
  }
  r.common_rate = r.common_per_user.minCoeff();
  r.inner_common_rates.resize(G);
  for (int o = 0; o < G; ++o) {
    double m = std::numeric_limits<double>::infinity();
    for (int k : pre.scheme.groups[static_cast<size_t>(o)]) m = std::min(m, r.inner_common_per_user[k]);
    r.inner_common_rates[o] = m;
  }
  r.user_totals = r.private_rates;
  return r;
}

RateResult rate_sdma(const CMatrix& h, const Precoder& pre, double sigma_z2) {
  check_inputs(h, pre, sigma_z2, Scheme::SDMA);
  const int K = static_cast<int>(h.cols());
  const RMatrix g = stream_gains(h, pre.P);
  RateResult r = blank(pre.scheme, K);
  for (int k = 0; k < K; ++k) {
    double other = 0.0;
    for (int q = 0; q < K; ++q) {
      if (q != k) other += g(k, q);
    }
    r.private_rates[k] = rate_bits(g(k, k), other + sigma_z2);
  }
  r.user_totals = r.private_rates;
  return r;
}

RateResult rate_noma(const CMatrix& h, const Precoder& pre, double sigma_z2) {
  check_inputs(h, pre, sigma_z2, Scheme::NOMA);
  if (pre.scheme.decode_order.size() != 2) {
    throw std::invalid_argument("NOMA rates need an explicit decode order");
  }
  const int w = pre.scheme.decode_order[0];
  const int s = pre.scheme.decode_order[1];
  const RMatrix g = stream_gains(h, pre.P);
  RateResult r = blank(pre.scheme, 2);
  r.first_stream_rates.resize(2);
  r.first_stream_rates[w] = rate_bits(g(w, w), g(w, s) + sigma_z2);
  r.first_stream_rates[s] = rate_bits(g(s, w), g(s, s) + sigma_z2);
  r.private_rates[w] = r.first_stream_rates.minCoeff();
  r.private_rates[s] = rate_bits(g(s, s), sigma_z2);
  r.user_totals = r.private_rates;
  return r;
}

RateResult compute_rates(const CMatrix& h, const Precoder& pre, double sigma_z2) {
  switch (pre.scheme.kind) {
    case Scheme::RS1Layer: return rate_rs1(h, pre, sigma_z2);
    case Scheme::HRS2Layer: return rate_hrs(h, pre, sigma_z2);
    case Scheme::SDMA: return rate_sdma(h, pre, sigma_z2);
    case Scheme::NOMA: return rate_noma(h, pre, sigma_z2);
  }
  throw std::invalid_argument("unknown scheme");
}

RateResult totals(RateResult res, const RVector& alloc, const RVector& inner_alloc) {
  const auto K = res.private_rates.size();
  constexpr double slack = 1e-12;
  const bool has_common =
      res.scheme.kind == Scheme::RS1Layer || res.scheme.kind == Scheme::HRS2Layer;
  if (alloc.size() != K) throw std::invalid_argument("allocation needs one entry per user");
  if ((alloc.array() < 0.0).any()) throw std::invalid_argument("common allocation must be >= 0");
  if (!has_common && (alloc.array() != 0.0).any()) {
    throw std::invalid_argument("scheme has no common stream to allocate");
  }
  if (alloc.sum() > res.common_rate * (1.0 + slack) + slack) {
    throw std::invalid_argument("common allocation exceeds the common rate");
  }
  res.common_alloc = alloc;
  res.user_totals = alloc + res.private_rates;
  if (res.scheme.kind == Scheme::HRS2Layer) {
    RVector inner = inner_alloc.size() == 0 ? RVector::Zero(K) : inner_alloc;
    if (inner.size() != K) throw std::invalid_argument("inner allocation needs one entry per user");
    if ((inner.array() < 0.0).any()) throw std::invalid_argument("inner allocation must be >= 0");
    for (size_t g = 0; g < res.scheme.groups.size(); ++g) {
      double sum = 0.0;
      for (int k : res.scheme.groups[g]) sum += inner[k];
      const double cap = res.inner_common_rates[static_cast<Eigen::Index>(g)];
      if (sum > cap * (1.0 + slack) + slack) {
        throw std::invalid_argument("inner-group allocation exceeds its common rate");
      }
    }
    res.inner_alloc = inner;
    res.user_totals += inner;
  } else if (inner_alloc.size() != 0 && (inner_alloc.array() != 0.0).any()) {
    throw std::invalid_argument("inner allocation only applies to HRS");
  }
  return res;
}

namespace {

// Splits `amount` evenly over the highest-weight members of `users`.
void give_to_heaviest(const std::vector<int>& users, const RVector& weights, double amount,
                      RVector& alloc) {
  double best = -std::numeric_limits<double>::infinity();
  for (int k : users) best = std::max(best, weights[k]);
  std::vector<int> top;
  for (int k : users) {
    if (weights[k] >= best - 1e-12 * std::max(1.0, std::abs(best))) top.push_back(k);
  }
  for (int k : top) alloc[k] += amount / static_cast<double>(top.size());
}

}  // namespace

RateResult with_optimal_allocation(RateResult res, const RVector& weights) {
  const auto K = res.private_rates.size();
  if (weights.size() != K) throw std::invalid_argument("one weight per user expected");
  RVector alloc = RVector::Zero(K);
  RVector inner = RVector::Zero(K);
  std::vector<int> everyone(static_cast<size_t>(K));
  std::iota(everyone.begin(), everyone.end(), 0);
  if (res.scheme.kind == Scheme::RS1Layer || res.scheme.kind == Scheme::HRS2Layer) {
    give_to_heaviest(everyone, weights, res.common_rate, alloc);
  }
  if (res.scheme.kind == Scheme::HRS2Layer) {
    for (size_t g = 0; g < res.scheme.groups.size(); ++g) {
      give_to_heaviest(res.scheme.groups[g], weights,
                       res.inner_common_rates[static_cast<Eigen::Index>(g)], inner);
    }
    // Bypass the cap check: these shares are the caps themselves.
    res.common_alloc = alloc;
    res.inner_alloc = inner;
    res.user_totals = alloc + inner + res.private_rates;
    return res;
  }
  res.common_alloc = alloc;
  res.user_totals = alloc + res.private_rates;
  return res;
}

double weighted_sum(const RateResult& res, const RVector& weights) {
  return weights.dot(res.user_totals);
}

RateResult average_rates(const std::vector<RateResult>& samples) {
  if (samples.empty()) throw std::invalid_argument("cannot average zero rate samples");
  RateResult out = samples.front();
  const double n = static_cast<double>(samples.size());
  auto mean_of = [&](RVector RateResult::*field) {
    RVector acc = RVector::Zero((samples.front().*field).size());
    for (const auto& s : samples) acc += s.*field;
    return RVector(acc / n);
  };
  out.private_rates = mean_of(&RateResult::private_rates);
  if (out.common_per_user.size() > 0) {
    out.common_per_user = mean_of(&RateResult::common_per_user);
    out.common_rate = out.common_per_user.minCoeff();
  }
  if (out.inner_common_per_user.size() > 0) {
    out.inner_common_per_user = mean_of(&RateResult::inner_common_per_user);
    for (size_t g = 0; g < out.scheme.groups.size(); ++g) {
      double m = std::numeric_limits<double>::infinity();
      for (int k : out.scheme.groups[g]) m = std::min(m, out.inner_common_per_user[k]);
      out.inner_common_rates[static_cast<Eigen::Index>(g)] = m;
    }
  }
  if (out.first_stream_rates.size() > 0) {
    out.first_stream_rates = mean_of(&RateResult::first_stream_rates);
    // Short-term convention: the first stream's rate is the min of averages.
    const int w = out.scheme.decode_order[0];
    out.private_rates[w] = out.first_stream_rates.minCoeff();
  }
  const auto K = out.private_rates.size();
  out.common_alloc = RVector::Zero(K);
  if (out.inner_alloc.size() > 0) out.inner_alloc = RVector::Zero(K);
  out.user_totals = out.private_rates;
  return out;
}

}  // namespace risrsma
