#include "rate_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risrsma::detail {

namespace {

double max_weight(const RVector& w, const std::vector<int>& users) {
  double m = 0.0;
  for (int k : users) m = std::max(m, w[k]);
  return m;
}

}  // namespace

RateProgram RateProgram::build(const SchemeSpec& scheme, int K, const RVector& weights) {
  scheme.validate(K);
  if (weights.size() != K) throw std::invalid_argument("one weight per user expected");
  if ((weights.array() < 0.0).any() || !(weights.sum() > 0.0)) {
    throw std::invalid_argument("weights must be nonnegative with a positive sum");
  }
  RateProgram prog;
  prog.n_streams = scheme.n_streams(K);
  std::vector<int> everyone(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k) everyone[static_cast<size_t>(k)] = k;

  auto add_term = [&](double weight, std::vector<DecodeEvent> evs) {
    if (!(weight > 0.0)) return;
    RateTerm t{weight, {}};
    for (auto& e : evs) {
      t.events.push_back(static_cast<int>(prog.events.size()));
      prog.events.push_back(std::move(e));
    }
    prog.terms.push_back(std::move(t));
  };

  switch (scheme.kind) {
    case Scheme::RS1Layer: {
      std::vector<int> privates;
      for (int q = 0; q < K; ++q) privates.push_back(1 + q);
      std::vector<DecodeEvent> common;
      for (int k = 0; k < K; ++k) common.push_back({k, 0, privates});
      add_term(max_weight(weights, everyone), std::move(common));
      for (int k = 0; k < K; ++k) {
        std::vector<int> others;
        for (int q = 0; q < K; ++q) {
          if (q != k) others.push_back(1 + q);
        }
        add_term(weights[k], {{k, 1 + k, others}});
      }
      break;
    }
    case Scheme::HRS2Layer: {
      const int G = scheme.n_groups();
      const auto group_of = scheme.group_of_users(K);
      auto pcol = [&](int q) { return 1 + G + q; };
      std::vector<DecodeEvent> outer;
      for (int k = 0; k < K; ++k) {
        std::vector<int> intf;
        for (int o = 0; o < G; ++o) intf.push_back(1 + o);
        for (int q = 0; q < K; ++q) intf.push_back(pcol(q));
        outer.push_back({k, 0, intf});
      }
      add_term(max_weight(weights, everyone), std::move(outer));
      for (int g = 0; g < G; ++g) {
        std::vector<DecodeEvent> inner;
        for (int k : scheme.groups[static_cast<size_t>(g)]) {
          std::vector<int> intf;
          for (int o = 0; o < G; ++o) {
            if (o != g) intf.push_back(1 + o);
          }
          for (int q = 0; q < K; ++q) intf.push_back(pcol(q));
          inner.push_back({k, 1 + g, intf});
        }
        add_term(max_weight(weights, scheme.groups[static_cast<size_t>(g)]), std::move(inner));
      }
      for (int k = 0; k < K; ++k) {
        std::vector<int> intf;
        for (int o = 0; o < G; ++o) {
          if (o != group_of[static_cast<size_t>(k)]) intf.push_back(1 + o);
        }
        for (int q = 0; q < K; ++q) {
          if (q != k) intf.push_back(pcol(q));
        }
        add_term(weights[k], {{k, pcol(k), intf}});
      }
      break;
    }
    case Scheme::SDMA: {
      for (int k = 0; k < K; ++k) {
        std::vector<int> others;
        for (int q = 0; q < K; ++q) {
          if (q != k) others.push_back(q);
        }
        add_term(weights[k], {{k, k, others}});
      }
      break;
    }
    case Scheme::NOMA: {
      if (scheme.decode_order.size() != 2) {
        throw std::invalid_argument("NOMA rate program needs an explicit decode order");
      }
      const int w = scheme.decode_order[0];
      const int s = scheme.decode_order[1];
      add_term(weights[w], {{w, w, {s}}, {s, w, {s}}});
      add_term(weights[s], {{s, s, {}}});
      break;
    }
  }
  return prog;
}

double RateProgram::event_rate(const CMatrix& h, const CMatrix& P, const DecodeEvent& e,
                               double noise) const {
  const auto& hk = h.col(e.user);
  const double signal = std::norm(hk.dot(P.col(e.stream)));
  if (signal == 0.0) return 0.0;
  double intf = 0.0;
  for (int i : e.interferers) intf += std::norm(hk.dot(P.col(i)));
  return std::log2(1.0 + signal / (intf + noise));
}

double RateProgram::wsr(const CMatrix& h, const CMatrix& P, double noise) const {
  double total = 0.0;
  for (const auto& t : terms) {
    double m = std::numeric_limits<double>::infinity();
    for (int e : t.events) m = std::min(m, event_rate(h, P, events[static_cast<size_t>(e)], noise));
    total += t.weight * m;
  }
  return total;
}

}  // namespace risrsma::detail
