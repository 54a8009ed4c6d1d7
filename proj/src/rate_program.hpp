#pragma once

#include <vector>

#include "risrsma/rates.hpp"
#include "risrsma/types.hpp"

namespace risrsma::detail {

/// User `user` decodes stream `stream` treating `interferers` as noise.
struct DecodeEvent {
  int user = 0;
  int stream = 0;
  std::vector<int> interferers;
};

/// A weighted rate whose value is the min over its decode events
/// (a common stream must be decodable by every user in its set).
struct RateTerm {
  double weight = 0.0;
  std::vector<int> events;
};

/// Weighted sum rate of a scheme written as sum_t weight_t * min_{e in t} R_e.
/// With the common rates handed to the heaviest user this is exactly the
/// WSR-optimal value of sum_k u_k R_k^tot. Zero-weight terms are dropped.
struct RateProgram {
  int n_streams = 0;
  std::vector<DecodeEvent> events;
  std::vector<RateTerm> terms;

  /// NOMA needs an explicit decode order here.
  static RateProgram build(const SchemeSpec& scheme, int n_users, const RVector& weights);

  double event_rate(const CMatrix& h, const CMatrix& P, const DecodeEvent& e, double noise) const;
  double wsr(const CMatrix& h, const CMatrix& P, double noise) const;
};

}  // namespace risrsma::detail
