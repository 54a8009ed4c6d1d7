#pragma once

#include <string>
#include <vector>

#include "risrsma/types.hpp"

namespace risrsma {

enum class Scheme { RS1Layer, HRS2Layer, SDMA, NOMA };

/// "rs1", "hrs", "sdma", "noma".
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& text);

/// Multiple-access scheme plus the structure it needs: the user partition
/// for HRS and the SIC order for NOMA (first-decoded user first; empty lets
/// the optimizer try both orders).
struct SchemeSpec {
  Scheme kind = Scheme::RS1Layer;
  std::vector<std::vector<int>> groups;
  std::vector<int> decode_order;

  static SchemeSpec rs1() { return {Scheme::RS1Layer, {}, {}}; }
  static SchemeSpec sdma() { return {Scheme::SDMA, {}, {}}; }
  static SchemeSpec noma(std::vector<int> order = {}) { return {Scheme::NOMA, {}, std::move(order)}; }
  static SchemeSpec hrs(std::vector<std::vector<int>> groups) {
    return {Scheme::HRS2Layer, std::move(groups), {}};
  }

  int n_groups() const { return static_cast<int>(groups.size()); }
  int n_streams(int n_users) const;
  /// Throws std::invalid_argument (UnsupportedConfiguration for NOMA K != 2)
  /// when the structure does not fit K users.
  void validate(int n_users) const;
  /// Group index of each user (HRS only).
  std::vector<int> group_of_users(int n_users) const;

  bool operator==(const SchemeSpec&) const = default;
};

/// Column layout of P:
///   RS1Layer  [p_c, p_p1..p_pK]
///   HRS2Layer [p_c1, p_c2,1..p_c2,G, p_p1..p_pK]
///   SDMA      [p_p1..p_pK]
///   NOMA      [p_1..p_K]
/// Streams are unit-power, so AP n transmits the energy of its N_t rows.
struct Precoder {
  SchemeSpec scheme;
  CMatrix P;

  int common_col() const { return 0; }
  int inner_common_col(int g) const { return 1 + g; }
  int private_col(int k) const;
};

/// Transmit energy of each AP's row block of P.
RVector ap_energy(const CMatrix& P, int n_tx);
/// max_n (energy_n - budget_n); <= 0 when the precoder is feasible.
double power_residual(const CMatrix& P, int n_tx, const RVector& budgets);

/// Per-user rate breakdown in bit/s/Hz.
struct RateResult {
  SchemeSpec scheme;
  RVector common_per_user;        // R_{c,k} (RS1) or R_{c1,k} (HRS)
  double common_rate = 0.0;       // min_k of the above
  RVector inner_common_per_user;  // HRS: R_{c2,g(k),k}
  RVector inner_common_rates;     // HRS: R_{c2,g}, one per group
  RVector first_stream_rates;     // NOMA: rate of the first-decoded stream at each user
  RVector private_rates;          // R_{p,k}; NOMA: the per-user rates
  RVector common_alloc;           // c_k
  RVector inner_alloc;            // HRS: per-user share of its group's inner stream
  RVector user_totals;            // c_k + inner share + R_{p,k}
};

RateResult rate_rs1(const CMatrix& h_eff, const Precoder& pre, double sigma_z2);
RateResult rate_hrs(const CMatrix& h_eff, const Precoder& pre, double sigma_z2);
RateResult rate_sdma(const CMatrix& h_eff, const Precoder& pre, double sigma_z2);
/// K = 2 only; needs an explicit decode order on the precoder.
RateResult rate_noma(const CMatrix& h_eff, const Precoder& pre, double sigma_z2);
/// Dispatches on pre.scheme.kind.
RateResult compute_rates(const CMatrix& h_eff, const Precoder& pre, double sigma_z2);

/// Applies a common-rate allocation and fills user_totals. Throws
/// std::invalid_argument when the allocation is negative or exceeds a cap.
RateResult totals(RateResult res, const RVector& alloc, const RVector& inner_alloc = RVector());

/// Allocation maximizing sum_k u_k R_k^tot: each common stream goes to its
/// highest-weight decoder set member, split evenly between exact ties.
RateResult with_optimal_allocation(RateResult res, const RVector& weights);

double weighted_sum(const RateResult& res, const RVector& weights);

/// Averages per-user quantities first, then re-takes every min (common,
/// inner-common, NOMA first stream). Allocations are reset to zero.
RateResult average_rates(const std::vector<RateResult>& samples);

}  // namespace risrsma
