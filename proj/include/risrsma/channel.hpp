#pragma once

#include "risrsma/types.hpp"

namespace risrsma {

/// Network dimensions. L or M equal to zero means "no RIS".
struct Dimensions {
  int n_aps = 1;       // N
  int n_tx = 2;        // antennas per AP
  int n_users = 2;     // K
  int n_ris = 1;       // L
  int n_elements = 20; // M, per RIS

  int tx_total() const { return n_aps * n_tx; }
  int ris_total() const { return n_ris * n_elements; }
  bool has_ris() const { return n_ris > 0 && n_elements > 0; }
  void validate() const;
};

/// Link distances in meters. All users share the same distances.
struct Geometry {
  double d_ar = 50.0;  // AP -> RIS
  double d_ru = 10.0;  // RIS -> user
  double d_au = 0.0;   // AP -> user

  /// d_au = sqrt(d_ar^2 - d_ru^2); requires d_ar > d_ru.
  static Geometry from_default_rule(double d_ar, double d_ru);
  void validate() const;
};

struct FadingParams {
  double zeta0 = 1e-3;  // linear power gain at 1 m
  double eps_au = 3.0;
  double eps_ar = 1.9;
  double eps_ru = 1.7;
  double rician_kappa = 1.5848931924611136;  // 2 dB, linear

  void validate() const;
};

/// The three channel blocks of the received-signal model.
///   direct   : N*N_t x K, column k = h_{d,k}
///   ris_user : L*M   x K, column k = h_{r,k}
///   ap_ris   : L*M   x N*N_t (G)
struct ChannelSet {
  CMatrix direct;
  CMatrix ris_user;
  CMatrix ap_ris;

  int tx_total() const { return static_cast<int>(direct.rows()); }
  int n_users() const { return static_cast<int>(direct.cols()); }
  int ris_total() const { return static_cast<int>(ris_user.rows()); }
  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void validate() const;
};

struct CsiErrorModel {
  double alpha = 1.0;
  double sigma_e2 = 0.0;  // Watts

  /// sigma_e2 = sigma_z2 * (1 - alpha).
  static CsiErrorModel from_quality(double alpha, double sigma_z2);
  bool perfect() const { return sigma_e2 == 0.0; }
};

/// sqrt(zeta0 * d^-eps).
double pathloss_amplitude(double d, double eps, double zeta0);

/// Power ratio in dB to linear.
double db_to_linear(double db);
/// dBm to Watts.
double dbm_to_watts(double dbm);

CMatrix gen_direct_channels(const Dimensions& dims, const Geometry& geo,
                            const FadingParams& fading, Rng& rng);

/// amp * (sqrt(kappa/(1+kappa)) * 1 1^T + sqrt(1/(1+kappa)) * W), W ~ CN(0,1).
CMatrix gen_rician_channel(int rows, int cols, double amp, double kappa, Rng& rng);

/// Draw order is direct, ap_ris, ris_user.
ChannelSet generate_channels(const Dimensions& dims, const Geometry& geo,
                             const FadingParams& fading, Rng& rng);

/// Returns truth + E with E entries i.i.d. CN(0, sigma_e2) on all three blocks.
ChannelSet apply_csi_error(const ChannelSet& truth, const CsiErrorModel& model,
                           Rng& rng);

}  // namespace risrsma
