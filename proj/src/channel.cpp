#include "risrsma/channel.hpp"

#include <cmath>
#include <string>

namespace risrsma {

void fill_complex_normal(CMatrix& m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(0.5);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cdouble(scale * re, scale * im);
    }
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Dimensions::validate() const {
  if (n_aps < 1) throw std::invalid_argument("N (n_aps) must be >= 1");
  if (n_tx < 1) throw std::invalid_argument("N_t (n_tx) must be >= 1");
  if (n_users < 1) throw std::invalid_argument("K (n_users) must be >= 1");
  if (n_ris < 0) throw std::invalid_argument("L (n_ris) must be >= 0");
  if (n_elements < 0) throw std::invalid_argument("M (n_elements) must be >= 0");
}

Geometry Geometry::from_default_rule(double d_ar, double d_ru) {
  if (!(d_ar > d_ru) || !(d_ru > 0.0)) {
    throw std::invalid_argument("default geometry rule needs d_ar > d_ru > 0");
  }
  return Geometry{d_ar, d_ru, std::sqrt(d_ar * d_ar - d_ru * d_ru)};
}

void Geometry::validate() const {
  if (!(d_ar > 0.0) || !(d_ru > 0.0) || !(d_au > 0.0)) {
    throw std::invalid_argument("all link distances must be > 0");
  }
}

void FadingParams::validate() const {
  if (!(zeta0 > 0.0)) throw std::invalid_argument("zeta0 must be > 0");
  if (!(eps_au > 0.0) || !(eps_ar > 0.0) || !(eps_ru > 0.0)) {
    throw std::invalid_argument("path-loss exponents must be > 0");
  }
  if (!(rician_kappa >= 0.0)) throw std::invalid_argument("rician_kappa must be >= 0");
}

void ChannelSet::validate() const {
  const auto k = direct.cols();
  if (ris_user.cols() != k) {
    throw std::invalid_argument("ris_user must have one column per user");
  }
  if (ap_ris.rows() != ris_user.rows() || ap_ris.cols() != direct.rows()) {
    throw std::invalid_argument("ap_ris must be (L*M) x (N*N_t)");
  }
  if (!direct.allFinite() || !ris_user.allFinite() || !ap_ris.allFinite()) {
    throw std::invalid_argument("channel entries must be finite");
  }
}

CsiErrorModel CsiErrorModel::from_quality(double alpha, double sigma_z2) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("CSI quality alpha must lie in [0, 1]");
  }
  if (!(sigma_z2 >= 0.0)) throw std::invalid_argument("sigma_z2 must be >= 0");
  return CsiErrorModel{alpha, sigma_z2 * (1.0 - alpha)};
}

double pathloss_amplitude(double d, double eps, double zeta0) {
  if (!(d > 0.0)) throw std::invalid_argument("distance must be > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("path-loss exponent must be > 0");
  if (!(zeta0 > 0.0)) throw std::invalid_argument("zeta0 must be > 0");
  return std::sqrt(zeta0 * std::pow(d, -eps));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

CMatrix gen_direct_channels(const Dimensions& dims, const Geometry& geo,
                            const FadingParams& fading, Rng& rng) {
  dims.validate();
  const double amp = pathloss_amplitude(geo.d_au, fading.eps_au, fading.zeta0);
  CMatrix h(dims.tx_total(), dims.n_users);
  fill_complex_normal(h, rng);
  return amp * h;
}

CMatrix gen_rician_channel(int rows, int cols, double amp, double kappa, Rng& rng) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("Rician factor must be >= 0");
  if (!(amp >= 0.0)) throw std::invalid_argument("amplitude gain must be >= 0");
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative channel shape");
  CMatrix nlos(rows, cols);
  fill_complex_normal(nlos, rng);
  const double los_w = std::sqrt(kappa / (1.0 + kappa));
  const double nlos_w = std::sqrt(1.0 / (1.0 + kappa));
  CMatrix h = nlos_w * nlos;
  h.array() += cdouble(los_w, 0.0);
  return amp * h;
}

ChannelSet generate_channels(const Dimensions& dims, const Geometry& geo,
                             const FadingParams& fading, Rng& rng) {
  dims.validate();
  geo.validate();
  fading.validate();
  ChannelSet ch;
  ch.direct = gen_direct_channels(dims, geo, fading, rng);
  const int lm = dims.ris_total();
  const double amp_ar = pathloss_amplitude(geo.d_ar, fading.eps_ar, fading.zeta0);
  const double amp_ru = pathloss_amplitude(geo.d_ru, fading.eps_ru, fading.zeta0);
  ch.ap_ris = gen_rician_channel(lm, dims.tx_total(), amp_ar, fading.rician_kappa, rng);
  ch.ris_user = gen_rician_channel(lm, dims.n_users, amp_ru, fading.rician_kappa, rng);
  return ch;
}

ChannelSet apply_csi_error(const ChannelSet& truth, const CsiErrorModel& model,
                           Rng& rng) {
  if (!(model.sigma_e2 >= 0.0)) throw std::invalid_argument("sigma_e2 must be >= 0");
  ChannelSet est = truth;
  if (model.sigma_e2 == 0.0) return est;
  const double sd = std::sqrt(model.sigma_e2);
  auto perturb = [&](CMatrix& m) {
    CMatrix e(m.rows(), m.cols());
    fill_complex_normal(e, rng);
    m += sd * e;
  };
  perturb(est.direct);
  perturb(est.ap_ris);
  perturb(est.ris_user);
  return est;
}

}  // namespace risrsma
