#include "risrsma/ris.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace risrsma {

RisArchitecture::RisArchitecture(Kind kind, std::vector<int> sizes)
    : kind_(kind), sizes_(std::move(sizes)) {
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("RIS group sizes must be positive");
  }
  elements_ = std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

RisArchitecture RisArchitecture::single(int elements) {
  if (elements < 0) throw std::invalid_argument("RIS element count must be >= 0");
  return RisArchitecture(Kind::SingleConnected,
                         std::vector<int>(static_cast<size_t>(elements), 1));
}

RisArchitecture RisArchitecture::group(std::vector<int> sizes) {
  if (sizes.empty()) throw std::invalid_argument("group-connected RIS needs >= 1 group");
  return RisArchitecture(Kind::GroupConnected, std::move(sizes));
}

RisArchitecture RisArchitecture::fully(int elements) {
  if (elements < 0) throw std::invalid_argument("RIS element count must be >= 0");
  if (elements == 0) return RisArchitecture(Kind::FullyConnected, {});
  return RisArchitecture(Kind::FullyConnected, {elements});
}

RisArchitecture RisArchitecture::parse(const std::string& text, int elements) {
  if (text == "single") return single(elements);
  if (text == "fully") return fully(elements);
  const std::string prefix = "group:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<int> sizes;
    std::stringstream ss(text.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        sizes.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad RIS group size '" + item + "' in '" + text + "'");
      }
    }
    auto arch = group(std::move(sizes));
    if (arch.elements() != elements) {
      throw std::invalid_argument("RIS group sizes in '" + text + "' sum to " +
                                  std::to_string(arch.elements()) + ", expected M = " +
                                  std::to_string(elements));
    }
    return arch;
  }
  throw std::invalid_argument("unknown RIS architecture '" + text +
                              "' (expected single, fully or group:<sizes>)");
}

int RisArchitecture::params_per_surface() const {
  if (kind_ == Kind::SingleConnected) return elements_;
  int n = 0;
  for (int s : sizes_) n += s * (s + 1) / 2;
  return n;
}

std::string RisArchitecture::to_string() const {
  switch (kind_) {
    case Kind::SingleConnected:
      return "single";
    case Kind::FullyConnected:
      return "fully";
    case Kind::GroupConnected: {
      std::string out = "group:";
      for (size_t i = 0; i < sizes_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(sizes_[i]);
      }
      return out;
    }
  }
  return "?";
}

RMatrix symmetric_from_upper(const RVector& upper, int n) {
  if (upper.size() != n * (n + 1) / 2) {
    throw std::invalid_argument("upper-triangle length does not match block size");
  }
  RMatrix x(n, n);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      x(i, j) = upper[idx];
      x(j, i) = upper[idx];
      ++idx;
    }
  }
  return x;
}

RVector upper_from_symmetric(const RMatrix& x) {
  const auto n = x.rows();
  RVector out(n * (n + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) out[idx++] = x(i, j);
  }
  return out;
}

CMatrix cayley_block(const RMatrix& x) {
  const auto n = x.rows();
  const cdouble j(0.0, 1.0);
  const CMatrix jx = j * x.cast<cdouble>();
  const CMatrix id = CMatrix::Identity(n, n);
  Eigen::PartialPivLU<CMatrix> lu(jx + id);
  // jX + I is never singular for real symmetric X: spec(jX) is imaginary.
  const CMatrix phi = lu.solve(jx - id);
  if (!phi.allFinite()) throw std::runtime_error("Cayley map produced non-finite block");
  return phi;
}

namespace {

CMatrix surface_from_params(const RisArchitecture& arch, const RVector& p) {
  const int m = arch.elements();
  if (arch.kind() == RisArchitecture::Kind::SingleConnected) {
    CVector d(m);
    for (int i = 0; i < m; ++i) d[i] = std::polar(1.0, p[i]);
    return d.asDiagonal();
  }
  CMatrix phi = CMatrix::Zero(m, m);
  Eigen::Index offset = 0;
  int row = 0;
  for (int s : arch.group_sizes()) {
    const int n = s * (s + 1) / 2;
    const RMatrix x = symmetric_from_upper(p.segment(offset, n), s);
    phi.block(row, row, s, s) = cayley_block(x);
    offset += n;
    row += s;
  }
  return phi;
}

}  // namespace

RisMatrix RisMatrix::from_params(const RisArchitecture& arch, int n_surfaces,
                                 const RVector& params) {
  if (n_surfaces < 0) throw std::invalid_argument("negative RIS count");
  const int per = arch.params_per_surface();
  if (params.size() != static_cast<Eigen::Index>(per) * n_surfaces) {
    throw std::invalid_argument("RIS parameter vector has the wrong length");
  }
  if (!params.allFinite()) throw std::invalid_argument("RIS parameters must be finite");
  std::vector<CMatrix> surfaces;
  surfaces.reserve(static_cast<size_t>(n_surfaces));
  for (int l = 0; l < n_surfaces; ++l) {
    surfaces.push_back(surface_from_params(arch, params.segment(l * per, per)));
  }
  return RisMatrix(arch, params, std::move(surfaces));
}

RisMatrix RisMatrix::from_surfaces(const RisArchitecture& arch,
                                   std::vector<CMatrix> surfaces) {
  for (const auto& s : surfaces) {
    if (s.rows() != arch.elements() || s.cols() != arch.elements()) {
      throw std::invalid_argument("RIS surface must be M x M for its architecture");
    }
  }
  return RisMatrix(arch, RVector(), std::move(surfaces));
}

CMatrix RisMatrix::full() const {
  const int m = arch_.elements();
  const int total = m * n_surfaces();
  CMatrix out = CMatrix::Zero(total, total);
  for (int l = 0; l < n_surfaces(); ++l) out.block(l * m, l * m, m, m) = surfaces_[static_cast<size_t>(l)];
  return out;
}

RisMatrix build_single_connected(const std::vector<RVector>& theta) {
  if (theta.empty()) throw std::invalid_argument("need at least one RIS");
  const auto m = theta.front().size();
  RVector params(m * static_cast<Eigen::Index>(theta.size()));
  for (size_t l = 0; l < theta.size(); ++l) {
    if (theta[l].size() != m) throw std::invalid_argument("all RISs need the same M");
    params.segment(static_cast<Eigen::Index>(l) * m, m) = theta[l];
  }
  return RisMatrix::from_params(RisArchitecture::single(static_cast<int>(m)),
                                static_cast<int>(theta.size()), params);
}

RisMatrix build_group_connected(const std::vector<std::vector<RMatrix>>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("need at least one RIS");
  std::vector<int> sizes;
  for (const auto& x : blocks.front()) sizes.push_back(static_cast<int>(x.rows()));
  const auto arch = sizes.size() == 1 ? RisArchitecture::fully(sizes.front())
                                      : RisArchitecture::group(sizes);
  const int per = arch.params_per_surface();
  RVector params(static_cast<Eigen::Index>(per) * static_cast<Eigen::Index>(blocks.size()));
  Eigen::Index offset = 0;
  for (const auto& surface : blocks) {
    if (surface.size() != sizes.size()) throw std::invalid_argument("all RISs need the same grouping");
    for (size_t s = 0; s < surface.size(); ++s) {
      const RMatrix& x = surface[s];
      if (x.rows() != sizes[s] || x.cols() != sizes[s]) {
        throw std::invalid_argument("all RISs need the same grouping");
      }
      if ((x - x.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("group-connected parameter block must be symmetric");
      }
      const RVector up = upper_from_symmetric(0.5 * (x + x.transpose()));
      params.segment(offset, up.size()) = up;
      offset += up.size();
    }
  }
  return RisMatrix::from_params(arch, static_cast<int>(blocks.size()), params);
}

RisValidation validate(const RisMatrix& ris, double tol) {
  const auto& arch = ris.arch();
  double worst = 0.0;
  for (int l = 0; l < ris.n_surfaces(); ++l) {
    const CMatrix& phi = ris.surface(l);
    if (!phi.allFinite()) return {std::numeric_limits<double>::infinity(), false};
    // Entries outside the declared blocks must vanish.
    int row = 0;
    CMatrix masked = phi;
    for (int s : arch.group_sizes()) {
      masked.block(row, row, s, s).setZero();
      row += s;
    }
    if (masked.size() > 0) worst = std::max(worst, masked.cwiseAbs().maxCoeff());

    row = 0;
    for (int s : arch.group_sizes()) {
      const CMatrix b = phi.block(row, row, s, s);
      if (arch.kind() == RisArchitecture::Kind::SingleConnected) {
        worst = std::max(worst, std::abs(std::abs(b(0, 0)) - 1.0));
      } else {
        const CMatrix id = CMatrix::Identity(s, s);
        worst = std::max(worst, (b.adjoint() * b - id).norm());
        worst = std::max(worst, (b - b.transpose()).norm());
      }
      row += s;
    }
  }
  return {worst, worst <= tol};
}

CMatrix effective_channels(const ChannelSet& ch) { return ch.direct; }

CMatrix effective_channels(const ChannelSet& ch, const RisMatrix& ris) {
  const auto lm = ch.ris_user.rows();
  if (ch.ap_ris.rows() != lm || ch.ap_ris.cols() != ch.direct.rows() ||
      ch.ris_user.cols() != ch.direct.cols()) {
    throw std::invalid_argument("inconsistent channel block shapes");
  }
  const int m = ris.arch().elements();
  if (static_cast<Eigen::Index>(m) * ris.n_surfaces() != lm) {
    throw std::invalid_argument("RIS size does not match channel blocks (L*M)");
  }
  CMatrix out = ch.direct;
  if (lm == 0) return out;
  // Phi^H H_r, one surface at a time.
  CMatrix reflected(lm, ch.ris_user.cols());
  for (int l = 0; l < ris.n_surfaces(); ++l) {
    reflected.middleRows(l * m, m).noalias() =
        ris.surface(l).adjoint() * ch.ris_user.middleRows(l * m, m);
  }
  out.noalias() += ch.ap_ris.adjoint() * reflected;
  return out;
}

RVector cayley_preimage_of_phases(const RisArchitecture& target, const RVector& theta,
                                  double clip) {
  if (target.kind() == RisArchitecture::Kind::SingleConnected) return theta;
  const int m = target.elements();
  if (m == 0 || theta.size() % m != 0) {
    throw std::invalid_argument("phase vector does not match the target architecture");
  }
  const auto n_surfaces = theta.size() / m;
  const int per = target.params_per_surface();
  RVector out = RVector::Zero(per * n_surfaces);
  for (Eigen::Index l = 0; l < n_surfaces; ++l) {
    Eigen::Index offset = l * per;
    int elem = 0;
    for (int s : target.group_sizes()) {
      RMatrix x = RMatrix::Zero(s, s);
      for (int i = 0; i < s; ++i) {
        const double half = 0.5 * theta[l * m + elem + i];
        double v = std::cos(half) / std::sin(half);
        if (std::isnan(v)) v = clip;
        x(i, i) = std::clamp(v, -clip, clip);
      }
      const RVector up = upper_from_symmetric(x);
      out.segment(offset, up.size()) = up;
      offset += up.size();
      elem += s;
    }
  }
  return out;
}

RisMatrix random_ris(const RisArchitecture& arch, int n_surfaces, Rng& rng) {
  const int per = arch.params_per_surface();
  RVector p(static_cast<Eigen::Index>(per) * n_surfaces);
  if (arch.kind() == RisArchitecture::Kind::SingleConnected) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (auto& v : p) v = phase(rng);
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : p) v = normal(rng);
  }
  return RisMatrix::from_params(arch, n_surfaces, p);
}

}  // namespace risrsma
