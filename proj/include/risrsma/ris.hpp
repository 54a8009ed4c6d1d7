#pragma once

#include <string>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/types.hpp"

namespace risrsma {

/// Circuit topology of one RIS. All L surfaces in a network share it.
///
/// Single-connected: diagonal, unit-modulus entries, parameterized by phases.
/// Group-connected:  block diagonal, each M_s x M_s block unitary and
///                   symmetric, parameterized by one real symmetric X_s per
///                   block through Phi_s = (jX_s + I)^-1 (jX_s - I).
/// Fully-connected:  the group-connected case with a single block of size M.
class RisArchitecture {
 public:
  enum class Kind { SingleConnected, GroupConnected, FullyConnected };

  static RisArchitecture single(int elements);
  static RisArchitecture group(std::vector<int> sizes);
  static RisArchitecture fully(int elements);

  /// Parses "single", "fully" or "group:<s1>,<s2>,...". `elements` fixes M for
  /// the first two forms and must equal the group-size sum for the last.
  static RisArchitecture parse(const std::string& text, int elements);

  Kind kind() const { return kind_; }
  int elements() const { return elements_; }
  /// Block sizes; all ones for single-connected, {M} for fully-connected.
  const std::vector<int>& group_sizes() const { return sizes_; }
  /// Free real parameters per surface.
  int params_per_surface() const;
  std::string to_string() const;

  bool operator==(const RisArchitecture&) const = default;

 private:
  RisArchitecture(Kind kind, std::vector<int> sizes);
  Kind kind_;
  std::vector<int> sizes_;
  int elements_ = 0;
};

/// Immutable RIS state: architecture, the unconstrained parameters that
/// generated it (possibly empty for matrices built from raw blocks) and the
/// per-surface M x M coefficient matrices Phi_l.
class RisMatrix {
 public:
  /// Builds from the stacked parameter vector of all surfaces.
  static RisMatrix from_params(const RisArchitecture& arch, int n_surfaces,
                               const RVector& params);
  /// Wraps raw per-surface matrices without checking constraints; use
  /// validate() to audit them.
  static RisMatrix from_surfaces(const RisArchitecture& arch,
                                 std::vector<CMatrix> surfaces);

  const RisArchitecture& arch() const { return arch_; }
  int n_surfaces() const { return static_cast<int>(surfaces_.size()); }
  const RVector& params() const { return params_; }
  const CMatrix& surface(int l) const { return surfaces_.at(static_cast<size_t>(l)); }
  /// blkdiag(Phi_1, ..., Phi_L).
  CMatrix full() const;

 private:
  RisMatrix(RisArchitecture arch, RVector params, std::vector<CMatrix> surfaces)
      : arch_(std::move(arch)), params_(std::move(params)), surfaces_(std::move(surfaces)) {}
  RisArchitecture arch_;
  RVector params_;
  std::vector<CMatrix> surfaces_;
};

/// theta[l] holds the M phases of surface l.
RisMatrix build_single_connected(const std::vector<RVector>& theta);

/// blocks[l][s] is the real symmetric X_s of surface l. Throws
/// std::invalid_argument when a block is not symmetric within 1e-12.
RisMatrix build_group_connected(const std::vector<std::vector<RMatrix>>& blocks);

/// (jX + I)^-1 (jX - I) for a real symmetric X.
CMatrix cayley_block(const RMatrix& x);

/// Real symmetric matrix from its row-major upper triangle.
RMatrix symmetric_from_upper(const RVector& upper, int n);
RVector upper_from_symmetric(const RMatrix& x);

struct RisValidation {
  double residual = 0.0;
  bool pass = false;
};

/// Largest constraint residual of `ris` under its declared architecture.
RisValidation validate(const RisMatrix& ris, double tol);

/// Column k: h_{d,k} + (h_{r,k}^H Phi G)^H, i.e. H_d + G^H Phi^H H_r.
CMatrix effective_channels(const ChannelSet& ch, const RisMatrix& ris);
/// Direct channels only, for networks without RIS.
CMatrix effective_channels(const ChannelSet& ch);

/// Parameters for a fully/group-connected surface reproducing the given
/// single-connected phases: X = diag(cot(theta/2)), entries clipped to
/// +-clip where theta sits at the +1 point the map cannot reach.
RVector cayley_preimage_of_phases(const RisArchitecture& target, const RVector& theta,
                                  double clip = 1e7);

/// Uniform phases in [0, 2pi) or standard-normal symmetric X, per surface.
RisMatrix random_ris(const RisArchitecture& arch, int n_surfaces, Rng& rng);

}  // namespace risrsma
