#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace risrsma {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Every stochastic routine takes one of these explicitly; nothing is global.
using Rng = std::mt19937_64;

/// Raised for configurations the library knows about but does not support,
/// e.g. NOMA with more than two users.
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fills `m` with i.i.d. CN(0, 1) entries.
void fill_complex_normal(CMatrix& m, Rng& rng);

/// splitmix64 finalizer over (base, salt); used to fan a master seed out
/// into independent per-task seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace risrsma
