#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/optimizer.hpp"
#include "risrsma/rates.hpp"
#include "risrsma/ris.hpp"

namespace risrsma {

/// Configuration rejected by validation; the message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsiSettings {
  double alpha = 1.0;  // 1 = perfect CSI
  int samples = 2000;  // error draws for ergodic evaluation

  bool perfect() const { return alpha >= 1.0; }
};

/// Everything one experiment needs. All powers are stored in Watts and all
/// gains linear; the file format accepts dB forms.
struct NetworkConfig {
  std::string name;
  Dimensions dims;
  std::vector<std::vector<int>> groups;  // HRS user partition
  RVector ap_power;                      // Watts, one per AP
  double sigma_z2 = 1e-10;               // Watts
  Geometry geometry = Geometry::from_default_rule(50.0, 10.0);
  FadingParams fading;
  CsiSettings csi;
  std::vector<SchemeSpec> schemes;
  std::vector<std::optional<RisArchitecture>> archs;  // empty optional = no RIS
  OptimizerSettings optimizer;
  int mc_runs = 50;
  int n_weights = 21;
  std::uint64_t seed = 1;

  TransmitSetup transmit() const;
  CsiErrorModel csi_error() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Reads and validates a JSON config; unknown keys are errors.
NetworkConfig load_config(const std::filesystem::path& path);
NetworkConfig parse_config(const std::string& json_text);

/// "none" or anything RisArchitecture::parse accepts.
std::optional<RisArchitecture> parse_arch(const std::string& text, int elements);
std::string arch_label(const std::optional<RisArchitecture>& arch);

/// Scheme from its CLI name, filling HRS groups from the config.
SchemeSpec scheme_from_name(const std::string& name, const std::vector<std::vector<int>>& groups,
                            int n_users);

}  // namespace risrsma
