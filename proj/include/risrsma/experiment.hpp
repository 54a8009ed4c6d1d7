#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "risrsma/config.hpp"
#include "risrsma/region.hpp"

namespace risrsma {

/// One CSV row of a rate-region experiment.
struct CsvRow {
  std::string scheme;
  std::string arch;
  double csi_alpha = 1.0;
  int run = 0;
  int weight_idx = 0;
  double u1 = 0.0;
  double u2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double wsr = 0.0;
  std::uint64_t seed = 0;
};

/// Thrown when a CSV does not follow the result schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* kCsvHeader = "scheme,arch,csi_alpha,run,weight_idx,u1,u2,R1,R2,wsr,seed";

std::string format_row(const CsvRow& row);
CsvRow parse_row(const std::string& line);

/// Channels the transmitter designs on in run `run`: drawn from seed
/// cfg.seed + run, then perturbed by the CSI error when CSI is imperfect.
struct RunChannels {
  std::uint64_t seed = 0;
  ChannelSet design;
};
RunChannels run_channels(const NetworkConfig& cfg, int run);

/// Called after each region with its full result (designs included).
using RegionObserver = std::function<void(int run, const std::optional<RisArchitecture>& arch,
                                          const SchemeSpec& scheme, const RegionResult& region)>;

/// Runs every (run, arch, scheme) region and streams rows to `out` (header
/// first), flushing after each region. Run r uses channel seed cfg.seed + r.
void run_experiment(const NetworkConfig& cfg, std::ostream& out, const RegionObserver& observer = {});
/// Same, writing to a file; throws std::runtime_error naming the path on I/O failure.
void run_experiment(const NetworkConfig& cfg, const std::filesystem::path& out_path);

std::vector<CsvRow> read_rows(std::istream& in);

/// Ensemble-averaged frontier for one (scheme, arch, csi_alpha) series.
struct SummaryPoint {
  std::string scheme;
  std::string arch;
  double csi_alpha = 1.0;
  int weight_idx = 0;
  double u1 = 0.0;
  double u2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double wsr = 0.0;
  int n_runs = 0;
  double r1_se = 0.0;  // standard error of the mean
  double r2_se = 0.0;
};

inline const char* kSummaryHeader =
    "scheme,arch,csi_alpha,weight_idx,u1,u2,R1,R2,wsr,n_runs,R1_se,R2_se";

/// Averages rows at matched weight indices across runs and keeps the
/// non-dominated points, series in order of first appearance.
std::vector<SummaryPoint> summarize(const std::vector<CsvRow>& rows);
void write_summary(const std::vector<SummaryPoint>& points, std::ostream& out);
void summarize_file(const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace risrsma
