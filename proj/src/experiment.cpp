#include "risrsma/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace risrsma {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s, const char* column) {
  std::istringstream ss(s);
  ss.imbue(std::locale::classic());
  T v{};
  ss >> v;
  if (s.empty() || ss.fail() || !ss.eof()) {
    throw SchemaError(std::string("column ") + column + ": cannot parse '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_row(const CsvRow& r) {
  std::string s;
  s += r.scheme + ',' + r.arch + ',' + num(r.csi_alpha) + ',' + std::to_string(r.run) + ',' +
       std::to_string(r.weight_idx) + ',' + num(r.u1) + ',' + num(r.u2) + ',' + num(r.r1) + ',' +
       num(r.r2) + ',' + num(r.wsr) + ',' + std::to_string(r.seed);
  return s;
}

CsvRow parse_row(const std::string& line) {
  const auto c = split(line);
  if (c.size() != 11) throw SchemaError("expected 11 columns, got " + std::to_string(c.size()));
  CsvRow r;
  r.scheme = c[0];
  r.arch = c[1];
  r.csi_alpha = parse_number<double>(c[2], "csi_alpha");
  r.run = parse_number<int>(c[3], "run");
  r.weight_idx = parse_number<int>(c[4], "weight_idx");
  r.u1 = parse_number<double>(c[5], "u1");
  r.u2 = parse_number<double>(c[6], "u2");
  r.r1 = parse_number<double>(c[7], "R1");
  r.r2 = parse_number<double>(c[8], "R2");
  r.wsr = parse_number<double>(c[9], "wsr");
  r.seed = parse_number<std::uint64_t>(c[10], "seed");
  return r;
}

RunChannels run_channels(const NetworkConfig& cfg, int run) {
  RunChannels rc;
  rc.seed = cfg.seed + static_cast<std::uint64_t>(run);
  Rng rng(rc.seed);
  rc.design = generate_channels(cfg.dims, cfg.geometry, cfg.fading, rng);
  // The transmitter only ever sees the estimate.
  const CsiErrorModel err = cfg.csi_error();
  if (!err.perfect()) rc.design = apply_csi_error(rc.design, err, rng);
  return rc;
}

void run_experiment(const NetworkConfig& cfg, std::ostream& out, const RegionObserver& observer) {
  cfg.validate();
  const TransmitSetup tx = cfg.transmit();
  const CsiErrorModel err = cfg.csi_error();
  std::optional<CsiEvaluation> csi;
  if (!err.perfect()) csi = CsiEvaluation{err, cfg.csi.samples};

  out << kCsvHeader << '\n';
  for (int run = 0; run < cfg.mc_runs; ++run) {
    const auto [seed, ch] = run_channels(cfg, run);

    for (const auto& arch : cfg.archs) {
      SharedDesigns shared;
      for (const auto& scheme : cfg.schemes) {
        const auto region = rate_region(ch, tx, scheme, arch, cfg.n_weights, cfg.optimizer, seed, csi, &shared);
        for (const auto& p : region.points) {
          CsvRow row{to_string(scheme.kind), arch_label(arch), cfg.csi.alpha, run, p.weight_idx,
                     p.u1, p.u2, p.r1, p.r2, p.wsr, seed};
          out << format_row(row) << '\n';
        }
        out.flush();
        if (observer) observer(run, arch, scheme, region);
        if (!out) throw std::runtime_error("write failed");
      }
    }
  }
}

void run_experiment(const NetworkConfig& cfg, const std::filesystem::path& out_path) {
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + out_path.string() + " for writing");
  try {
    run_experiment(cfg, out);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw std::runtime_error(out_path.string() + ": " + e.what());
  }
}

std::vector<CsvRow> read_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw SchemaError("unexpected header '" + line + "'");
  std::vector<CsvRow> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      rows.push_back(parse_row(line));
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<SummaryPoint> summarize(const std::vector<CsvRow>& rows) {
  struct Acc {
    double u1 = 0, u2 = 0, s1 = 0, s2 = 0, q1 = 0, q2 = 0, w = 0;
    int n = 0;
  };
  struct Series {
    std::string scheme, arch;
    double alpha = 1.0;
    std::map<int, Acc> points;
  };
  std::vector<Series> series;
  for (const auto& r : rows) {
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) {
      return s.scheme == r.scheme && s.arch == r.arch && s.alpha == r.csi_alpha;
    });
    if (it == series.end()) {
      series.push_back({r.scheme, r.arch, r.csi_alpha, {}});
      it = std::prev(series.end());
    }
    auto& a = it->points[r.weight_idx];
    a.u1 = r.u1;
    a.u2 = r.u2;
    a.s1 += r.r1;
    a.s2 += r.r2;
    a.q1 += r.r1 * r.r1;
    a.q2 += r.r2 * r.r2;
    a.w += r.wsr;
    ++a.n;
  }

  auto std_err = [](double sum, double sq, int n) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };

  std::vector<SummaryPoint> out;
  for (const auto& s : series) {
    std::vector<RegionPoint> pts;
    std::vector<SummaryPoint> full;
    for (const auto& [idx, a] : s.points) {
      const double n = a.n;
      pts.push_back({idx, a.u1, a.u2, a.s1 / n, a.s2 / n, a.w / n});
      full.push_back({s.scheme, s.arch, s.alpha, idx, a.u1, a.u2, a.s1 / n, a.s2 / n, a.w / n, a.n,
                      std_err(a.s1, a.q1, a.n), std_err(a.s2, a.q2, a.n)});
    }
    // The two highest indices are the corners.
    const int n_weights = s.points.rbegin()->first - 1;
    for (int k : pareto_frontier(pts, n_weights)) out.push_back(full[static_cast<size_t>(k)]);
  }
  return out;
}

void write_summary(const std::vector<SummaryPoint>& points, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const auto& p : points) {
    out << p.scheme << ',' << p.arch << ',' << num(p.csi_alpha) << ',' << p.weight_idx << ','
        << num(p.u1) << ',' << num(p.u2) << ',' << num(p.r1) << ',' << num(p.r2) << ','
        << num(p.wsr) << ',' << p.n_runs << ',' << num(p.r1_se) << ',' << num(p.r2_se) << '\n';
  }
}

void summarize_file(const std::filesystem::path& in_path, const std::filesystem::path& out_path) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path.string());
  std::vector<CsvRow> rows;
  try {
    rows = read_rows(in);
  } catch (const SchemaError& e) {
    throw SchemaError(in_path.string() + ": " + e.what());
  }
  if (rows.empty()) throw SchemaError(in_path.string() + ": no data rows");
  const auto summary = summarize(rows);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + out_path.string() + " for writing");
  write_summary(summary, out);
  if (!out) throw std::runtime_error("write failed: " + out_path.string());
}

}  // namespace risrsma
