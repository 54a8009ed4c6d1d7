#include "risrsma/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace risrsma {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::string path_of(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

template <class T>
T get(const json& obj, const std::string& where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw std::runtime_error("type");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw std::runtime_error("type");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned() == false && v.get<long long>() < 0) throw std::runtime_error("type");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw std::runtime_error("type");
    } else {
      if (!v.is_string()) throw std::runtime_error("type");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    fail(path_of(where, key), "wrong type");
  }
}

void check_exclusive(const json& obj, const std::string& where, const char* a, const char* b) {
  if (obj.contains(a) && obj.contains(b)) {
    fail(path_of(where, a), std::string("give either ") + a + " or " + b + ", not both");
  }
}

void parse_network(const json& j, NetworkConfig& cfg) {
  const std::string w = "network";
  reject_unknown(j, w, {"N", "N_t", "K", "L", "M", "groups"});
  cfg.dims.n_aps = get(j, w, "N", cfg.dims.n_aps);
  cfg.dims.n_tx = get(j, w, "N_t", cfg.dims.n_tx);
  cfg.dims.n_users = get(j, w, "K", cfg.dims.n_users);
  cfg.dims.n_ris = get(j, w, "L", cfg.dims.n_ris);
  cfg.dims.n_elements = get(j, w, "M", cfg.dims.n_elements);
  if (j.contains("groups")) {
    try {
      cfg.groups = j.at("groups").get<std::vector<std::vector<int>>>();
    } catch (const std::exception&) {
      fail("network.groups", "expected a list of user-index lists");
    }
  }
}

void parse_power(const json& root, NetworkConfig& cfg) {
  check_exclusive(root, "", "ap_power_w", "ap_power_dbm");
  const bool dbm = root.contains("ap_power_dbm");
  const char* key = dbm ? "ap_power_dbm" : "ap_power_w";
  if (!root.contains(key)) {
    cfg.ap_power = RVector::Ones(cfg.dims.n_aps);
    return;
  }
  const auto& v = root.at(key);
  std::vector<double> vals;
  if (v.is_number()) {
    vals.assign(static_cast<size_t>(std::max(cfg.dims.n_aps, 0)), v.get<double>());
  } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
    vals = v.get<std::vector<double>>();
  } else {
    fail(key, "expected a number or a list of numbers");
  }
  cfg.ap_power.resize(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) {
    cfg.ap_power[static_cast<Eigen::Index>(i)] = dbm ? dbm_to_watts(vals[i]) : vals[i];
  }
}

void parse_geometry(const json& j, NetworkConfig& cfg) {
  const std::string w = "geometry";
  reject_unknown(j, w, {"d_ar_m", "d_ru_m", "d_au_m"});
  const double d_ar = get(j, w, "d_ar_m", 50.0);
  const double d_ru = get(j, w, "d_ru_m", 10.0);
  if (j.contains("d_au_m")) {
    cfg.geometry = Geometry{d_ar, d_ru, get(j, w, "d_au_m", 0.0)};
  } else {
    if (!(d_ar > d_ru)) fail("geometry.d_ar_m", "must exceed d_ru_m when d_au_m is derived");
    cfg.geometry = Geometry::from_default_rule(d_ar, d_ru);
  }
}

void parse_fading(const json& j, NetworkConfig& cfg) {
  const std::string w = "fading";
  reject_unknown(j, w, {"zeta0_db", "eps_au", "eps_ar", "eps_ru", "rician_kappa_db"});
  cfg.fading.zeta0 = db_to_linear(get(j, w, "zeta0_db", -30.0));
  cfg.fading.eps_au = get(j, w, "eps_au", cfg.fading.eps_au);
  cfg.fading.eps_ar = get(j, w, "eps_ar", cfg.fading.eps_ar);
  cfg.fading.eps_ru = get(j, w, "eps_ru", cfg.fading.eps_ru);
  cfg.fading.rician_kappa = db_to_linear(get(j, w, "rician_kappa_db", 2.0));
}

void parse_csi(const json& j, NetworkConfig& cfg) {
  if (j.is_string()) {
    if (j.get<std::string>() != "perfect") fail("csi", "expected \"perfect\" or an object");
    cfg.csi = CsiSettings{};
    return;
  }
  const std::string w = "csi";
  reject_unknown(j, w, {"alpha", "samples"});
  cfg.csi.alpha = get(j, w, "alpha", 1.0);
  cfg.csi.samples = get(j, w, "samples", 2000);
}

void parse_optimizer(const json& j, NetworkConfig& cfg) {
  const std::string w = "optimizer";
  reject_unknown(j, w, {"wsr_tol", "max_outer_iters", "max_wmmse_iters", "restarts", "fd_step",
                        "ls_backtrack", "ls_max", "max_ris_iters", "embed_baselines"});
  auto& o = cfg.optimizer;
  o.wsr_tol = get(j, w, "wsr_tol", o.wsr_tol);
  o.max_outer_iters = get(j, w, "max_outer_iters", o.max_outer_iters);
  o.max_wmmse_iters = get(j, w, "max_wmmse_iters", o.max_wmmse_iters);
  o.restarts = get(j, w, "restarts", o.restarts);
  o.fd_step = get(j, w, "fd_step", o.fd_step);
  o.ls_backtrack = get(j, w, "ls_backtrack", o.ls_backtrack);
  o.ls_max = get(j, w, "ls_max", o.ls_max);
  o.max_ris_iters = get(j, w, "max_ris_iters", o.max_ris_iters);
  o.embed_baselines = get(j, w, "embed_baselines", o.embed_baselines);
}

std::vector<std::string> string_list(const json& root, const char* key) {
  const auto& v = root.at(key);
  if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); })) {
    fail(key, "expected a list of strings");
  }
  return v.get<std::vector<std::string>>();
}

}  // namespace

std::optional<RisArchitecture> parse_arch(const std::string& text, int elements) {
  if (text == "none") return std::nullopt;
  return RisArchitecture::parse(text, elements);
}

std::string arch_label(const std::optional<RisArchitecture>& arch) {
  return arch ? arch->to_string() : "none";
}

SchemeSpec scheme_from_name(const std::string& name, const std::vector<std::vector<int>>& groups,
                            int n_users) {
  switch (parse_scheme(name)) {
    case Scheme::RS1Layer: return SchemeSpec::rs1();
    case Scheme::SDMA: return SchemeSpec::sdma();
    case Scheme::NOMA: return SchemeSpec::noma();
    case Scheme::HRS2Layer: {
      if (!groups.empty()) return SchemeSpec::hrs(groups);
      // One group per user unless the config says otherwise.
      std::vector<std::vector<int>> g;
      for (int k = 0; k < n_users; ++k) g.push_back({k});
      return SchemeSpec::hrs(g);
    }
  }
  throw std::invalid_argument("unknown scheme");
}

TransmitSetup NetworkConfig::transmit() const {
  return TransmitSetup{dims.n_tx, ap_power, sigma_z2};
}

CsiErrorModel NetworkConfig::csi_error() const {
  if (csi.perfect()) return CsiErrorModel{};
  return CsiErrorModel::from_quality(csi.alpha, sigma_z2);
}

void NetworkConfig::validate() const {
  if (dims.n_aps < 1) fail("network.N", "must be >= 1");
  if (dims.n_tx < 1) fail("network.N_t", "must be >= 1");
  if (dims.n_users < 1) fail("network.K", "must be >= 1");
  if (dims.n_ris < 0) fail("network.L", "must be >= 0");
  if (dims.n_elements < 0) fail("network.M", "must be >= 0");
  if (ap_power.size() != dims.n_aps) fail("ap_power_w", "need one budget per AP");
  for (Eigen::Index i = 0; i < ap_power.size(); ++i) {
    if (!(ap_power[i] > 0.0) || !std::isfinite(ap_power[i])) fail("ap_power_w", "powers must be > 0");
  }
  if (!(sigma_z2 > 0.0) || !std::isfinite(sigma_z2)) fail("noise_dbm", "noise power must be > 0");
  try {
    geometry.validate();
  } catch (const std::exception& e) {
    fail("geometry", e.what());
  }
  try {
    fading.validate();
  } catch (const std::exception& e) {
    fail("fading", e.what());
  }
  if (!(csi.alpha > 0.0 && csi.alpha <= 1.0)) fail("csi.alpha", "must lie in (0, 1]");
  if (csi.samples < 1) fail("csi.samples", "must be >= 1");
  if (schemes.empty()) fail("schemes", "at least one scheme required");
  for (const auto& s : schemes) {
    try {
      s.validate(dims.n_users);
    } catch (const std::exception& e) {
      fail("schemes", e.what());
    }
  }
  if (archs.empty()) fail("archs", "at least one architecture required");
  for (const auto& a : archs) {
    if (a && a->elements() != dims.n_elements) fail("archs", "architecture size must equal M");
  }
  try {
    optimizer.validate();
  } catch (const std::exception& e) {
    fail("optimizer", e.what());
  }
  if (mc_runs < 1) fail("mc_runs", "must be >= 1");
  if (n_weights < 2) fail("n_weights", "must be >= 2");
  if (dims.n_users != 2) fail("network.K", "rate-region experiments need K = 2");
}

NetworkConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  reject_unknown(root, "", {"name", "network", "ap_power_w", "ap_power_dbm", "noise_w", "noise_dbm",
                            "geometry", "fading", "csi", "schemes", "archs", "optimizer", "mc_runs",
                            "n_weights", "seed"});
  NetworkConfig cfg;
  cfg.name = get(root, "", "name", std::string{});
  if (root.contains("network")) parse_network(root.at("network"), cfg);
  parse_power(root, cfg);
  check_exclusive(root, "", "noise_w", "noise_dbm");
  if (root.contains("noise_w")) cfg.sigma_z2 = get(root, "", "noise_w", 0.0);
  if (root.contains("noise_dbm")) cfg.sigma_z2 = dbm_to_watts(get(root, "", "noise_dbm", 0.0));
  if (root.contains("geometry")) parse_geometry(root.at("geometry"), cfg);
  if (root.contains("fading")) parse_fading(root.at("fading"), cfg);
  if (root.contains("csi")) parse_csi(root.at("csi"), cfg);
  if (root.contains("optimizer")) parse_optimizer(root.at("optimizer"), cfg);
  cfg.mc_runs = get(root, "", "mc_runs", cfg.mc_runs);
  cfg.n_weights = get(root, "", "n_weights", cfg.n_weights);
  cfg.seed = get(root, "", "seed", cfg.seed);

  const auto scheme_names =
      root.contains("schemes") ? string_list(root, "schemes") : std::vector<std::string>{"rs1", "sdma", "noma"};
  for (const auto& s : scheme_names) {
    try {
      cfg.schemes.push_back(scheme_from_name(s, cfg.groups, cfg.dims.n_users));
    } catch (const std::exception& e) {
      fail("schemes", e.what());
    }
  }
  const auto arch_names =
      root.contains("archs") ? string_list(root, "archs") : std::vector<std::string>{"single", "none"};
  for (const auto& a : arch_names) {
    try {
      cfg.archs.push_back(parse_arch(a, cfg.dims.n_elements));
    } catch (const std::exception& e) {
      fail("archs", e.what());
    }
  }
  cfg.validate();
  return cfg;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace risrsma
