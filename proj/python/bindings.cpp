#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "risrsma/experiment.hpp"

namespace py = pybind11;
using namespace risrsma;

PYBIND11_MODULE(_core, m) {
  m.doc() = "RIS-aided rate-splitting simulator core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_ValueError);

  py::class_<Dimensions>(m, "Dimensions")
      .def(py::init<>())
      .def_readwrite("n_aps", &Dimensions::n_aps)
      .def_readwrite("n_tx", &Dimensions::n_tx)
      .def_readwrite("n_users", &Dimensions::n_users)
      .def_readwrite("n_ris", &Dimensions::n_ris)
      .def_readwrite("n_elements", &Dimensions::n_elements);

  py::class_<Geometry>(m, "Geometry")
      .def(py::init<>())
      .def_static("from_default_rule", &Geometry::from_default_rule, py::arg("d_ar"), py::arg("d_ru"))
      .def_readwrite("d_ar", &Geometry::d_ar)
      .def_readwrite("d_ru", &Geometry::d_ru)
      .def_readwrite("d_au", &Geometry::d_au);

  py::class_<FadingParams>(m, "FadingParams")
      .def(py::init<>())
      .def_readwrite("zeta0", &FadingParams::zeta0)
      .def_readwrite("eps_au", &FadingParams::eps_au)
      .def_readwrite("eps_ar", &FadingParams::eps_ar)
      .def_readwrite("eps_ru", &FadingParams::eps_ru)
      .def_readwrite("rician_kappa", &FadingParams::rician_kappa);

  py::class_<ChannelSet>(m, "ChannelSet")
      .def(py::init([](CMatrix d, CMatrix r, CMatrix g) { return ChannelSet{std::move(d), std::move(r), std::move(g)}; }),
           py::arg("direct"), py::arg("ris_user"), py::arg("ap_ris"))
      .def_readwrite("direct", &ChannelSet::direct)
      .def_readwrite("ris_user", &ChannelSet::ris_user)
      .def_readwrite("ap_ris", &ChannelSet::ap_ris);

  py::class_<CsiErrorModel>(m, "CsiErrorModel")
      .def(py::init<>())
      .def_static("from_quality", &CsiErrorModel::from_quality, py::arg("alpha"), py::arg("sigma_z2"))
      .def_readwrite("alpha", &CsiErrorModel::alpha)
      .def_readwrite("sigma_e2", &CsiErrorModel::sigma_e2);

  m.def("pathloss_amplitude", &pathloss_amplitude, py::arg("d"), py::arg("eps"), py::arg("zeta0"));
  m.def(
      "generate_channels",
      [](const Dimensions& d, const Geometry& g, const FadingParams& f, std::uint64_t seed) {
        Rng rng(seed);
        return generate_channels(d, g, f, rng);
      },
      py::arg("dims"), py::arg("geometry"), py::arg("fading"), py::arg("seed"));
  m.def(
      "apply_csi_error",
      [](const ChannelSet& ch, const CsiErrorModel& e, std::uint64_t seed) {
        Rng rng(seed);
        return apply_csi_error(ch, e, rng);
      },
      py::arg("truth"), py::arg("model"), py::arg("seed"));

  py::class_<RisArchitecture>(m, "RisArchitecture")
      .def_static("single", &RisArchitecture::single)
      .def_static("group", &RisArchitecture::group)
      .def_static("fully", &RisArchitecture::fully)
      .def_static("parse", &RisArchitecture::parse, py::arg("text"), py::arg("elements"))
      .def_property_readonly("elements", &RisArchitecture::elements)
      .def_property_readonly("params_per_surface", &RisArchitecture::params_per_surface)
      .def("__str__", &RisArchitecture::to_string);

  py::class_<RisMatrix>(m, "RisMatrix")
      .def_static("from_params", &RisMatrix::from_params, py::arg("arch"), py::arg("n_surfaces"), py::arg("params"))
      .def_property_readonly("arch", &RisMatrix::arch)
      .def_property_readonly("params", &RisMatrix::params)
      .def("full", &RisMatrix::full);

  m.def("validate_ris", [](const RisMatrix& r, double tol) {
    const auto v = validate(r, tol);
    return py::make_tuple(v.pass, v.residual);
  }, py::arg("ris"), py::arg("tol") = 1e-9);
  m.def(
      "random_ris",
      [](const RisArchitecture& a, int surfaces, std::uint64_t seed) {
        Rng rng(seed);
        return random_ris(a, surfaces, rng);
      },
      py::arg("arch"), py::arg("n_surfaces"), py::arg("seed"));
  m.def("effective_channels", py::overload_cast<const ChannelSet&, const RisMatrix&>(&effective_channels),
        py::arg("channels"), py::arg("ris"));

  py::enum_<Scheme>(m, "Scheme")
      .value("RS1Layer", Scheme::RS1Layer)
      .value("HRS2Layer", Scheme::HRS2Layer)
      .value("SDMA", Scheme::SDMA)
      .value("NOMA", Scheme::NOMA);

  py::class_<SchemeSpec>(m, "SchemeSpec")
      .def_static("rs1", &SchemeSpec::rs1)
      .def_static("sdma", &SchemeSpec::sdma)
      .def_static("noma", &SchemeSpec::noma, py::arg("order") = std::vector<int>{})
      .def_static("hrs", &SchemeSpec::hrs, py::arg("groups"))
      .def_readonly("kind", &SchemeSpec::kind)
      .def_readonly("groups", &SchemeSpec::groups)
      .def_readonly("decode_order", &SchemeSpec::decode_order);

  py::class_<Precoder>(m, "Precoder")
      .def(py::init([](SchemeSpec s, CMatrix p) { return Precoder{std::move(s), std::move(p)}; }), py::arg("scheme"),
           py::arg("P"))
      .def_readonly("scheme", &Precoder::scheme)
      .def_readwrite("P", &Precoder::P);

  py::class_<RateResult>(m, "RateResult")
      .def_readonly("common_per_user", &RateResult::common_per_user)
      .def_readonly("common_rate", &RateResult::common_rate)
      .def_readonly("inner_common_rates", &RateResult::inner_common_rates)
      .def_readonly("private_rates", &RateResult::private_rates)
      .def_readonly("common_alloc", &RateResult::common_alloc)
      .def_readonly("user_totals", &RateResult::user_totals);

  m.def("compute_rates", &compute_rates, py::arg("h_eff"), py::arg("precoder"), py::arg("sigma_z2"));
  m.def("with_optimal_allocation", &with_optimal_allocation, py::arg("rates"), py::arg("weights"));

  py::class_<OptimizerSettings>(m, "OptimizerSettings")
      .def(py::init<>())
      .def_readwrite("wsr_tol", &OptimizerSettings::wsr_tol)
      .def_readwrite("max_outer_iters", &OptimizerSettings::max_outer_iters)
      .def_readwrite("max_wmmse_iters", &OptimizerSettings::max_wmmse_iters)
      .def_readwrite("restarts", &OptimizerSettings::restarts)
      .def_readwrite("fd_step", &OptimizerSettings::fd_step)
      .def_readwrite("max_ris_iters", &OptimizerSettings::max_ris_iters)
      .def_readwrite("embed_baselines", &OptimizerSettings::embed_baselines);

  py::class_<TransmitSetup>(m, "TransmitSetup")
      .def(py::init([](int n_tx, RVector power, double noise) { return TransmitSetup{n_tx, std::move(power), noise}; }),
           py::arg("n_tx"), py::arg("ap_power"), py::arg("sigma_z2"));

  py::class_<WmmseOutput>(m, "WmmseOutput")
      .def_readonly("precoder", &WmmseOutput::precoder)
      .def_readonly("rates", &WmmseOutput::rates)
      .def_readonly("wsr", &WmmseOutput::wsr)
      .def_readonly("wsr_trace", &WmmseOutput::wsr_trace);

  py::class_<DesignOutput>(m, "DesignOutput")
      .def_readonly("precoder", &DesignOutput::precoder)
      .def_readonly("ris", &DesignOutput::ris)
      .def_readonly("rates", &DesignOutput::rates)
      .def_readonly("wsr", &DesignOutput::wsr)
      .def_readonly("wsr_trace", &DesignOutput::wsr_trace)
      .def_readonly("seed", &DesignOutput::seed);

  m.def("wmmse_precoder",
        py::overload_cast<const CMatrix&, const RVector&, const TransmitSetup&, const SchemeSpec&,
                          const OptimizerSettings&>(&wmmse_precoder),
        py::arg("h_eff"), py::arg("weights"), py::arg("tx"), py::arg("scheme"),
        py::arg("settings") = OptimizerSettings{});
  m.def("alternating_optimize", &alternating_optimize, py::arg("channels"), py::arg("tx"), py::arg("weights"),
        py::arg("scheme"), py::arg("arch"), py::arg("settings"), py::arg("seed"));

  py::class_<RegionPoint>(m, "RegionPoint")
      .def_readonly("weight_idx", &RegionPoint::weight_idx)
      .def_readonly("u1", &RegionPoint::u1)
      .def_readonly("u2", &RegionPoint::u2)
      .def_readonly("r1", &RegionPoint::r1)
      .def_readonly("r2", &RegionPoint::r2)
      .def_readonly("wsr", &RegionPoint::wsr);

  py::class_<RegionResult>(m, "RegionResult")
      .def_readonly("points", &RegionResult::points)
      .def_readonly("frontier", &RegionResult::frontier);

  m.def(
      "rate_region",
      [](const ChannelSet& ch, const TransmitSetup& tx, const SchemeSpec& s, const std::optional<RisArchitecture>& a,
         int n, const OptimizerSettings& st, std::uint64_t seed) { return rate_region(ch, tx, s, a, n, st, seed); },
      py::arg("channels"), py::arg("tx"), py::arg("scheme"), py::arg("arch"), py::arg("n_weights"),
      py::arg("settings"), py::arg("seed"));

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def_readonly("name", &NetworkConfig::name)
      .def_readwrite("dims", &NetworkConfig::dims)
      .def_readwrite("sigma_z2", &NetworkConfig::sigma_z2)
      .def_readwrite("optimizer", &NetworkConfig::optimizer)
      .def_readwrite("mc_runs", &NetworkConfig::mc_runs)
      .def_readwrite("n_weights", &NetworkConfig::n_weights)
      .def_readwrite("seed", &NetworkConfig::seed)
      .def_property(
          "schemes",
          [](const NetworkConfig& c) {
            std::vector<std::string> out;
            for (const auto& s : c.schemes) out.push_back(to_string(s.kind));
            return out;
          },
          [](NetworkConfig& c, const std::vector<std::string>& names) {
            c.schemes.clear();
            for (const auto& n : names) c.schemes.push_back(scheme_from_name(n, c.groups, c.dims.n_users));
          })
      .def_property(
          "archs",
          [](const NetworkConfig& c) {
            std::vector<std::string> out;
            for (const auto& a : c.archs) out.push_back(arch_label(a));
            return out;
          },
          [](NetworkConfig& c, const std::vector<std::string>& names) {
            c.archs.clear();
            for (const auto& n : names) c.archs.push_back(parse_arch(n, c.dims.n_elements));
          })
      .def("transmit", &NetworkConfig::transmit)
      .def("validate", &NetworkConfig::validate);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def(
      "run_experiment",
      [](const NetworkConfig& cfg, const std::filesystem::path& out) {
        py::gil_scoped_release release;
        run_experiment(cfg, out);
      },
      py::arg("config"), py::arg("out"));
  m.def("summarize_file", &summarize_file, py::arg("csv_in"), py::arg("csv_out"));
  m.attr("CSV_HEADER") = kCsvHeader;
  m.attr("SUMMARY_HEADER") = kSummaryHeader;
}
