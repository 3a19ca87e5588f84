#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "routerkit/broadening.hpp"
#include "routerkit/coupling.hpp"
#include "routerkit/error.hpp"
#include "routerkit/fitkit/models.hpp"
#include "routerkit/merit.hpp"
#include "routerkit/params.hpp"
#include "routerkit/scanio/cli.hpp"
#include "routerkit/scanio/params_json.hpp"
#include "routerkit/scattering.hpp"

namespace py = pybind11;
using namespace routerkit;

namespace
{

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a)
{
    if (a.ndim() != 1)
    {
        throw Error(ErrorCode::InvalidInput, "expected a one-dimensional array");
    }
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v)
{
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict ports(const PortSpectra& s)
{
    py::dict d;
    d["axis"] = to_array(s.drop.axis);
    d["drop"] = to_array(s.drop.values);
    d["bus"] = to_array(s.bus.values);
    return d;
}

py::dict dip(const DipMetrics& m)
{
    py::dict d;
    d["position"] = m.position;
    d["drop_extinction"] = m.drop_extinction;
    d["bus_gain"] = m.bus_gain;
    return d;
}

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

fitkit::DataSeries series(const Array& x, const Array& y)
{
    fitkit::DataSeries s{to_vector(x), to_vector(y), {}};
    s.validate();
    return s;
}

DriveParams drive(double saturation, std::optional<double> flux)
{
    return flux ? DriveParams::flux(*flux) : DriveParams::saturation(saturation);
}

BroadeningMode mode_from(const std::string& name)
{
    if (name == "convolution")
    {
        return BroadeningMode::Convolution;
    }
    if (name == "ensemble")
    {
        return BroadeningMode::Ensemble;
    }
    throw Error(ErrorCode::InvalidInput, "mode must be 'convolution' or 'ensemble'");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Quantum-dot single-photon router models and fits";

    static py::exception<Error> error(m, "RouterkitError");
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
            {
                std::rethrow_exception(p);
            }
        }
        catch (const Error& e)
        {
            py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<EmitterParams>(m, "EmitterParams")
        .def(py::init<>())
        .def_readwrite("gamma_bulk", &EmitterParams::gamma_bulk)
        .def_readwrite("gamma_leak", &EmitterParams::gamma_leak)
        .def_readwrite("gamma_dp", &EmitterParams::gamma_dp)
        .def_readwrite("omega_qd", &EmitterParams::omega_qd);

    py::class_<CavityParams>(m, "CavityParams")
        .def(py::init<>())
        .def_readwrite("kappa", &CavityParams::kappa)
        .def_readwrite("omega_cav", &CavityParams::omega_cav)
        .def_readwrite("q_ratio", &CavityParams::q_ratio)
        .def_readwrite("eta", &CavityParams::eta)
        .def_readwrite("alpha", &CavityParams::alpha);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("emitter", &SystemParams::emitter)
        .def_readwrite("cavity", &SystemParams::cavity)
        .def_readwrite("gamma_cav", &SystemParams::gamma_cav)
        .def_readwrite("sigma_sd", &SystemParams::sigma_sd)
        .def_property_readonly("delta", &SystemParams::delta)
        .def("validate", &SystemParams::validate)
        .def("to_json", [](const SystemParams& p) { return scanio::params_to_json(p).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return scanio::params_from_json(nlohmann::json::parse(text));
        });

    m.def("reference_device", &reference_device);
    m.def("rate_from_linewidth", &rate_from_linewidth);
    m.def("linewidth_from_rate", &linewidth_from_rate);
    m.def("f_factor", &f_factor);

    m.def("drop_coefficient",
          [](double dw, double s, const SystemParams& p) { return drop_coefficient(dw, s, p); },
          py::arg("delta_omega"), py::arg("saturation"), py::arg("params"));
    m.def("bus_coefficient",
          [](double dw, double s, const SystemParams& p) { return bus_coefficient(dw, s, p); },
          py::arg("delta_omega"), py::arg("saturation"), py::arg("params"));
    m.def("critical_photon_number",
          [](double dw, const SystemParams& p) { return critical_photon_number(dw, p); },
          py::arg("delta_omega"), py::arg("params"));
    m.def("uniform_axis", [](double from, double to, double step) { return to_array(uniform_axis(from, to, step)); });

    m.def(
        "spectrum",
        [](const Array& axis, double s, std::optional<double> flux, const SystemParams& p) {
            return ports(spectrum(to_vector(axis), drive(s, flux), p));
        },
        py::arg("axis"), py::arg("saturation") = 0.0, py::arg("flux") = py::none(), py::arg("params"));
    m.def(
        "broadened_spectrum",
        [](const Array& axis, double s, std::optional<double> flux, const SystemParams& p, const std::string& mode) {
            return ports(broadened_spectrum(to_vector(axis), drive(s, flux), p, mode_from(mode)));
        },
        py::arg("axis"), py::arg("saturation") = 0.0, py::arg("flux") = py::none(), py::arg("params"),
        py::arg("mode") = "convolution");
    m.def(
        "broadened_dip",
        [](double s, std::optional<double> flux, const SystemParams& p, const std::string& mode) {
            DipSearch search;
            search.mode = mode_from(mode);
            return dip(broadened_dip(drive(s, flux), p, search));
        },
        py::arg("saturation") = 0.0, py::arg("flux") = py::none(), py::arg("params"),
        py::arg("mode") = "convolution");
    m.def("half_depth_flux", [](const SystemParams& p) { return half_depth_flux(p); }, py::arg("params"));

    m.def(
        "purcell_ideal",
        [](double wavelength_nm, double index, double v_eff, double q_exp) {
            return purcell_ideal({wavelength_nm, index, v_eff, q_exp});
        },
        py::arg("wavelength_nm"), py::arg("index"), py::arg("v_eff"), py::arg("q_exp"));
    m.def("purcell_from_lifetimes", &purcell_from_lifetimes, py::arg("gamma_fast"), py::arg("gamma_bulk"));
    m.def("beta_factor", &beta_factor, py::arg("purcell"));
    m.def("coupling_strength", &coupling_strength, py::arg("purcell"), py::arg("kappa"), py::arg("gamma_bulk"));
    m.def("cooperativity", &cooperativity, py::arg("g"), py::arg("kappa"), py::arg("gamma_bulk"));
    m.def("qe_cavity", &qe_cavity, py::arg("qe_bulk"), py::arg("purcell"));

    py::class_<CouplingModel>(m, "CouplingModel")
        .def(py::init<double, double, double, double>(), py::arg("t_cc"), py::arg("q_int"), py::arg("kappa_g0"),
             py::arg("xi"))
        .def_readwrite("t_cc", &CouplingModel::t_cc)
        .def_readwrite("q_int", &CouplingModel::q_int)
        .def_readwrite("kappa_g0", &CouplingModel::kappa_g0)
        .def_readwrite("xi", &CouplingModel::xi);
    m.def("delta_t", &delta_t, py::arg("model"), py::arg("gap_nm"));
    m.def("loaded_q", &loaded_q, py::arg("model"), py::arg("gap_nm"));
    m.def("critical_gap", &critical_gap, py::arg("model"));
    m.def(
        "fit_gap_series",
        [](const Array& gap, const Array& dt, const Array& q) {
            const auto g = to_vector(gap), d = to_vector(dt), qq = to_vector(q);
            if (g.size() != d.size() || g.size() != qq.size())
            {
                throw Error(ErrorCode::InvalidInput, "gap, delta_t and q must have equal length");
            }
            GapSeries data;
            for (std::size_t i = 0; i < g.size(); ++i)
            {
                data.entries.push_back({g[i], d[i], 0.0, qq[i], 0.0});
            }
            const GapFit fit = fit_gap_series(data);
            py::dict out;
            out["model"] = fit.model;
            out["critical_gap"] = fit.critical_gap;
            out["critical_gap_sigma"] = fit.critical_gap_sigma;
            out["report"] = to_python(scanio::fit_report(fit.fit));
            return out;
        },
        py::arg("gap_nm"), py::arg("delta_t"), py::arg("q"));

    m.def(
        "fit_lorentzian",
        [](const Array& x, const Array& y) {
            const fitkit::LorentzianFit f = fitkit::fit_lorentzian(series(x, y));
            py::dict out;
            out["center"] = f.center;
            out["fwhm"] = f.fwhm;
            out["depth"] = f.depth;
            out["background"] = f.background;
            out["q"] = f.q;
            out["degenerate"] = f.degenerate;
            return out;
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "fit_lifetime",
        [](const Array& t, const Array& counts, bool two) {
            const fitkit::LifetimeFit f =
                fitkit::fit_lifetime(series(t, counts), two ? fitkit::DecayOrder::Double : fitkit::DecayOrder::Single);
            py::dict out;
            out["gamma1"] = f.model.gamma1;
            out["gamma2"] = f.model.gamma2;
            out["t0"] = f.model.t0;
            out["degenerate"] = f.degenerate;
            out["warnings"] = f.warnings;
            out["report"] = to_python(scanio::fit_report(f.fit));
            return out;
        },
        py::arg("t_ns"), py::arg("counts"), py::arg("double_exponential") = false);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"routerkit"};
            for (const auto& a : args)
            {
                argv.push_back(a.c_str());
            }
            std::ostringstream out, err;
            const int code = scanio::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
