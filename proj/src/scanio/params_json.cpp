#include "routerkit/scanio/params_json.hpp"

#include <functional>
#include <map>

#include "routerkit/error.hpp"
#include "routerkit/scanio/csv.hpp"

namespace routerkit::scanio
{

using nlohmann::json;

SystemParams params_from_json(const json& j)
{
    if (!j.is_object())
    {
        throw Error(ErrorCode::InvalidInput, "parameter file must hold a JSON object");
    }
    SystemParams p = reference_device();
    const std::map<std::string, std::function<void(double)>> setters = {
        {"gamma_bulk_ns", [&](double v) { p.emitter.gamma_bulk = v; }},
        {"gamma_leak_ns", [&](double v) { p.emitter.gamma_leak = v; }},
        {"gamma_cav_ns", [&](double v) { p.gamma_cav = v; }},
        {"gamma_dp_ghz", [&](double v) { p.emitter.gamma_dp = rate_from_linewidth(v); }},
        {"kappa_ghz", [&](double v) { p.cavity.kappa = rate_from_linewidth(v); }},
        {"omega_qd_ghz", [&](double v) { p.emitter.omega_qd = v; }},
        {"omega_cav_ghz", [&](double v) { p.cavity.omega_cav = v; }},
        {"q_ratio", [&](double v) { p.cavity.q_ratio = v; }},
        {"eta", [&](double v) { p.cavity.eta = v; }},
        {"alpha", [&](double v) { p.cavity.alpha = v; }},
        {"sigma_sd_ghz", [&](double v) { p.sigma_sd = v; }},
    };
    for (const auto& [key, value] : j.items())
    {
        const auto it = setters.find(key);
        if (it == setters.end())
        {
            throw Error(ErrorCode::InvalidInput, "unknown parameter key '" + key + "'");
        }
        if (!value.is_number())
        {
            throw Error(ErrorCode::InvalidInput, "parameter '" + key + "' must be a number");
        }
        it->second(value.get<double>());
    }
    p.validate();
    return p;
}

json params_to_json(const SystemParams& p)
{
    return {
        {"gamma_bulk_ns", p.emitter.gamma_bulk},
        {"gamma_leak_ns", p.emitter.gamma_leak},
        {"gamma_cav_ns", p.gamma_cav},
        {"gamma_dp_ghz", linewidth_from_rate(p.emitter.gamma_dp)},
        {"kappa_ghz", linewidth_from_rate(p.cavity.kappa)},
        {"omega_qd_ghz", p.emitter.omega_qd},
        {"omega_cav_ghz", p.cavity.omega_cav},
        {"q_ratio", p.cavity.q_ratio},
        {"eta", p.cavity.eta},
        {"alpha", p.cavity.alpha},
        {"sigma_sd_ghz", p.sigma_sd},
    };
}

SystemParams load_params(const std::string& path)
{
    const std::string text = read_file(path);
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
    }
    return params_from_json(j);
}

json fit_report(const fitkit::FitResult& fit)
{
    json params = json::array();
    for (std::size_t i = 0; i < fit.params.size(); ++i)
    {
        params.push_back({{"name", fit.params[i].name},
                          {"value", fit.params[i].value},
                          {"sigma", fit.sigma.empty() ? 0.0 : fit.sigma[i]},
                          {"fixed", fit.params[i].fixed}});
    }
    return {
        {"model", fit.model},
        {"params", params},
        {"chi2_red", fit.chi2_red},
        {"status", fitkit::to_string(fit.status)},
        {"n_iter", fit.n_iter},
    };
}

json model_to_json(const CouplingModel& m)
{
    return {{"t_cc", m.t_cc}, {"q_int", m.q_int}, {"kappa_g0", m.kappa_g0}, {"xi_per_nm", m.xi}};
}

json mode_volume_to_json(const ModeVolume& v)
{
    return {
        {"volume_um3", v.volume_um3},
        {"volume_lambda_n3", v.volume_lambda_n3},
        {"raw_re", v.raw.real()},
        {"raw_im", v.raw.imag()},
        {"index", v.index},
        {"lossy_residue", v.lossy_residue},
    };
}

} // namespace routerkit::scanio
