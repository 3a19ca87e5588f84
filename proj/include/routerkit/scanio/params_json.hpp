#ifndef ROUTERKIT_SCANIO_PARAMS_JSON_HPP
#define ROUTERKIT_SCANIO_PARAMS_JSON_HPP

#include <string>

#include <json.hpp>

#include "routerkit/coupling.hpp"
#include "routerkit/fitkit/least_squares.hpp"
#include "routerkit/merit.hpp"
#include "routerkit/params.hpp"

namespace routerkit::scanio
{

// Keys: gamma_bulk_ns, gamma_leak_ns, gamma_cav_ns (rad/ns); gamma_dp_ghz, kappa_ghz
// (linewidths over 2 pi); omega_qd_ghz, omega_cav_ghz, sigma_sd_ghz (GHz); q_ratio,
// eta, alpha. Missing keys keep the reference-device value; unknown keys are an
// InvalidInput error.
SystemParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SystemParams& p);
SystemParams load_params(const std::string& path);

/// {model, params: [{name, value, sigma, fixed}], chi2_red, status, n_iter}.
nlohmann::json fit_report(const fitkit::FitResult& fit);

nlohmann::json model_to_json(const CouplingModel& m);
nlohmann::json mode_volume_to_json(const ModeVolume& v);

} // namespace routerkit::scanio

#endif
