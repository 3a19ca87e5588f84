#include "routerkit/params.hpp"

#include <cmath>
#include <string>

#include "routerkit/error.hpp"

namespace routerkit
{

const char* to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::SingularParameter: return "singular-parameter";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::AxisTooCoarse: return "axis-too-coarse";
    case ErrorCode::Evaluation: return "evaluation";
    case ErrorCode::Detection: return "detection";
    case ErrorCode::Rank: return "rank";
    case ErrorCode::Convergence: return "convergence";
    }
    return "unknown";
}

namespace
{

void require(bool ok, const std::string& what)
{
    if (!ok)
    {
        throw Error(ErrorCode::Domain, what);
    }
}

} // namespace

double rate_from_linewidth(double linewidth_ghz)
{
    require(linewidth_ghz >= 0.0, "linewidth must be non-negative");
    return kTwoPi * linewidth_ghz;
}

double linewidth_from_rate(double rate)
{
    require(rate >= 0.0, "rate must be non-negative");
    return rate / kTwoPi;
}

void EmitterParams::validate() const
{
    require(std::isfinite(gamma_bulk) && gamma_bulk > 0.0, "gamma_bulk must be > 0");
    require(gamma_leak >= 0.0, "gamma_leak must be >= 0");
    require(gamma_dp >= 0.0, "gamma_dp must be >= 0");
    require(std::isfinite(omega_qd), "omega_qd must be finite");
}

void CavityParams::validate() const
{
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(q_ratio > 0.0 && q_ratio <= 1.0, "q_ratio must lie in (0, 1]");
    require(eta >= 0.0, "eta must be >= 0");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    require(std::isfinite(omega_cav), "omega_cav must be finite");
}

void SystemParams::validate() const
{
    emitter.validate();
    cavity.validate();
    require(gamma_cav >= 0.0, "gamma_cav must be >= 0");
    require(sigma_sd >= 0.0, "sigma_sd must be >= 0");
    require(std::isfinite(delta()), "delta must be finite");
}

DriveParams DriveParams::saturation(double s)
{
    require(s >= 0.0, "saturation parameter must be >= 0");
    return DriveParams{Kind::Saturation, s};
}

DriveParams DriveParams::flux(double n_in)
{
    require(n_in >= 0.0, "photon flux must be >= 0");
    return DriveParams{Kind::Flux, n_in};
}

double f_factor(const SystemParams& p)
{
    const double width = p.emitter_width();
    if (width <= 0.0)
    {
        throw Error(ErrorCode::SingularParameter,
                    "gamma_leak + 2 gamma_dp = 0: use the lossless-emitter limit");
    }
    return p.gamma_cav / width;
}

double gamma_total(const SystemParams& p)
{
    return p.gamma_cav + p.emitter.gamma_leak;
}

SystemParams reference_device()
{
    SystemParams p;
    p.emitter.gamma_bulk = 0.63;
    p.emitter.gamma_leak = 0.63;
    p.emitter.gamma_dp = rate_from_linewidth(0.01);
    p.gamma_cav = 4.97 - 0.63;
    p.cavity.kappa = rate_from_linewidth(36.6);
    p.cavity.omega_cav = 0.0;
    p.emitter.omega_qd = 0.02 * 36.6;
    p.sigma_sd = 0.6;
    return p;
}

} // namespace routerkit
