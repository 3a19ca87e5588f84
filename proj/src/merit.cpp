#include "routerkit/merit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "routerkit/broadening.hpp"
#include "routerkit/parallel.hpp"

namespace routerkit
{

namespace
{

constexpr double kMu0OverEps0 = 376.730313668 * 376.730313668; // Z0^2, ohm^2

void require(bool ok, const char* what)
{
    if (!ok)
    {
        throw Error(ErrorCode::Domain, what);
    }
}

} // namespace

double purcell_ideal(const ModeGeometry& g)
{
    require(g.v_eff > 0.0 && g.q_exp > 0.0, "mode volume and Q must be positive");
    return 3.0 / (4.0 * std::numbers::pi * std::numbers::pi) * g.q_exp / g.v_eff;
}

double purcell_from_lifetimes(double gamma_fast, double gamma_bulk)
{
    require(gamma_fast > 0.0 && gamma_bulk > 0.0, "decay rates must be positive");
    return gamma_fast / gamma_bulk - 1.0;
}

double lifetime_enhancement(double gamma_fast, double gamma_bulk)
{
    require(gamma_fast > 0.0 && gamma_bulk > 0.0, "decay rates must be positive");
    return gamma_fast / gamma_bulk;
}

double beta_factor(double purcell)
{
    require(purcell >= 0.0, "Purcell factor must be >= 0");
    return purcell / (purcell + 1.0);
}

double coupling_strength(double purcell, double kappa, double gamma_bulk)
{
    require(purcell >= 0.0 && kappa >= 0.0 && gamma_bulk >= 0.0, "inputs must be >= 0");
    return 0.5 * std::sqrt(purcell * kappa * gamma_bulk);
}

double cooperativity(double g, double kappa, double gamma_bulk)
{
    require(kappa > 0.0 && gamma_bulk > 0.0, "kappa and gamma_bulk must be > 0");
    return 4.0 * g * g / (kappa * gamma_bulk);
}

double bell_success(BellScheme scheme, double c_or_beta)
{
    if (scheme == BellScheme::CavityQed)
    {
        if (!(c_or_beta > 1.0))
        {
            throw Error(ErrorCode::Domain, "cavity-QED Bell analyzer needs cooperativity C > 1");
        }
        return std::clamp(1.0 - 1.0 / c_or_beta, 0.0, 1.0);
    }
    if (!(c_or_beta >= 0.5) || c_or_beta > 1.0)
    {
        throw Error(ErrorCode::Domain, "passive Bell analyzer needs 0.5 <= beta <= 1");
    }
    return std::clamp((2.0 * c_or_beta - 1.0) / c_or_beta, 0.0, 1.0);
}

double qe_cavity(double qe_bulk, double purcell)
{
    require(qe_bulk > 0.0 && qe_bulk <= 1.0, "QE_bulk must lie in (0, 1]");
    require(purcell >= 0.0, "Purcell factor must be >= 0");
    return std::min(1.0, qe_bulk * (purcell + 1.0) / (qe_bulk * purcell + 1.0));
}

double sd_decoherence_ratio(double sigma_sd, double purcell, double gamma_bulk)
{
    require(purcell > 0.0 && gamma_bulk > 0.0, "F and gamma_bulk must be > 0");
    return rate_from_linewidth(sigma_sd) / (purcell * gamma_bulk);
}

void FieldGrid::validate() const
{
    const std::size_t n = r.size() * z.size();
    if (r.size() < 2 || z.size() < 2)
    {
        throw Error(ErrorCode::InvalidInput, "field grid needs at least 2x2 samples");
    }
    for (const auto* c : {&e_r, &e_z, &e_phi, &h_r, &h_z, &h_phi})
    {
        if (c->size() != n)
        {
            throw Error(ErrorCode::InvalidInput, "field component does not match the grid shape");
        }
    }
    if (eps_rel.size() != n || mu_rel.size() != n)
    {
        throw Error(ErrorCode::InvalidInput, "material arrays do not match the grid shape");
    }
    for (double e : eps_rel)
    {
        if (!(e > 0.0))
        {
            throw Error(ErrorCode::InvalidInput, "permittivity must be positive");
        }
    }
}

ModeVolume mode_volume(const FieldGrid& grid, double wavelength_nm, Warnings* warnings)
{
    grid.validate();
    require(wavelength_nm > 0.0, "wavelength must be positive");

    // Trapezoid weights on |spacing|, so either axis orientation works.
    auto trapezoid = [](const std::vector<double>& x) {
        std::vector<double> w(x.size(), 0.0);
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
        {
            const double h = std::abs(x[i + 1] - x[i]);
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        }
        return w;
    };
    const std::vector<double> wr = trapezoid(grid.r);
    const std::vector<double> wz = trapezoid(grid.z);

    std::size_t imax = 0;
    for (std::size_t i = 0; i < grid.e_r.size(); ++i)
    {
        if (std::abs(grid.e_r[i]) > std::abs(grid.e_r[imax]))
        {
            imax = i;
        }
    }
    if (std::abs(grid.e_r[imax]) == 0.0)
    {
        throw Error(ErrorCode::Domain, "degenerate field: E_r vanishes everywhere");
    }

    std::complex<double> integral = 0.0;
    for (std::size_t ir = 0; ir < grid.r.size(); ++ir)
    {
        for (std::size_t iz = 0; iz < grid.z.size(); ++iz)
        {
            const std::size_t k = grid.index(ir, iz);
            const auto sq = [](std::complex<double> v) { return v * v; };
            const std::complex<double> electric =
                grid.eps_rel[k] * (-sq(grid.e_r[k]) - sq(grid.e_z[k]) + sq(grid.e_phi[k]));
            const std::complex<double> magnetic =
                grid.mu_rel[k] * kMu0OverEps0 * (sq(grid.h_r[k]) + sq(grid.h_z[k]) - sq(grid.h_phi[k]));
            integral += wr[ir] * wz[iz] * grid.r[ir] * (electric - magnetic);
        }
    }

    ModeVolume v;
    v.index = std::sqrt(grid.eps_rel[imax] * grid.mu_rel[imax]);
    const std::complex<double> peak = grid.e_r[imax];
    v.raw = std::numbers::pi * integral / (2.0 * v.index * v.index * peak * peak);
    v.volume_um3 = std::abs(v.raw.real());
    const double cell = wavelength_nm * 1e-3 / v.index;
    v.volume_lambda_n3 = v.volume_um3 / (cell * cell * cell);
    v.lossy_residue = std::abs(v.raw.imag()) > 0.01 * std::abs(v.raw.real());
    if (v.lossy_residue)
    {
        std::ostringstream msg;
        msg << "mode volume has a large imaginary part: " << v.raw.imag() << " vs real " << v.raw.real();
        warn(warnings, msg.str());
    }
    return v;
}

std::vector<RoutingVsPurcell> routing_vs_purcell(std::span<const double> purcell_axis,
                                                 const SystemParams& base, bool with_sd)
{
    for (std::size_t i = 0; i < purcell_axis.size(); ++i)
    {
        require(purcell_axis[i] > 0.0, "Purcell axis must be positive");
        require(i == 0 || purcell_axis[i] > purcell_axis[i - 1], "Purcell axis must ascend");
    }
    std::vector<RoutingVsPurcell> out(purcell_axis.size());
    auto evaluate = [&](std::size_t i) {
        SystemParams p = base;
        p.gamma_cav = purcell_axis[i] * base.emitter.gamma_bulk;
        if (!with_sd)
        {
            p.sigma_sd = 0.0;
        }
        const DipMetrics dip = broadened_dip(DriveParams::saturation(0.0), p);
        out[i].purcell = purcell_axis[i];
        out[i].max_extinction = -dip.drop_extinction;
        out[i].critical_photons = averaged_critical_photon_number(dip.position, p);
    };

    parallel_for(purcell_axis.size(), evaluate);
    return out;
}

} // namespace routerkit
