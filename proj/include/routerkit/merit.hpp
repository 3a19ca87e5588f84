#ifndef ROUTERKIT_MERIT_HPP
#define ROUTERKIT_MERIT_HPP

#include <complex>
#include <span>
#include <vector>

#include "routerkit/error.hpp"
#include "routerkit/params.hpp"

namespace routerkit
{

struct ModeGeometry
{
    double wavelength_nm = 0.0;
    double index = 0.0;
    double v_eff = 0.0; // in units of (lambda/n)^3
    double q_exp = 0.0;
};

/// F_ideal = 3/(4 pi^2) Q / V_eff with V_eff in (lambda/n)^3.
double purcell_ideal(const ModeGeometry& g);

/// F = gamma_fast / gamma_bulk - 1 (lifetime ratio is F + 1).
double purcell_from_lifetimes(double gamma_fast, double gamma_bulk);

/// Plain lifetime ratio gamma_fast / gamma_bulk. Note this is F + 1, not F.
double lifetime_enhancement(double gamma_fast, double gamma_bulk);

/// beta = F / (F + 1).
double beta_factor(double purcell);

/// g = sqrt(F kappa gamma_bulk) / 2, all angular.
double coupling_strength(double purcell, double kappa, double gamma_bulk);

/// C = 4 g^2 / (kappa gamma_bulk).
double cooperativity(double g, double kappa, double gamma_bulk);

enum class BellScheme
{
    CavityQed, // success 1 - 1/C, needs C > 1
    Passive,   // success (2 beta - 1)/beta, needs beta >= 1/2
};

double bell_success(BellScheme scheme, double c_or_beta);

/// QE_cavity = QE_bulk (F+1) / (QE_bulk F + 1), clamped to <= 1.
double qe_cavity(double qe_bulk, double purcell);

/// sigma_sd / (F gamma_bulk): spectral diffusion relative to the enhanced
/// emission rate. sigma_sd in GHz (converted to angular), gamma_bulk in rad/ns.
double sd_decoherence_ratio(double sigma_sd, double purcell, double gamma_bulk);

// Cylindrical (r, z) samples of a mode, stored row-major with z fastest:
// index = ir * z.size() + iz.
struct FieldGrid
{
    std::vector<double> r; // um, ascending
    std::vector<double> z; // um, ascending
    std::vector<std::complex<double>> e_r, e_z, e_phi;
    std::vector<std::complex<double>> h_r, h_z, h_phi;
    std::vector<double> eps_rel;
    std::vector<double> mu_rel;

    std::size_t index(std::size_t ir, std::size_t iz) const { return ir * z.size() + iz; }
    void validate() const;
};

struct ModeVolume
{
    std::complex<double> raw; // signed quadratic-form ratio, um^3
    double volume_um3 = 0.0;  // |Re(raw)|
    double volume_lambda_n3 = 0.0;
    double index = 0.0;       // refractive index at the |E_r| maximum
    bool lossy_residue = false; // |Im| > 1% of |Re|
};

/// Mode volume of a lossy axisymmetric mode,
/// V = pi Int dr dz r [eps(-Er^2 - Ez^2 + Ephi^2) - mu(Hr^2 + Hz^2 - Hphi^2)] / (2 eps0 n^2 max(Er)^2),
/// with squares of complex amplitudes and 2-D trapezoid quadrature. E is in V/m
/// and H in A/m; eps = eps_rel eps0 and mu = mu_rel mu0, so eps0 cancels.
ModeVolume mode_volume(const FieldGrid& grid, double wavelength_nm, Warnings* warnings = nullptr);

struct RoutingVsPurcell
{
    double purcell = 0.0;
    double max_extinction = 0.0; // |drop extinction| at S = 0
    double critical_photons = 0.0;
};

/// For each F sets gamma_cav = F gamma_bulk and evaluates the S = 0 drop-port
/// dip and n_c at the dip (SD-averaged when with_sd). with_sd = false zeroes sigma_sd.
std::vector<RoutingVsPurcell> routing_vs_purcell(std::span<const double> purcell_axis,
                                                 const SystemParams& base, bool with_sd);

} // namespace routerkit

#endif
