#ifndef ROUTERKIT_BROADENING_HPP
#define ROUTERKIT_BROADENING_HPP

#include <optional>
#include <span>
#include <vector>

#include "routerkit/error.hpp"
#include "routerkit/scattering.hpp"

namespace routerkit
{

// Unit-mass Gaussian sampled on a grid of spacing `spacing`, truncated at +-5 sigma.
struct GaussianKernel
{
    double sigma = 0.0;
    double center = 0.0;
    std::vector<double> offsets; // GHz
    std::vector<double> weights; // sum to 1
};

GaussianKernel make_kernel(double sigma, double spacing, double center = 0.0);

// Linear spectral-diffusion model sigma_sd(delta) = slope * delta + intercept, clamped at 0.
struct SdModel
{
    double slope = 0.0;     // GHz per GHz of detuning
    double intercept = 0.0; // GHz
};

double sd_at_detuning(const SdModel& m, double delta);

/// Ordinary least-squares line through (delta, sigma_sd) pairs.
SdModel fit_sd_model(std::span<const double> deltas, std::span<const double> sigmas);

/// Discrete convolution of an intensity spectrum with the unit-mass Gaussian of
/// width sigma_sd (GHz) centred at `center`. The axis must be uniform. Samples
/// beyond the ends are extended with the edge values.
///
/// sigma_sd = 0 returns the input. A kernel narrower than a quarter of the grid
/// spacing is treated as a delta (input returned, warning emitted); a kernel
/// that is resolvable but undersampled (sigma < 4 * spacing) is an
/// AxisTooCoarse error.
RealSpectrum convolve_spectrum(const RealSpectrum& raw, double sigma_sd, double center = 0.0,
                               Warnings* warnings = nullptr);

enum class BroadeningMode
{
    // Convolve |t|^2 along the laser detuning axis.
    Convolution,
    // Average |t|^2 over the wandering QD frequency with the cavity held fixed.
    Ensemble,
};

/// Scattering spectrum followed by spectral-diffusion broadening of both ports
/// with p.sigma_sd. The axis must be uniform for Convolution mode.
PortSpectra broadened_spectrum(std::span<const double> axis, const DriveParams& drive,
                               const SystemParams& p,
                               BroadeningMode mode = BroadeningMode::Convolution,
                               EmitterLimit limit = EmitterLimit::Finite,
                               Warnings* warnings = nullptr);

/// Bare-cavity reference for broadened_spectrum, processed the same way.
PortSpectra broadened_bare(std::span<const double> axis, const SystemParams& p,
                           BroadeningMode mode = BroadeningMode::Convolution,
                           Warnings* warnings = nullptr);

/// Broadened port intensities at arbitrary (ascending) points, by Gaussian
/// quadrature on sigma-scaled nodes. Smooth in every parameter, which the fits rely on.
PortSpectra broadened_at(std::span<const double> points, const DriveParams& drive,
                         const SystemParams& p, BroadeningMode mode = BroadeningMode::Convolution,
                         EmitterLimit limit = EmitterLimit::Finite);

/// Bare reference for broadened_at.
PortSpectra broadened_bare_at(std::span<const double> points, const SystemParams& p,
                              BroadeningMode mode = BroadeningMode::Convolution);

/// Critical photon number averaged over the spectral-diffusion distribution
/// around the laser detuning delta_omega. Equals critical_photon_number when sigma_sd = 0.
double averaged_critical_photon_number(double delta_omega, const SystemParams& p,
                                       BroadeningMode mode = BroadeningMode::Convolution,
                                       EmitterLimit limit = EmitterLimit::Finite);

struct DipSearch
{
    double spacing = 0.01;   // GHz, grid for the convolution
    double half_width = 0.0; // GHz; 0 picks a window from sigma_sd and the emitter width
    BroadeningMode mode = BroadeningMode::Convolution;
    EmitterLimit limit = EmitterLimit::Finite;
};

/// Broadened QD feature near the emitter resonance for the given drive.
DipMetrics broadened_dip(const DriveParams& drive, const SystemParams& p,
                         const DipSearch& search = {});

/// Incident flux (photons per lifetime) at which the broadened drop-port dip
/// reaches half of its zero-power depth. Saturation is detuning dependent:
/// S(dw) = alpha n_in / n_c(dw).
double half_depth_flux(const SystemParams& p, const DipSearch& search = {});

struct RoutingPoint
{
    double delta = 0.0;           // GHz
    double sigma_sd = 0.0;        // GHz used at this detuning
    double drop_extinction = 0.0; // relative to the bare cavity
    double bus_gain = 0.0;
};

/// Laser fixed on the cavity resonance while the QD is detuned by `delta`:
/// broadened drop extinction and bus gain at omega_laser = omega_cav.
/// With an SdModel, sigma_sd follows the detuning; otherwise p.sigma_sd is used.
RoutingPoint routing_at_cavity(double delta, const DriveParams& drive, const SystemParams& p,
                               const std::optional<SdModel>& sd = std::nullopt,
                               BroadeningMode mode = BroadeningMode::Convolution);

} // namespace routerkit

#endif
