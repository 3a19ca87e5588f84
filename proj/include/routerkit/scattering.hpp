#ifndef ROUTERKIT_SCATTERING_HPP
#define ROUTERKIT_SCATTERING_HPP

#include <complex>
#include <span>
#include <vector>

#include "routerkit/params.hpp"

namespace routerkit
{

using cdouble = std::complex<double>;

// Spectra are sampled on the laser detuning from the QD, omega_laser - omega_qd, in GHz.
struct RealSpectrum
{
    std::vector<double> axis;
    std::vector<double> values;
};

struct ComplexSpectrum
{
    std::vector<double> axis;
    std::vector<cdouble> values;
};

struct PortSpectra
{
    RealSpectrum drop;
    RealSpectrum bus;
};

/// Throws InvalidInput unless the axis is non-empty, finite and strictly ascending.
void validate_axis(std::span<const double> axis);

/// Uniform axis from `from` to `to` inclusive (the last sample is clamped to `to`).
std::vector<double> uniform_axis(double from, double to, double step);

// With gamma_leak = gamma_dp = 0 the emitter is lossless (f -> infinity). That
// case must be requested explicitly; otherwise a SingularParameter error is raised.
enum class EmitterLimit
{
    Finite,
    AllowLossless,
};

/// Empty-cavity response t0 = 1 / (1 + i (Q/Q0) (dw + delta) / (kappa/2)).
cdouble bare_cavity(double delta_omega, const SystemParams& p);

/// Drop-port amplitude coefficient including coherent scattering by the QD.
/// For q_ratio = 1 this is t0 [-1 + f / ((1+S)(f + (1 + 2i dw/w)(1 + i(dw+delta)/(kappa/2))))]
/// with w = gamma_leak + 2 gamma_dp. For q_ratio < 1 the factors are placed as in
/// the input-output derivation: b_t = -u t0 b_in - i u sqrt(gamma_cav/2) t0 s.
cdouble drop_coefficient(double delta_omega, double saturation, const SystemParams& p,
                         EmitterLimit limit = EmitterLimit::Finite);

/// t_bus = 1 + t_drop.
cdouble bus_coefficient(double delta_omega, double saturation, const SystemParams& p,
                        EmitterLimit limit = EmitterLimit::Finite);

/// Critical flux (photons/ns) that drives the inversion to s_z = -1/4.
/// Infinite for an emitter decoupled from the cavity (gamma_cav = 0).
double critical_power(double delta_omega, const SystemParams& p,
                      EmitterLimit limit = EmitterLimit::Finite);

/// n_c = P_c / gamma_tot, photons per emitter lifetime for S = 1.
double critical_photon_number(double delta_omega, const SystemParams& p,
                              EmitterLimit limit = EmitterLimit::Finite);

/// S = alpha n_in / n_c at the given laser detuning.
double saturation_from_flux(double n_in, double delta_omega, const SystemParams& p,
                            EmitterLimit limit = EmitterLimit::Finite);

/// Local saturation parameter seen by the emitter for this drive and detuning.
/// A Saturation drive is detuning independent; a Flux drive goes through n_c(dw).
double local_saturation(const DriveParams& drive, double delta_omega, const SystemParams& p,
                        EmitterLimit limit = EmitterLimit::Finite);

struct BlochState
{
    cdouble s;        // <S->
    double s_z = 0.0; // <S_z>, in [-1/2, 0]
};

/// Steady state of the driven emitter for an input amplitude b_in, |b_in|^2 in photons/ns.
BlochState bloch_steady_state(double delta_omega, cdouble b_in, const SystemParams& p,
                              EmitterLimit limit = EmitterLimit::Finite);

/// T_drop = eta |t_drop|^2 and T_bus = |t_bus|^2 pointwise, without spectral diffusion.
PortSpectra spectrum(std::span<const double> axis, const DriveParams& drive, const SystemParams& p,
                     EmitterLimit limit = EmitterLimit::Finite);

/// Reference spectra of the cavity with a fully saturated emitter:
/// eta |t0|^2 on the drop port and |1 - (Q/Q0) t0|^2 on the bus port.
PortSpectra bare_spectrum(std::span<const double> axis, const SystemParams& p);

/// Drop-port amplitudes on an axis (constant S).
ComplexSpectrum drop_amplitudes(std::span<const double> axis, double saturation,
                                const SystemParams& p, EmitterLimit limit = EmitterLimit::Finite);

// Extinction at the QD feature relative to the bare cavity at the same frequency.
struct DipMetrics
{
    double position = 0.0;        // GHz, where the relative drop change is most negative
    double drop_extinction = 0.0; // (T_drop - T_drop,bare) / T_drop,bare, fraction
    double bus_gain = 0.0;        // T_bus - T_bus,bare, in units of the far-detuned bus level
};

/// Locates the most negative relative drop-port change (parabolic refinement
/// between samples) and reports the bus-port gain at that position.
DipMetrics dip_metrics(const PortSpectra& spectra, const PortSpectra& bare);

} // namespace routerkit

#endif
