#ifndef ROUTERKIT_PARAMS_HPP
#define ROUTERKIT_PARAMS_HPP

#include <numbers>

namespace routerkit
{

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit convention: decay rates and linewidths are angular (rad/ns) inside the
// library; frequencies, detunings and sigma_sd are ordinary GHz. Converting an
// ordinary-frequency quantity to angular multiplies by 2*pi.

/// Angular rate (rad/ns) of an ordinary-frequency linewidth in GHz.
double rate_from_linewidth(double linewidth_ghz);
/// Inverse of rate_from_linewidth.
double linewidth_from_rate(double rate);

struct EmitterParams
{
    double gamma_bulk = 0.0; // rad/ns
    double gamma_leak = 0.0; // rad/ns, decay into non-cavity modes
    double gamma_dp = 0.0;   // rad/ns, pure dephasing
    double omega_qd = 0.0;   // GHz

    void validate() const;
};

struct CavityParams
{
    double kappa = 0.0;     // rad/ns, total loaded linewidth
    double omega_cav = 0.0; // GHz
    double q_ratio = 1.0;   // Q/Q0 in (0, 1]
    double eta = 1.0;       // drop-port intensity scale
    double alpha = 1.0;     // input coupling efficiency

    void validate() const;
};

struct SystemParams
{
    EmitterParams emitter;
    CavityParams cavity;
    double gamma_cav = 0.0; // rad/ns, emission into the cavity mode
    double sigma_sd = 0.0;  // GHz, spectral-diffusion standard deviation

    /// QD-cavity detuning omega_qd - omega_cav in GHz.
    double delta() const { return emitter.omega_qd - cavity.omega_cav; }

    /// Emitter dephasing-broadened width gamma_leak + 2 gamma_dp (rad/ns).
    double emitter_width() const { return emitter.gamma_leak + 2.0 * emitter.gamma_dp; }

    void validate() const;
};

/// Incident drive, expressed either as a saturation parameter or as an
/// incident photon flux per emitter lifetime. Only the authoritative field is
/// meaningful; conversion between them needs alpha and the critical photon
/// number (see scattering.hpp).
struct DriveParams
{
    enum class Kind
    {
        Saturation,
        Flux,
    };

    Kind kind = Kind::Saturation;
    double value = 0.0;

    static DriveParams saturation(double s);
    static DriveParams flux(double n_in);
};

/// f = gamma_cav / (gamma_leak + 2 gamma_dp). Throws SingularParameter when the
/// denominator vanishes; callers wanting the lossless emitter use the flagged
/// limit paths in scattering.hpp instead.
double f_factor(const SystemParams& p);

/// Total emitter decay rate gamma_cav + gamma_leak (non-radiative rate taken as zero).
double gamma_total(const SystemParams& p);

/// Parameter set reported for the 100 nm gap, 7 K device: rates from the
/// lifetime measurements, kappa/2pi = 36.6 GHz, delta = 0.02 kappa,
/// sigma_sd = 0.6 GHz. The cavity sits at 0 GHz.
SystemParams reference_device();

} // namespace routerkit

#endif
