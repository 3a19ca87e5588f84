#ifndef ROUTERKIT_FITKIT_MODELS_HPP
#define ROUTERKIT_FITKIT_MODELS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "routerkit/broadening.hpp"
#include "routerkit/error.hpp"
#include "routerkit/fitkit/least_squares.hpp"
#include "routerkit/params.hpp"

namespace routerkit::fitkit
{

// ---------------------------------------------------------------- Lorentzian

/// B (1 - d (w/2)^2 / ((x - x0)^2 + (w/2)^2)); d > 0 is a dip, d < 0 a peak.
double lorentzian(double x, double center, double fwhm, double depth, double background);

/// Analytic gradient with respect to (center, fwhm, depth, background).
std::array<double, 4> lorentzian_gradient(double x, double center, double fwhm, double depth,
                                          double background);

struct LorentzianFit
{
    double center = 0.0;     // GHz
    double fwhm = 0.0;       // GHz
    double depth = 0.0;
    double background = 0.0;
    double q = 0.0;          // center / fwhm
    bool degenerate = false; // flat data, nothing to fit
    FitResult fit;
};

/// Fits a single resonance. Flat data is reported as degenerate; fewer than
/// four samples is a Detection error.
LorentzianFit fit_lorentzian(const DataSeries& series, const FitOptions& options = {});

// ----------------------------------------------------------------- Lifetimes

enum class DecayOrder
{
    Single,
    Double,
};

enum class Weighting
{
    Unit,
    Poisson, // sigma = sqrt(max(y, 1))
};

struct LifetimeModel
{
    DecayOrder order = DecayOrder::Single;
    double a1 = 0.0;     // amplitude of the (fast) component
    double gamma1 = 0.0; // 1/ns
    double a2 = 0.0;     // slow component, double order only
    double gamma2 = 0.0;
    double background = 0.0;
    double t0 = 0.0;     // ns, time origin

    /// Counts at time t (background only before t0).
    double operator()(double t) const;
};

struct LifetimeFit
{
    LifetimeModel model;
    FitResult fit;
    bool degenerate = false;
    Warnings warnings;
};

std::vector<double> poisson_sigma(std::span<const double> counts);

/// Fits A e^{-gamma (t - t0)} + B (or the two-exponential sum) to the decay
/// after the count maximum, which fixes t0. Double fits return the fast rate first.
LifetimeFit fit_lifetime(const DataSeries& decay, DecayOrder order,
                         Weighting weighting = Weighting::Poisson, const FitOptions& options = {});

// --------------------------------------------------------- Multi-power spectra

// x is the laser frequency in GHz on any fixed reference; the fit places the QD
// at omega_qd and the cavity at omega_qd - delta on the same axis.
struct PowerSeries
{
    DataSeries drop;
    DataSeries bus; // optional
};

struct MultipowerOptions
{
    int starts = 8;
    std::uint64_t seed = 0;
    // Any of "omega_qd", "delta", "kappa", "sigma_sd", "S<k>", "eta<k>" to hold fixed.
    // A fixed eta<k> takes p0.cavity.eta.
    std::vector<std::string> fixed;
    std::vector<double> initial_saturation; // per series, defaults to 1
    BroadeningMode mode = BroadeningMode::Convolution;
    FitOptions fit;
};

struct MultipowerFit
{
    SystemParams params; // p0 with fitted omega_qd, delta (via omega_cav), kappa and sigma_sd
    std::vector<double> saturation;
    std::vector<double> eta;
    FitResult fit;
    int best_start = 0;
    Warnings warnings;
};

/// Model intensities of one power series on its own axes.
PortSpectra multipower_model(const PowerSeries& series, double saturation, double eta,
                             const SystemParams& p, BroadeningMode mode);

/// Simultaneous fit of drop (and bus) spectra at several powers: shared
/// omega_qd, delta, kappa, sigma_sd; per-power S and eta. The emitter rates
/// come from p0. Randomized multi-start, seeded.
MultipowerFit fit_multipower(std::span<const PowerSeries> series, const SystemParams& p0,
                             const MultipowerOptions& options = {});

// ------------------------------------------------- Neighbouring-mode removal

struct Window
{
    double lo = 0.0;
    double hi = 0.0;
};

struct SecondCavityResult
{
    DataSeries cleaned;             // input minus the neighbour Lorentzian
    std::vector<double> normalized; // cleaned / (background + primary amplitude)
    double neighbor_center = 0.0;
    double neighbor_fwhm = 0.0;
    double neighbor_amplitude = 0.0;
    bool passthrough = false; // neighbour fit failed; input returned
    FitResult fit;
    Warnings warnings;
};

/// Fits B + A_a L_a + A_b L_b over both windows and removes the neighbour
/// mode b across the full axis. Overlapping windows are an InvalidInput error.
SecondCavityResult subtract_second_cavity(const DataSeries& series, Window primary, Window neighbor,
                                          const FitOptions& options = {});

// ---------------------------------------------------------------- Statistics

struct SampleStats
{
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased
};

/// One-pass (Welford) mean and variance.
SampleStats summarize(std::span<const double> values);

} // namespace routerkit::fitkit

#endif
