#ifndef ROUTERKIT_SCANIO_SCAN_HPP
#define ROUTERKIT_SCANIO_SCAN_HPP

#include <optional>
#include <vector>

namespace routerkit::scanio
{

// Either port may be empty. Temperature is carried as metadata only.
struct RawScan
{
    std::vector<double> freq_ghz;
    std::vector<double> bus;
    std::vector<double> drop;
    double integration_s = 0.0;
    std::optional<double> gap_nm;
    std::optional<double> temperature_k;
    std::optional<double> power_uw;

    void validate() const;
};

struct Resonance
{
    double center_ghz = 0.0;
    double kappa_ghz = 0.0; // fitted FWHM
    double q = 0.0;
    double delta_t = 0.0;   // fitted dip depth of the normalized transmission
    int order = -1;         // index of the matching FSR family, -1 if none
};

struct ResonanceTable
{
    std::vector<Resonance> rows;

    void validate() const;
};

/// Divides each port by a rolling median of the counts within +-half_width GHz.
/// Samples that deviate from a first-pass median are flagged as resonances,
/// the flags are widened by the feature's own extent, and the second-pass
/// median ignores them.
RawScan normalize_to_background(const RawScan& scan, double half_width_ghz);

/// Same procedure on a single series.
std::vector<double> normalize_series(const std::vector<double>& x, const std::vector<double>& y,
                                     double half_width_ghz);

struct DetectOptions
{
    double prominence = 0.05;         // minimum dip prominence in normalized units
    std::vector<double> fsr_ghz;      // candidate free spectral ranges, one per mode family
    double fsr_tolerance = 0.02;      // relative
};

/// Local minima above the prominence threshold, each refined by a Lorentzian
/// fit over its own neighbourhood, then grouped into FSR chains.
ResonanceTable detect_resonances(const std::vector<double>& freq_ghz,
                                 const std::vector<double>& transmission, const DetectOptions& options);

/// Labels rows by the FSR family whose chain (successive spacings within the
/// tolerance of that FSR) containing them is the longest.
void assign_mode_orders(ResonanceTable& table, const std::vector<double>& fsr_ghz, double tolerance);

} // namespace routerkit::scanio

#endif
