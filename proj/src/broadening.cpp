#include "routerkit/broadening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace routerkit
{

namespace
{

constexpr double kTruncation = 5.0; // kernel half-width in sigma

double gaussian(double x, double sigma)
{
    const double z = x / sigma;
    return std::exp(-0.5 * z * z);
}

// Standardized quadrature nodes z in [-5, 5] with trapezoid weights times the
// Gaussian, normalized to unit mass. Node spacing resolves both the Gaussian
// and the emitter response.
struct Quadrature
{
    std::vector<double> z;
    std::vector<double> w;
};

Quadrature make_quadrature(double sigma, const SystemParams& p)
{
    const double feature = std::max(gamma_total(p), p.emitter_width()) / (4.0 * std::numbers::pi);
    std::size_t n = 201;
    if (feature > 0.0)
    {
        const auto needed = static_cast<std::size_t>(std::ceil(2.0 * kTruncation * sigma / (0.1 * feature)));
        n = std::max(n, needed | 1U);
    }
    Quadrature q;
    q.z.resize(n);
    q.w.resize(n);
    const double dz = 2.0 * kTruncation / static_cast<double>(n - 1);
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        q.z[j] = -kTruncation + dz * static_cast<double>(j);
        q.w[j] = std::exp(-0.5 * q.z[j] * q.z[j]) * ((j == 0 || j + 1 == n) ? 0.5 : 1.0);
        mass += q.w[j];
    }
    for (double& w : q.w)
    {
        w /= mass;
    }
    return q;
}

double uniform_spacing(std::span<const double> axis)
{
    validate_axis(axis);
    if (axis.size() < 2)
    {
        return 0.0;
    }
    const double h = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
    for (std::size_t i = 1; i < axis.size(); ++i)
    {
        if (std::abs((axis[i] - axis[i - 1]) - h) > 1e-6 * h)
        {
            throw Error(ErrorCode::InvalidInput, "convolution requires a uniform frequency axis");
        }
    }
    return h;
}

SystemParams shifted_emitter(const SystemParams& p, double shift)
{
    SystemParams q = p;
    q.emitter.omega_qd += shift;
    return q;
}

} // namespace

GaussianKernel make_kernel(double sigma, double spacing, double center)
{
    if (!(sigma > 0.0) || !(spacing > 0.0))
    {
        throw Error(ErrorCode::Domain, "kernel needs sigma > 0 and spacing > 0");
    }
    GaussianKernel k;
    k.sigma = sigma;
    k.center = center;
    const auto lo = static_cast<long>(std::ceil((center - kTruncation * sigma) / spacing));
    const auto hi = static_cast<long>(std::floor((center + kTruncation * sigma) / spacing));
    double mass = 0.0;
    for (long j = lo; j <= hi; ++j)
    {
        const double y = static_cast<double>(j) * spacing;
        const double w = gaussian(y - center, sigma) * ((j == lo || j == hi) ? 0.5 : 1.0);
        k.offsets.push_back(y);
        k.weights.push_back(w);
        mass += w;
    }
    for (double& w : k.weights)
    {
        w /= mass;
    }
    return k;
}

double sd_at_detuning(const SdModel& m, double delta)
{
    return std::max(0.0, m.slope * delta + m.intercept);
}

SdModel fit_sd_model(std::span<const double> deltas, std::span<const double> sigmas)
{
    if (deltas.size() != sigmas.size() || deltas.size() < 2)
    {
        throw Error(ErrorCode::InvalidInput, "linear spectral-diffusion fit needs >= 2 pairs");
    }
    const double n = static_cast<double>(deltas.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
    {
        mx += deltas[i];
        my += sigmas[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
    {
        sxx += (deltas[i] - mx) * (deltas[i] - mx);
        sxy += (deltas[i] - mx) * (sigmas[i] - my);
    }
    if (sxx <= 0.0)
    {
        throw Error(ErrorCode::InvalidInput, "linear spectral-diffusion fit needs distinct detunings");
    }
    SdModel m;
    m.slope = sxy / sxx;
    m.intercept = my - m.slope * mx;
    return m;
}

RealSpectrum convolve_spectrum(const RealSpectrum& raw, double sigma_sd, double center,
                               Warnings* warnings)
{
    if (raw.axis.size() != raw.values.size())
    {
        throw Error(ErrorCode::InvalidInput, "spectrum axis and values differ in length");
    }
    if (sigma_sd < 0.0)
    {
        throw Error(ErrorCode::Domain, "sigma_sd must be >= 0");
    }
    const double h = uniform_spacing(raw.axis);
    if (sigma_sd == 0.0 || raw.axis.size() < 2)
    {
        return raw;
    }
    if (sigma_sd < 0.25 * h)
    {
        std::ostringstream msg;
        msg << "sigma_sd = " << sigma_sd << " GHz is below a quarter of the grid spacing " << h
            << " GHz; spectrum returned unbroadened";
        warn(warnings, msg.str());
        return raw;
    }
    if (sigma_sd < 4.0 * h)
    {
        std::ostringstream msg;
        msg << "grid spacing " << h << " GHz exceeds sigma_sd/4 = " << 0.25 * sigma_sd << " GHz";
        throw Error(ErrorCode::AxisTooCoarse, msg.str());
    }

    const GaussianKernel kernel = make_kernel(sigma_sd, h, center);
    const auto n = static_cast<long>(raw.values.size());
    RealSpectrum out;
    out.axis = raw.axis;
    out.values.assign(raw.values.size(), 0.0);
    for (long i = 0; i < n; ++i)
    {
        double acc = 0.0;
        for (std::size_t j = 0; j < kernel.offsets.size(); ++j)
        {
            const long shift = std::lround(kernel.offsets[j] / h);
            const long src = std::clamp(i - shift, 0L, n - 1);
            acc += kernel.weights[j] * raw.values[static_cast<std::size_t>(src)];
        }
        out.values[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

PortSpectra broadened_spectrum(std::span<const double> axis, const DriveParams& drive,
                               const SystemParams& p, BroadeningMode mode, EmitterLimit limit,
                               Warnings* warnings)
{
    if (p.sigma_sd == 0.0)
    {
        return spectrum(axis, drive, p, limit);
    }
    if (mode == BroadeningMode::Ensemble)
    {
        return broadened_at(axis, drive, p, mode, limit);
    }
    PortSpectra raw = spectrum(axis, drive, p, limit);
    raw.drop = convolve_spectrum(raw.drop, p.sigma_sd, 0.0, warnings);
    raw.bus = convolve_spectrum(raw.bus, p.sigma_sd, 0.0, nullptr);
    return raw;
}

PortSpectra broadened_bare(std::span<const double> axis, const SystemParams& p,
                           BroadeningMode mode, Warnings* warnings)
{
    PortSpectra bare = bare_spectrum(axis, p);
    if (p.sigma_sd == 0.0 || mode == BroadeningMode::Ensemble)
    {
        return bare;
    }
    bare.drop = convolve_spectrum(bare.drop, p.sigma_sd, 0.0, warnings);
    bare.bus = convolve_spectrum(bare.bus, p.sigma_sd, 0.0, nullptr);
    return bare;
}

PortSpectra broadened_at(std::span<const double> points, const DriveParams& drive,
                         const SystemParams& p, BroadeningMode mode, EmitterLimit limit)
{
    if (p.sigma_sd == 0.0)
    {
        return spectrum(points, drive, p, limit);
    }
    validate_axis(points);
    const Quadrature q = make_quadrature(p.sigma_sd, p);
    PortSpectra out;
    out.drop.axis.assign(points.begin(), points.end());
    out.bus.axis = out.drop.axis;
    out.drop.values.assign(points.size(), 0.0);
    out.bus.values.assign(points.size(), 0.0);

    std::vector<SystemParams> shifted;
    if (mode == BroadeningMode::Ensemble)
    {
        shifted.reserve(q.z.size());
        for (double z : q.z)
        {
            shifted.push_back(shifted_emitter(p, p.sigma_sd * z));
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        double drop = 0.0;
        double bus = 0.0;
        for (std::size_t j = 0; j < q.z.size(); ++j)
        {
            // Convolution: T(x - y). Ensemble: QD moved by y, so the laser sits at
            // x - y from it while the cavity stays put.
            const double x = points[i] - p.sigma_sd * q.z[j];
            const SystemParams& pj = mode == BroadeningMode::Ensemble ? shifted[j] : p;
            const double s = local_saturation(drive, x, pj, limit);
            const cdouble t = drop_coefficient(x, s, pj, limit);
            drop += q.w[j] * std::norm(t);
            bus += q.w[j] * std::norm(1.0 + t);
        }
        out.drop.values[i] = p.cavity.eta * drop;
        out.bus.values[i] = bus;
    }
    return out;
}

PortSpectra broadened_bare_at(std::span<const double> points, const SystemParams& p,
                              BroadeningMode mode)
{
    if (p.sigma_sd == 0.0 || mode == BroadeningMode::Ensemble)
    {
        return bare_spectrum(points, p);
    }
    validate_axis(points);
    const Quadrature q = make_quadrature(p.sigma_sd, p);
    PortSpectra out;
    out.drop.axis.assign(points.begin(), points.end());
    out.bus.axis = out.drop.axis;
    out.drop.values.assign(points.size(), 0.0);
    out.bus.values.assign(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        for (std::size_t j = 0; j < q.z.size(); ++j)
        {
            const cdouble t0 = bare_cavity(points[i] - p.sigma_sd * q.z[j], p);
            out.drop.values[i] += q.w[j] * std::norm(t0);
            out.bus.values[i] += q.w[j] * std::norm(1.0 - p.cavity.q_ratio * t0);
        }
        out.drop.values[i] *= p.cavity.eta;
    }
    return out;
}

double averaged_critical_photon_number(double delta_omega, const SystemParams& p,
                                       BroadeningMode mode, EmitterLimit limit)
{
    if (p.sigma_sd == 0.0)
    {
        return critical_photon_number(delta_omega, p, limit);
    }
    const Quadrature q = make_quadrature(p.sigma_sd, p);
    double acc = 0.0;
    for (std::size_t j = 0; j < q.z.size(); ++j)
    {
        const double y = p.sigma_sd * q.z[j];
        const SystemParams pj = mode == BroadeningMode::Ensemble ? shifted_emitter(p, y) : p;
        acc += q.w[j] * critical_photon_number(delta_omega - y, pj, limit);
    }
    return acc;
}

DipMetrics broadened_dip(const DriveParams& drive, const SystemParams& p, const DipSearch& search)
{
    const double feature = gamma_total(p) / (4.0 * std::numbers::pi);
    const double half_width =
        search.half_width > 0.0 ? search.half_width : 6.0 * p.sigma_sd + 20.0 * feature + 1.0;
    double spacing = search.spacing;
    if (p.sigma_sd > 0.0 && p.sigma_sd < 4.0 * spacing)
    {
        spacing = 0.25 * p.sigma_sd;
    }
    const std::vector<double> axis = uniform_axis(-half_width, half_width, spacing);
    const PortSpectra spectra = broadened_spectrum(axis, drive, p, search.mode, search.limit);
    const PortSpectra bare = broadened_bare(axis, p, search.mode);
    return dip_metrics(spectra, bare);
}

double half_depth_flux(const SystemParams& p, const DipSearch& search)
{
    const double target = 0.5 * broadened_dip(DriveParams::flux(0.0), p, search).drop_extinction;
    auto excess = [&](double n_in) {
        return broadened_dip(DriveParams::flux(n_in), p, search).drop_extinction - target;
    };
    if (!(target < 0.0))
    {
        throw Error(ErrorCode::Domain, "no drop-port dip at zero power");
    }
    double lo = 1e-6;
    double hi = 1.0;
    while (excess(hi) < 0.0)
    {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e9)
        {
            throw Error(ErrorCode::Convergence, "dip does not saturate");
        }
    }
    for (int it = 0; it < 80 && hi / lo > 1.0 + 1e-10; ++it)
    {
        const double mid = std::sqrt(lo * hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

RoutingPoint routing_at_cavity(double delta, const DriveParams& drive, const SystemParams& p,
                               const std::optional<SdModel>& sd, BroadeningMode mode)
{
    SystemParams q = p;
    q.emitter.omega_qd = p.cavity.omega_cav + delta;
    q.sigma_sd = sd ? sd_at_detuning(*sd, delta) : p.sigma_sd;
    const double x = -delta; // laser on the cavity
    const std::vector<double> point{x};
    const PortSpectra spectra = broadened_at(point, drive, q, mode);
    const PortSpectra bare = broadened_bare_at(point, q, mode);

    RoutingPoint r;
    r.delta = delta;
    r.sigma_sd = q.sigma_sd;
    r.drop_extinction = (spectra.drop.values[0] - bare.drop.values[0]) / bare.drop.values[0];
    r.bus_gain = spectra.bus.values[0] - bare.bus.values[0];
    return r;
}

} // namespace routerkit
