#include "routerkit/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routerkit/error.hpp"

namespace routerkit
{

namespace
{

constexpr cdouble kI{0.0, 1.0};

void check_emitter(const SystemParams& p, EmitterLimit limit)
{
    if (p.emitter_width() <= 0.0 && limit != EmitterLimit::AllowLossless)
    {
        throw Error(ErrorCode::SingularParameter,
                    "gamma_leak + 2 gamma_dp = 0 requires EmitterLimit::AllowLossless");
    }
}

// i dw + u (gamma_cav/2) (t0 + 1/f), written with rates so that the lossless
// emitter (1/f = 0) needs no special casing.
cdouble emitter_denominator(double dw, cdouble t0, const SystemParams& p)
{
    const double u = p.cavity.q_ratio;
    return kI * dw + u * 0.5 * p.gamma_cav * t0 + u * 0.5 * p.emitter_width();
}

double interpolate(std::span<const double> x, std::span<const double> y, double at)
{
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    if (it == x.begin())
    {
        return y.front();
    }
    if (it == x.end())
    {
        return y.back();
    }
    const auto i = static_cast<std::size_t>(it - x.begin());
    const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
}

} // namespace

void validate_axis(std::span<const double> axis)
{
    if (axis.empty())
    {
        throw Error(ErrorCode::InvalidInput, "empty frequency axis");
    }
    for (std::size_t i = 0; i < axis.size(); ++i)
    {
        if (!std::isfinite(axis[i]))
        {
            throw Error(ErrorCode::InvalidInput, "non-finite frequency axis sample");
        }
        if (i > 0 && !(axis[i] > axis[i - 1]))
        {
            throw Error(ErrorCode::InvalidInput, "frequency axis must be strictly ascending");
        }
    }
}

std::vector<double> uniform_axis(double from, double to, double step)
{
    if (!(step > 0.0) || !(to > from))
    {
        throw Error(ErrorCode::InvalidInput, "uniform axis needs from < to and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        axis[i] = from + static_cast<double>(i) * step;
    }
    axis.back() = std::min(axis.back(), to);
    return axis;
}

cdouble bare_cavity(double delta_omega, const SystemParams& p)
{
    const double detuning = kTwoPi * (delta_omega + p.delta());
    return 1.0 / (1.0 + kI * p.cavity.q_ratio * detuning / (0.5 * p.cavity.kappa));
}

cdouble drop_coefficient(double delta_omega, double saturation, const SystemParams& p,
                         EmitterLimit limit)
{
    check_emitter(p, limit);
    if (saturation < 0.0)
    {
        throw Error(ErrorCode::Domain, "saturation parameter must be >= 0");
    }
    const double u = p.cavity.q_ratio;
    const cdouble t0 = bare_cavity(delta_omega, p);
    if (p.gamma_cav == 0.0 || std::isinf(saturation))
    {
        return -u * t0;
    }
    const double dw = kTwoPi * delta_omega;
    const cdouble scattered =
        u * 0.5 * p.gamma_cav * t0 / ((1.0 + saturation) * emitter_denominator(dw, t0, p));
    return u * t0 * (-1.0 + scattered);
}

cdouble bus_coefficient(double delta_omega, double saturation, const SystemParams& p,
                        EmitterLimit limit)
{
    return 1.0 + drop_coefficient(delta_omega, saturation, p, limit);
}

double critical_power(double delta_omega, const SystemParams& p, EmitterLimit limit)
{
    check_emitter(p, limit);
    if (p.gamma_cav == 0.0)
    {
        return std::numeric_limits<double>::infinity();
    }
    const double u = p.cavity.q_ratio;
    const double gc = p.gamma_cav;
    const double inv_f = p.emitter_width() / gc;
    const double dw = kTwoPi * delta_omega;
    const double total = kTwoPi * (delta_omega + p.delta());
    const double half_kappa = 0.5 * p.cavity.kappa;

    const double t1 = (1.0 + inv_f) * (1.0 + inv_f);
    const double t2 = std::pow(u * total * inv_f / half_kappa, 2);
    const double t3 = -4.0 * dw / gc * total / half_kappa;
    const double t4 = std::pow(2.0 * dw / (gc * u), 2);
    const double t5 = std::pow(2.0 * dw / gc * total / half_kappa, 2);
    return 0.25 * gc * (t1 + t2 + t3 + t4 + t5);
}

double critical_photon_number(double delta_omega, const SystemParams& p, EmitterLimit limit)
{
    const double total_rate = gamma_total(p);
    if (!(total_rate > 0.0))
    {
        throw Error(ErrorCode::Domain, "gamma_tot must be > 0");
    }
    return critical_power(delta_omega, p, limit) / total_rate;
}

double saturation_from_flux(double n_in, double delta_omega, const SystemParams& p,
                            EmitterLimit limit)
{
    if (n_in < 0.0)
    {
        throw Error(ErrorCode::Domain, "photon flux must be >= 0");
    }
    if (n_in == 0.0)
    {
        return 0.0;
    }
    return p.cavity.alpha * n_in / critical_photon_number(delta_omega, p, limit);
}

double local_saturation(const DriveParams& drive, double delta_omega, const SystemParams& p,
                        EmitterLimit limit)
{
    if (drive.kind == DriveParams::Kind::Saturation)
    {
        return drive.value;
    }
    return saturation_from_flux(drive.value, delta_omega, p, limit);
}

BlochState bloch_steady_state(double delta_omega, cdouble b_in, const SystemParams& p,
                              EmitterLimit limit)
{
    if (!std::isfinite(delta_omega) || !std::isfinite(b_in.real()) || !std::isfinite(b_in.imag()))
    {
        throw Error(ErrorCode::Domain, "non-finite drive");
    }
    const double pc = critical_power(delta_omega, p, limit);
    BlochState state;
    state.s_z = -0.5 / (1.0 + std::norm(b_in) / pc);
    if (p.gamma_cav == 0.0)
    {
        state.s = 0.0;
        return state;
    }
    const double u = p.cavity.q_ratio;
    const cdouble t0 = bare_cavity(delta_omega, p);
    const cdouble d = emitter_denominator(kTwoPi * delta_omega, t0, p);
    state.s = -2.0 * kI * u * std::sqrt(0.5 * p.gamma_cav) * state.s_z * b_in * t0 / d;
    return state;
}

PortSpectra spectrum(std::span<const double> axis, const DriveParams& drive, const SystemParams& p,
                     EmitterLimit limit)
{
    validate_axis(axis);
    PortSpectra out;
    out.drop.axis.assign(axis.begin(), axis.end());
    out.bus.axis = out.drop.axis;
    out.drop.values.resize(axis.size());
    out.bus.values.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i)
    {
        const double s = local_saturation(drive, axis[i], p, limit);
        const cdouble t = drop_coefficient(axis[i], s, p, limit);
        out.drop.values[i] = p.cavity.eta * std::norm(t);
        out.bus.values[i] = std::norm(1.0 + t);
    }
    return out;
}

PortSpectra bare_spectrum(std::span<const double> axis, const SystemParams& p)
{
    validate_axis(axis);
    PortSpectra out;
    out.drop.axis.assign(axis.begin(), axis.end());
    out.bus.axis = out.drop.axis;
    out.drop.values.resize(axis.size());
    out.bus.values.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i)
    {
        const cdouble t0 = bare_cavity(axis[i], p);
        out.drop.values[i] = p.cavity.eta * std::norm(t0);
        out.bus.values[i] = std::norm(1.0 - p.cavity.q_ratio * t0);
    }
    return out;
}

ComplexSpectrum drop_amplitudes(std::span<const double> axis, double saturation,
                                const SystemParams& p, EmitterLimit limit)
{
    validate_axis(axis);
    ComplexSpectrum out;
    out.axis.assign(axis.begin(), axis.end());
    out.values.reserve(axis.size());
    for (double x : axis)
    {
        out.values.push_back(drop_coefficient(x, saturation, p, limit));
    }
    return out;
}

DipMetrics dip_metrics(const PortSpectra& spectra, const PortSpectra& bare)
{
    const auto& axis = spectra.drop.axis;
    const std::size_t n = axis.size();
    if (n == 0 || spectra.drop.values.size() != n || bare.drop.values.size() != n ||
        spectra.bus.values.size() != n || bare.bus.values.size() != n)
    {
        throw Error(ErrorCode::InvalidInput, "dip_metrics needs matching, non-empty spectra");
    }
    std::vector<double> rel(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double ref = bare.drop.values[i];
        rel[i] = ref > 0.0 ? (spectra.drop.values[i] - ref) / ref : 0.0;
    }
    const auto imin = static_cast<std::size_t>(std::min_element(rel.begin(), rel.end()) - rel.begin());

    DipMetrics m;
    m.position = axis[imin];
    m.drop_extinction = rel[imin];
    if (imin > 0 && imin + 1 < n)
    {
        // Vertex of the parabola through the three samples around the minimum.
        const double x0 = axis[imin - 1], x1 = axis[imin], x2 = axis[imin + 1];
        const double y0 = rel[imin - 1], y1 = rel[imin], y2 = rel[imin + 1];
        const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
        const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
        const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
        if (a > 0.0)
        {
            const double xv = -b / (2.0 * a);
            if (xv > x0 && xv < x2)
            {
                const double c = y1 - a * x1 * x1 - b * x1;
                m.position = xv;
                m.drop_extinction = std::min(y1, a * xv * xv + b * xv + c);
            }
        }
    }
    m.bus_gain = interpolate(axis, spectra.bus.values, m.position) -
                 interpolate(axis, bare.bus.values, m.position);
    return m;
}

} // namespace routerkit
