#include "routerkit/fitkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "routerkit/parallel.hpp"
#include "routerkit/scattering.hpp"

namespace routerkit::fitkit
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v)
{
    if (v.empty())
    {
        return 0.0;
    }
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0)
    {
        m = 0.5 * (m + *std::max_element(v.begin(), mid));
    }
    return m;
}

void require_ascending(const std::vector<double>& x, const char* what)
{
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        if (!(x[i] > x[i - 1]))
        {
            throw Error(ErrorCode::InvalidInput, std::string(what) + " axis must be strictly ascending");
        }
    }
}

// Width of the feature at index i above/below `base`, from the half-height crossings.
double half_width_estimate(std::span<const double> x, std::span<const double> y, std::size_t i,
                           double base, std::size_t lo, std::size_t hi)
{
    const double half = 0.5 * std::abs(y[i] - base);
    std::size_t l = i;
    while (l > lo && std::abs(y[l] - base) > half)
    {
        --l;
    }
    std::size_t r = i;
    while (r + 1 < hi && std::abs(y[r] - base) > half)
    {
        ++r;
    }
    const double spacing = (x[hi - 1] - x[lo]) / static_cast<double>(std::max<std::size_t>(hi - lo - 1, 1));
    return std::max(x[r] - x[l], 2.0 * spacing);
}

double lorentz_peak(double x, double c, double w)
{
    const double h = 0.5 * w;
    return h * h / ((x - c) * (x - c) + h * h);
}

} // namespace

// ---------------------------------------------------------------- Lorentzian

double lorentzian(double x, double center, double fwhm, double depth, double background)
{
    return background * (1.0 - depth * lorentz_peak(x, center, fwhm));
}

std::array<double, 4> lorentzian_gradient(double x, double center, double fwhm, double depth,
                                          double background)
{
    const double u = x - center;
    const double h = 0.5 * fwhm;
    const double den = u * u + h * h;
    const double l = h * h / den;
    return {
        -background * depth * 2.0 * u * h * h / (den * den),
        -background * depth * h * u * u / (den * den),
        -background * l,
        1.0 - depth * l,
    };
}

LorentzianFit fit_lorentzian(const DataSeries& series, const FitOptions& options)
{
    series.validate();
    require_ascending(series.x, "resonance");
    const std::size_t n = series.x.size();
    if (n < 4)
    {
        throw Error(ErrorCode::Detection, "need at least 4 samples to fit a resonance");
    }

    // Background from the outer tenth on each side.
    const std::size_t edge = std::max<std::size_t>(2, n / 10);
    std::vector<double> outer(series.y.begin(), series.y.begin() + static_cast<std::ptrdiff_t>(edge));
    outer.insert(outer.end(), series.y.end() - static_cast<std::ptrdiff_t>(edge), series.y.end());
    const double b0 = median(outer);

    std::size_t ext = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (std::abs(series.y[i] - b0) > std::abs(series.y[ext] - b0))
        {
            ext = i;
        }
    }

    LorentzianFit out;
    const double scale = std::max(std::abs(b0), std::numeric_limits<double>::min());
    if (std::abs(series.y[ext] - b0) <= 1e-12 * scale)
    {
        out.degenerate = true;
        out.background = b0;
        out.fit.model = "lorentzian";
        out.fit.status = FitStatus::Singular;
        out.fit.n_data = n;
        return out;
    }
    if (ext == 0 || ext + 1 == n)
    {
        throw Error(ErrorCode::Detection, "no resonance extremum inside the data window");
    }
    if (b0 == 0.0)
    {
        throw Error(ErrorCode::Detection, "background level is zero; depth is undefined");
    }

    // Centre is fitted as an offset from the initial guess so that the relative
    // finite-difference step stays small against the linewidth.
    const double x_ref = series.x[ext];
    FitProblem problem;
    problem.model = "lorentzian";
    problem.series = {series};
    problem.params = {
        {"center", 0.0},
        {"fwhm", half_width_estimate(series.x, series.y, ext, b0, 0, n), 0.0},
        {"depth", 1.0 - series.y[ext] / b0},
        {"background", b0},
    };
    problem.params[1].lower = 1e-12 * (series.x.back() - series.x.front());
    problem.evaluate = [x_ref](std::size_t, std::span<const double> q, std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            y[i] = lorentzian(x[i] - x_ref, q[0], q[1], q[2], q[3]);
        }
        return y;
    };

    out.fit = least_squares(problem, options);
    out.fit.params[0].value += x_ref;
    out.center = out.fit.params[0].value;
    out.fwhm = out.fit.params[1].value;
    out.depth = out.fit.params[2].value;
    out.background = out.fit.params[3].value;
    out.q = std::abs(out.center) / out.fwhm;
    return out;
}

// ----------------------------------------------------------------- Lifetimes

double LifetimeModel::operator()(double t) const
{
    if (t < t0)
    {
        return background;
    }
    const double dt = t - t0;
    double v = background + a1 * std::exp(-gamma1 * dt);
    if (order == DecayOrder::Double)
    {
        v += a2 * std::exp(-gamma2 * dt);
    }
    return v;
}

std::vector<double> poisson_sigma(std::span<const double> counts)
{
    std::vector<double> s(counts.size());
    std::transform(counts.begin(), counts.end(), s.begin(),
                   [](double c) { return std::sqrt(std::max(c, 1.0)); });
    return s;
}

namespace
{

FitProblem lifetime_problem(const DataSeries& data, DecayOrder order, double t0)
{
    FitProblem problem;
    problem.model = order == DecayOrder::Single ? "lifetime-single" : "lifetime-double";
    problem.series = {data};
    problem.evaluate = [order, t0](std::size_t, std::span<const double> q, std::span<const double> t) {
        LifetimeModel m;
        m.order = order;
        m.t0 = t0;
        m.a1 = q[0];
        m.gamma1 = q[1];
        if (order == DecayOrder::Double)
        {
            m.a2 = q[2];
            m.gamma2 = q[3];
        }
        m.background = q.back();
        std::vector<double> y(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
        {
            y[i] = m(t[i]);
        }
        return y;
    };
    return problem;
}

Parameter amplitude(const char* name, double v)
{
    return {name, std::max(v, 0.0), 0.0, kInf};
}

Parameter rate(const char* name, double v)
{
    return {name, std::max(v, 1e-9), 1e-9, kInf};
}

} // namespace

LifetimeFit fit_lifetime(const DataSeries& decay, DecayOrder order, Weighting weighting,
                         const FitOptions& options)
{
    decay.validate();
    require_ascending(decay.x, "time");
    for (double c : decay.y)
    {
        if (c < 0.0)
        {
            throw Error(ErrorCode::InvalidInput, "counts must be non-negative");
        }
    }

    const auto peak = static_cast<std::size_t>(
        std::distance(decay.y.begin(), std::max_element(decay.y.begin(), decay.y.end())));
    DataSeries data;
    data.x.assign(decay.x.begin() + static_cast<std::ptrdiff_t>(peak), decay.x.end());
    data.y.assign(decay.y.begin() + static_cast<std::ptrdiff_t>(peak), decay.y.end());
    if (!decay.sigma.empty())
    {
        data.sigma.assign(decay.sigma.begin() + static_cast<std::ptrdiff_t>(peak), decay.sigma.end());
    }
    else if (weighting == Weighting::Poisson)
    {
        data.sigma = poisson_sigma(data.y);
    }
    const std::size_t needed = order == DecayOrder::Single ? 4 : 6;
    if (data.x.size() < needed)
    {
        throw Error(ErrorCode::InvalidInput, "too few samples after the count maximum");
    }
    const double t0 = data.x.front();
    const double span = data.x.back() - t0;

    // Background from the last tenth, amplitude from the peak, rate from a
    // log-linear regression over the well-above-background samples.
    const std::size_t tail = std::max<std::size_t>(3, data.y.size() / 10);
    const double b0 = median(std::vector<double>(data.y.end() - static_cast<std::ptrdiff_t>(tail), data.y.end()));
    const double a0 = std::max(data.y.front() - b0, 0.0);
    double g0 = 5.0 / span;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
        for (std::size_t i = 0; i < data.y.size(); ++i)
        {
            const double v = data.y[i] - b0;
            if (a0 > 0.0 && v > 0.05 * a0)
            {
                const double dt = data.x[i] - t0;
                const double lv = std::log(v);
                sx += dt;
                sy += lv;
                sxx += dt * dt;
                sxy += dt * lv;
                m += 1.0;
            }
        }
        const double den = m * sxx - sx * sx;
        if (m >= 2.0 && den > 0.0)
        {
            const double slope = (m * sxy - sx * sy) / den;
            if (slope < 0.0)
            {
                g0 = -slope;
            }
        }
    }

    LifetimeFit out;
    out.model.order = order;
    out.model.t0 = t0;

    if (order == DecayOrder::Single)
    {
        FitProblem problem = lifetime_problem(data, order, t0);
        problem.params = {amplitude("a1", a0), rate("gamma1", g0), {"background", b0}};
        out.fit = least_squares(problem, options);
        out.model.a1 = out.fit.params[0].value;
        out.model.gamma1 = out.fit.params[1].value;
        out.model.background = out.fit.params[2].value;
        if (out.fit.status == FitStatus::Singular || out.model.a1 <= 2.0 * out.fit.sigma[0])
        {
            out.degenerate = true;
            out.warnings.push_back("decay amplitude is not significant; the rate is unidentifiable");
        }
        return out;
    }

    // Two-exponential: several fast/slow splits, keep the lowest cost.
    bool have = false;
    for (double ratio : {2.0, 4.0, 8.0, 16.0})
    {
        const double slow = 0.8 * g0;
        FitProblem problem = lifetime_problem(data, order, t0);
        problem.params = {amplitude("a1", 0.7 * a0), rate("gamma1", ratio * slow),
                          amplitude("a2", 0.3 * a0), rate("gamma2", slow), {"background", b0}};
        FitResult r;
        try
        {
            r = least_squares(problem, options);
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::Evaluation)
            {
                throw;
            }
            continue;
        }
        if (!have || r.cost < out.fit.cost)
        {
            out.fit = std::move(r);
            have = true;
        }
    }
    if (!have)
    {
        throw Error(ErrorCode::Convergence, "two-exponential lifetime fit failed from every start");
    }
    auto& q = out.fit.params;
    if (q[3].value > q[1].value)
    {
        // Fast component first.
        std::swap(q[0].value, q[2].value);
        std::swap(q[1].value, q[3].value);
        std::swap(out.fit.sigma[0], out.fit.sigma[2]);
        std::swap(out.fit.sigma[1], out.fit.sigma[3]);
        std::swap(out.fit.covariance[0], out.fit.covariance[2]);
        std::swap(out.fit.covariance[1], out.fit.covariance[3]);
        for (auto& row : out.fit.covariance)
        {
            std::swap(row[0], row[2]);
            std::swap(row[1], row[3]);
        }
    }
    out.model.a1 = q[0].value;
    out.model.gamma1 = q[1].value;
    out.model.a2 = q[2].value;
    out.model.gamma2 = q[3].value;
    out.model.background = q[4].value;
    if (!(out.model.gamma1 >= 1.5 * out.model.gamma2) || out.fit.status == FitStatus::Singular)
    {
        out.degenerate = true;
        std::ostringstream msg;
        msg << "two-exponential fit is degenerate: rate ratio " << out.model.gamma1 / out.model.gamma2
            << " < 1.5; the data look single-exponential";
        out.warnings.push_back(msg.str());
    }
    return out;
}

// --------------------------------------------------------- Multi-power spectra

namespace
{

enum Shared : std::size_t
{
    kOmegaQd,
    kDelta,
    kKappa,
    kSigma,
    kShared,
};

SystemParams apply_shared(const SystemParams& p0, std::span<const double> q)
{
    SystemParams p = p0;
    p.emitter.omega_qd = q[kOmegaQd];
    p.cavity.omega_cav = q[kOmegaQd] - q[kDelta];
    p.cavity.kappa = rate_from_linewidth(q[kKappa]);
    p.sigma_sd = q[kSigma];
    return p;
}

std::vector<double> shifted(std::span<const double> x, double by)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        out[i] = x[i] - by;
    }
    return out;
}

} // namespace

PortSpectra multipower_model(const PowerSeries& series, double saturation, double eta,
                             const SystemParams& p, BroadeningMode mode)
{
    SystemParams q = p;
    q.cavity.eta = eta;
    PortSpectra out;
    const DriveParams drive = DriveParams::saturation(saturation);
    out.drop = broadened_at(shifted(series.drop.x, p.emitter.omega_qd), drive, q, mode).drop;
    if (!series.bus.x.empty())
    {
        out.bus = broadened_at(shifted(series.bus.x, p.emitter.omega_qd), drive, q, mode).bus;
    }
    return out;
}

MultipowerFit fit_multipower(std::span<const PowerSeries> series, const SystemParams& p0,
                             const MultipowerOptions& options)
{
    if (series.empty())
    {
        throw Error(ErrorCode::InvalidInput, "multi-power fit needs at least one power series");
    }
    if (options.starts < 1)
    {
        throw Error(ErrorCode::InvalidInput, "multi-power fit needs at least one start");
    }
    if (!options.initial_saturation.empty() && options.initial_saturation.size() != series.size())
    {
        throw Error(ErrorCode::InvalidInput, "one initial saturation per series is required");
    }
    p0.validate();

    const std::size_t n = series.size();
    // Diffusion wider than the scanned window is not identifiable.
    double span = 0.0;
    for (const PowerSeries& s : series)
    {
        for (const DataSeries* d : {&s.drop, &s.bus})
        {
            if (d->x.size() > 1)
            {
                span = std::max(span, d->x.back() - d->x.front());
            }
        }
    }
    FitProblem problem;
    problem.model = "multipower";
    problem.params = {
        {"omega_qd", p0.emitter.omega_qd},
        {"delta", p0.delta()},
        {"kappa", linewidth_from_rate(p0.cavity.kappa), 1e-6, kInf},
        {"sigma_sd", p0.sigma_sd, 0.0, span > 0.0 ? span : kInf},
    };
    std::vector<bool> is_bus;
    for (std::size_t k = 0; k < n; ++k)
    {
        const PowerSeries& s = series[k];
        s.drop.validate();
        require_ascending(s.drop.x, "drop-port frequency");
        if (s.drop.x.empty())
        {
            throw Error(ErrorCode::InvalidInput, "every power series needs drop-port data");
        }
        // Scale from the bare drop level at the starting point.
        const PortSpectra bare = bare_spectrum(shifted(s.drop.x, p0.emitter.omega_qd), p0);
        const double bare_max = *std::max_element(bare.drop.values.begin(), bare.drop.values.end());
        const double y_max = *std::max_element(s.drop.y.begin(), s.drop.y.end());
        const std::string tag = std::to_string(k);
        const bool eta_fixed = std::find(options.fixed.begin(), options.fixed.end(), "eta" + tag) != options.fixed.end();
        double eta0 = bare_max > 0.0 && y_max > 0.0 ? p0.cavity.eta * y_max / bare_max : 1.0;
        if (eta_fixed)
        {
            eta0 = p0.cavity.eta;
        }
        const double s0 = options.initial_saturation.empty() ? 1.0 : options.initial_saturation[k];

        problem.params.push_back({"S" + tag, s0, 0.0, kInf});
        problem.params.push_back({"eta" + tag, eta0, 0.0, kInf});
        const std::vector<std::size_t> map = {kOmegaQd, kDelta, kKappa, kSigma, kShared + 2 * k,
                                              kShared + 2 * k + 1};
        problem.series.push_back(s.drop);
        problem.sharing.push_back(map);
        is_bus.push_back(false);
        if (!s.bus.x.empty())
        {
            s.bus.validate();
            require_ascending(s.bus.x, "bus-port frequency");
            problem.series.push_back(s.bus);
            problem.sharing.push_back(map);
            is_bus.push_back(true);
        }
    }
    for (const std::string& name : options.fixed)
    {
        auto it = std::find_if(problem.params.begin(), problem.params.end(),
                               [&](const Parameter& p) { return p.name == name; });
        if (it == problem.params.end())
        {
            throw Error(ErrorCode::InvalidInput, "unknown multi-power parameter " + name);
        }
        it->fixed = true;
    }

    const BroadeningMode mode = options.mode;
    problem.evaluate = [p0, mode, is_bus](std::size_t k, std::span<const double> q, std::span<const double> x) {
        SystemParams p = apply_shared(p0, q);
        p.cavity.eta = q[kShared + 1];
        const PortSpectra t =
            broadened_at(shifted(x, p.emitter.omega_qd), DriveParams::saturation(q[kShared]), p, mode);
        return is_bus[k] ? t.bus.values : t.drop.values;
    };

    // Start 0 is the supplied guess; the rest are log-uniform perturbations of
    // the quantities that trade off against each other.
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::vector<Parameter>> starts(static_cast<std::size_t>(options.starts), problem.params);
    for (std::size_t s = 1; s < starts.size(); ++s)
    {
        for (auto& par : starts[s])
        {
            const double u = unit(rng);
            if (par.fixed)
            {
                continue;
            }
            if (par.name == "omega_qd" || par.name == "delta")
            {
                par.value += u * 0.5 * std::max(p0.sigma_sd, 0.1);
            }
            else if (par.name == "kappa")
            {
                par.value *= std::exp(0.2 * u);
            }
            else if (par.name == "sigma_sd")
            {
                par.value = std::max(par.value, 0.05) * std::exp(0.7 * u);
            }
            else if (par.name.starts_with("S"))
            {
                par.value = std::max(par.value, 0.05) * std::exp(0.7 * u);
            }
            else
            {
                par.value *= std::exp(0.1 * u);
            }
        }
    }

    std::vector<FitResult> results(starts.size());
    std::vector<std::exception_ptr> failures(starts.size());
    parallel_for(starts.size(), [&](std::size_t s) {
        FitProblem local = problem;
        local.params = starts[s];
        try
        {
            results[s] = least_squares(local, options.fit);
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::Evaluation)
            {
                throw;
            }
            failures[s] = std::current_exception();
        }
    });

    MultipowerFit out;
    std::size_t best = starts.size();
    for (std::size_t s = 0; s < starts.size(); ++s)
    {
        if (!failures[s] && (best == starts.size() || results[s].cost < results[best].cost))
        {
            best = s;
        }
    }
    if (best == starts.size())
    {
        std::rethrow_exception(failures.front());
    }
    out.fit = std::move(results[best]);
    out.best_start = static_cast<int>(best);

    std::vector<double> values(out.fit.params.size());
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        values[i] = out.fit.params[i].value;
    }
    out.params = apply_shared(p0, values);
    for (std::size_t k = 0; k < n; ++k)
    {
        out.saturation.push_back(values[kShared + 2 * k]);
        out.eta.push_back(values[kShared + 2 * k + 1]);
    }

    const bool shared_free = std::any_of(problem.params.begin(), problem.params.begin() + kShared,
                                         [](const Parameter& p) { return !p.fixed; });
    if (n < 2 && shared_free)
    {
        out.warnings.push_back("a single power series cannot separate S from the shared parameters");
    }
    for (std::size_t a = 0; a < n; ++a)
    {
        for (std::size_t b = a + 1; b < n; ++b)
        {
            const double sa = out.saturation[a];
            const double sb = out.saturation[b];
            if (std::abs(sa - sb) <= 1e-3 * std::max({std::abs(sa), std::abs(sb), 1e-12}))
            {
                out.warnings.push_back("series " + std::to_string(a) + " and " + std::to_string(b) +
                                       " have the same saturation; S is degenerate");
            }
        }
    }
    return out;
}

// ------------------------------------------------- Neighbouring-mode removal

SecondCavityResult subtract_second_cavity(const DataSeries& series, Window primary, Window neighbor,
                                          const FitOptions& options)
{
    series.validate();
    require_ascending(series.x, "frequency");
    for (const Window& w : {primary, neighbor})
    {
        if (!(w.hi > w.lo))
        {
            throw Error(ErrorCode::InvalidInput, "window bounds must satisfy lo < hi");
        }
    }
    if (primary.lo <= neighbor.hi && neighbor.lo <= primary.hi)
    {
        throw Error(ErrorCode::InvalidInput, "primary and neighbour windows overlap");
    }

    DataSeries fitted;
    std::vector<std::size_t> in_a, in_b;
    for (std::size_t i = 0; i < series.x.size(); ++i)
    {
        const double x = series.x[i];
        const bool a = x >= primary.lo && x <= primary.hi;
        const bool b = x >= neighbor.lo && x <= neighbor.hi;
        if (a || b)
        {
            (a ? in_a : in_b).push_back(fitted.x.size());
            fitted.x.push_back(x);
            fitted.y.push_back(series.y[i]);
            if (!series.sigma.empty())
            {
                fitted.sigma.push_back(series.sigma[i]);
            }
        }
    }
    if (in_a.size() < 4 || in_b.size() < 4)
    {
        throw Error(ErrorCode::InvalidInput, "each window needs at least 4 samples");
    }

    SecondCavityResult out;
    out.cleaned = series;
    out.normalized = series.y;

    const double b0 = median(fitted.y);
    auto guess = [&](const std::vector<std::size_t>& idx) {
        std::size_t ext = idx.front();
        for (std::size_t i : idx)
        {
            if (std::abs(fitted.y[i] - b0) > std::abs(fitted.y[ext] - b0))
            {
                ext = i;
            }
        }
        const double w = half_width_estimate(fitted.x, fitted.y, ext, b0, idx.front(), idx.back() + 1);
        return std::array<double, 3>{fitted.y[ext] - b0, fitted.x[ext], w};
    };
    const auto ga = guess(in_a);
    const auto gb = guess(in_b);
    const double x_ref = ga[1];

    FitProblem problem;
    problem.model = "double-lorentzian";
    problem.series = {fitted};
    problem.params = {
        {"background", b0},
        {"amplitude_a", ga[0]},
        {"center_a", 0.0},
        {"fwhm_a", ga[2], 0.0, kInf},
        {"amplitude_b", gb[0]},
        {"center_b", gb[1] - x_ref},
        {"fwhm_b", gb[2], 0.0, kInf},
    };
    problem.params[3].lower = problem.params[6].lower = 1e-12 * (series.x.back() - series.x.front());
    problem.evaluate = [x_ref](std::size_t, std::span<const double> q, std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double u = x[i] - x_ref;
            y[i] = q[0] + q[1] * lorentz_peak(u, q[2], q[3]) + q[4] * lorentz_peak(u, q[5], q[6]);
        }
        return y;
    };

    try
    {
        out.fit = least_squares(problem, options);
    }
    catch (const Error& e)
    {
        out.passthrough = true;
        out.warnings.push_back(std::string("neighbour-mode fit failed: ") + e.what());
        return out;
    }
    if (out.fit.status == FitStatus::MaxIter)
    {
        out.passthrough = true;
        out.warnings.push_back("neighbour-mode fit did not converge; input returned unchanged");
        return out;
    }
    out.fit.params[2].value += x_ref;
    out.fit.params[5].value += x_ref;
    const auto& q = out.fit.params;
    out.neighbor_amplitude = q[4].value;
    out.neighbor_center = q[5].value;
    out.neighbor_fwhm = q[6].value;

    const double level = q[0].value + q[1].value;
    for (std::size_t i = 0; i < series.x.size(); ++i)
    {
        out.cleaned.y[i] = series.y[i] - q[4].value * lorentz_peak(series.x[i], q[5].value, q[6].value);
        out.normalized[i] = level != 0.0 ? out.cleaned.y[i] / level : out.cleaned.y[i];
    }
    return out;
}

// ---------------------------------------------------------------- Statistics

SampleStats summarize(std::span<const double> values)
{
    SampleStats s;
    double m2 = 0.0;
    for (double v : values)
    {
        ++s.n;
        const double d = v - s.mean;
        s.mean += d / static_cast<double>(s.n);
        m2 += d * (v - s.mean);
    }
    s.variance = s.n > 1 ? m2 / static_cast<double>(s.n - 1) : 0.0;
    return s;
}

} // namespace routerkit::fitkit
