#include "routerkit/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "routerkit/error.hpp"

namespace routerkit
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gap(double gap_nm)
{
    if (!(gap_nm >= 0.0))
    {
        throw Error(ErrorCode::Domain, "gap must be >= 0");
    }
}

double spread(const std::vector<double>& v)
{
    double mean = 0.0;
    for (double x : v)
    {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
    {
        ss += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(v.size()));
    return sd > 0.0 ? sd : std::max(std::abs(mean), 1.0);
}

CouplingModel from_values(std::span<const double> q)
{
    return {q[0], q[1], q[2], q[3]};
}

} // namespace

void CouplingModel::validate() const
{
    if (!(t_cc >= 0.0 && t_cc <= 1.0))
    {
        throw Error(ErrorCode::Domain, "T_cc must lie in [0, 1]");
    }
    if (!(q_int > 0.0 && kappa_g0 > 0.0 && xi > 0.0))
    {
        throw Error(ErrorCode::Domain, "Q_int, kappa_g0 and xi must be positive");
    }
}

double kappa_g(const CouplingModel& m, double gap_nm)
{
    require_gap(gap_nm);
    return m.kappa_g0 * std::exp(-m.xi * gap_nm);
}

double delta_t(const CouplingModel& m, double gap_nm)
{
    const double k = kappa_g(m, gap_nm);
    const double r = (1.0 - k) / (1.0 + k);
    return 1.0 - (m.t_cc + (1.0 - m.t_cc) * r * r);
}

double loaded_q(const CouplingModel& m, double gap_nm)
{
    return m.q_int / (1.0 + kappa_g(m, gap_nm));
}

std::optional<double> critical_gap(const CouplingModel& m)
{
    if (!(m.kappa_g0 > 1.0) || !(m.xi > 0.0))
    {
        return std::nullopt;
    }
    return std::log(m.kappa_g0) / m.xi;
}

void GapSeries::validate() const
{
    std::set<double> gaps;
    for (const GapEntry& e : entries)
    {
        if (!(e.gap_nm > 0.0) || !std::isfinite(e.gap_nm))
        {
            throw Error(ErrorCode::InvalidInput, "gaps must be positive");
        }
        if (!gaps.insert(e.gap_nm).second)
        {
            throw Error(ErrorCode::InvalidInput, "gaps must be distinct");
        }
        if (!(e.delta_t >= 0.0 && e.delta_t <= 1.0))
        {
            throw Error(ErrorCode::InvalidInput, "transmission dips must lie in [0, 1]");
        }
        if (!(e.q > 0.0) || !std::isfinite(e.q))
        {
            throw Error(ErrorCode::InvalidInput, "Q values must be positive");
        }
        if (!(e.delta_t_err >= 0.0) || !(e.q_err >= 0.0))
        {
            throw Error(ErrorCode::InvalidInput, "error bars must be >= 0");
        }
    }
}

CouplingModel initial_coupling_model(const GapSeries& data)
{
    CouplingModel m;
    double dt_max = 0.0;
    double q_max = 0.0;
    for (const GapEntry& e : data.entries)
    {
        dt_max = std::max(dt_max, e.delta_t);
        q_max = std::max(q_max, e.q);
    }
    m.t_cc = std::clamp(1.0 - dt_max, 0.0, 1.0);
    m.q_int = 1.1 * q_max;

    // ln kappa_g = ln kappa_g0 - xi gap, with kappa_g = Q_int/Q - 1.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (const GapEntry& e : data.entries)
    {
        const double k = m.q_int / e.q - 1.0;
        if (k > 0.0)
        {
            sx += e.gap_nm;
            sy += std::log(k);
            sxx += e.gap_nm * e.gap_nm;
            sxy += e.gap_nm * std::log(k);
            n += 1.0;
        }
    }
    const double den = n * sxx - sx * sx;
    m.xi = 0.02;
    m.kappa_g0 = 1.0;
    if (n >= 2.0 && den > 0.0)
    {
        const double slope = (n * sxy - sx * sy) / den;
        if (slope < 0.0)
        {
            m.xi = -slope;
            m.kappa_g0 = std::exp((sy - slope * sx) / n);
        }
    }
    return m;
}

fitkit::FitProblem gap_problem(const GapSeries& data, const CouplingModel& init)
{
    fitkit::DataSeries dip, q;
    for (const GapEntry& e : data.entries)
    {
        dip.x.push_back(e.gap_nm);
        dip.y.push_back(e.delta_t);
        q.x.push_back(e.gap_nm);
        q.y.push_back(e.q);
    }
    const double dip_spread = spread(dip.y);
    const double q_spread = spread(q.y);
    for (const GapEntry& e : data.entries)
    {
        dip.sigma.push_back(e.delta_t_err > 0.0 ? e.delta_t_err : dip_spread);
        q.sigma.push_back(e.q_err > 0.0 ? e.q_err : q_spread);
    }

    fitkit::FitProblem problem;
    problem.model = "gap-series";
    problem.series = {dip, q};
    problem.params = {
        {"t_cc", std::clamp(init.t_cc, 0.0, 1.0), 0.0, 1.0},
        {"q_int", init.q_int, 0.0, kInf},
        {"kappa_g0", init.kappa_g0, 0.0, kInf},
        {"xi", init.xi, 0.0, kInf},
    };
    problem.evaluate = [](std::size_t k, std::span<const double> v, std::span<const double> x) {
        const CouplingModel m = from_values(v);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            y[i] = k == 0 ? delta_t(m, x[i]) : loaded_q(m, x[i]);
        }
        return y;
    };
    return problem;
}

GapFit fit_gap_series(const GapSeries& data, const std::optional<CouplingModel>& init,
                      const fitkit::FitOptions& options)
{
    data.validate();
    if (data.entries.size() < 4)
    {
        throw Error(ErrorCode::Rank, "gap fit has 4 free parameters and needs at least 4 distinct gaps");
    }
    const CouplingModel start = init ? *init : initial_coupling_model(data);
    start.validate();

    GapFit out;
    out.fit = fitkit::least_squares(gap_problem(data, start), options);
    const bool has_errors = std::any_of(data.entries.begin(), data.entries.end(),
                                        [](const GapEntry& e) { return e.delta_t_err > 0.0 || e.q_err > 0.0; });
    if (!has_errors)
    {
        // The spread weights only balance the two series; the scale comes from the scatter.
        for (auto& row : out.fit.covariance)
        {
            for (double& c : row)
            {
                c *= out.fit.chi2_red;
            }
        }
        for (double& s : out.fit.sigma)
        {
            s *= std::sqrt(out.fit.chi2_red);
        }
    }
    std::vector<double> v;
    for (const auto& p : out.fit.params)
    {
        v.push_back(p.value);
    }
    out.model = from_values(v);
    out.critical_gap = critical_gap(out.model);
    if (out.critical_gap)
    {
        // Linear propagation through g* = ln(kappa_g0) / xi.
        const double dk = 1.0 / (out.model.kappa_g0 * out.model.xi);
        const double dx = -std::log(out.model.kappa_g0) / (out.model.xi * out.model.xi);
        const auto& c = out.fit.covariance;
        const double var = dk * dk * c[2][2] + dx * dx * c[3][3] + 2.0 * dk * dx * c[2][3];
        out.critical_gap_sigma = std::sqrt(std::max(var, 0.0));
    }
    return out;
}

} // namespace routerkit
