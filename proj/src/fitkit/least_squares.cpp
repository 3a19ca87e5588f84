#include "routerkit/fitkit/least_squares.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "routerkit/error.hpp"

namespace routerkit::fitkit
{

namespace
{

std::vector<std::size_t> free_indices(const FitProblem& problem)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < problem.params.size(); ++i)
    {
        if (!problem.params[i].fixed)
        {
            idx.push_back(i);
        }
    }
    return idx;
}

std::size_t count_data(const FitProblem& problem)
{
    std::size_t n = 0;
    for (const auto& s : problem.series)
    {
        n += s.y.size();
    }
    return n;
}

bool unit_weighted(const FitProblem& problem)
{
    return std::all_of(problem.series.begin(), problem.series.end(),
                       [](const DataSeries& s) { return s.sigma.empty(); });
}

double project(const Parameter& p, double v)
{
    return std::clamp(v, p.lower, p.upper);
}

std::string describe(const FitProblem& problem, std::span<const double> values)
{
    std::ostringstream out;
    out << "non-finite model output for " << problem.model << " at {";
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        out << (i ? ", " : "") << problem.params[i].name << "=" << values[i];
    }
    out << "}";
    return out.str();
}

double step_for(double value, double relative)
{
    return relative * std::max(std::abs(value), 1e-3);
}

} // namespace

const char* to_string(FitStatus status)
{
    switch (status)
    {
    case FitStatus::Converged: return "converged";
    case FitStatus::MaxIter: return "max-iter";
    case FitStatus::Singular: return "singular";
    }
    return "unknown";
}

void DataSeries::validate() const
{
    if (x.size() != y.size() || (!sigma.empty() && sigma.size() != y.size()))
    {
        throw Error(ErrorCode::InvalidInput, "data series arrays differ in length");
    }
    for (std::size_t i = 0; i < y.size(); ++i)
    {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
        {
            throw Error(ErrorCode::InvalidInput, "data series contains non-finite values");
        }
        if (!sigma.empty() && !(sigma[i] > 0.0))
        {
            throw Error(ErrorCode::InvalidInput, "data uncertainties must be positive");
        }
    }
}

void FitProblem::validate() const
{
    if (!evaluate)
    {
        throw Error(ErrorCode::InvalidInput, "fit problem has no model");
    }
    if (series.empty())
    {
        throw Error(ErrorCode::InvalidInput, "fit problem has no data");
    }
    for (const auto& s : series)
    {
        s.validate();
    }
    bool any_free = false;
    for (const auto& p : params)
    {
        if (!(p.value >= p.lower && p.value <= p.upper) || !std::isfinite(p.value))
        {
            throw Error(ErrorCode::InvalidInput, "initial value of " + p.name + " outside its bounds");
        }
        any_free = any_free || !p.fixed;
    }
    if (!any_free)
    {
        throw Error(ErrorCode::InvalidInput, "fit problem has no free parameter");
    }
    if (!sharing.empty())
    {
        if (sharing.size() != series.size())
        {
            throw Error(ErrorCode::InvalidInput, "sharing map must have one entry per series");
        }
        for (const auto& map : sharing)
        {
            for (std::size_t j : map)
            {
                if (j >= params.size())
                {
                    throw Error(ErrorCode::InvalidInput, "sharing map refers to an unknown parameter");
                }
            }
        }
    }
}

double FitResult::value(const std::string& name) const
{
    for (const auto& p : params)
    {
        if (p.name == name)
        {
            return p.value;
        }
    }
    throw Error(ErrorCode::InvalidInput, "no fit parameter named " + name);
}

double FitResult::uncertainty(const std::string& name) const
{
    for (std::size_t i = 0; i < params.size(); ++i)
    {
        if (params[i].name == name)
        {
            return sigma[i];
        }
    }
    throw Error(ErrorCode::InvalidInput, "no fit parameter named " + name);
}

std::vector<double> series_residuals(const FitProblem& problem, std::span<const double> values,
                                     std::size_t k)
{
    const DataSeries& s = problem.series[k];
    std::vector<double> local;
    std::span<const double> view = values;
    if (!problem.sharing.empty())
    {
        local.reserve(problem.sharing[k].size());
        for (std::size_t j : problem.sharing[k])
        {
            local.push_back(values[j]);
        }
        view = local;
    }
    const std::vector<double> model = problem.evaluate(k, view, s.x);
    if (model.size() != s.y.size())
    {
        throw Error(ErrorCode::Evaluation, "model returned the wrong number of samples");
    }
    std::vector<double> r(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
    {
        if (!std::isfinite(model[i]))
        {
            throw Error(ErrorCode::Evaluation, describe(problem, values));
        }
        const double w = s.sigma.empty() ? 1.0 : s.sigma[i];
        r[i] = (model[i] - s.y[i]) / w;
    }
    return r;
}

std::vector<double> residuals(const FitProblem& problem, std::span<const double> values)
{
    std::vector<double> r;
    r.reserve(count_data(problem));
    for (std::size_t k = 0; k < problem.series.size(); ++k)
    {
        const std::vector<double> part = series_residuals(problem, values, k);
        r.insert(r.end(), part.begin(), part.end());
    }
    return r;
}

std::vector<std::vector<double>> numerical_jacobian(const FitProblem& problem,
                                                    std::span<const double> values,
                                                    double relative_step)
{
    const std::vector<std::size_t> free = free_indices(problem);
    std::vector<std::size_t> offset(problem.series.size() + 1, 0);
    for (std::size_t k = 0; k < problem.series.size(); ++k)
    {
        offset[k + 1] = offset[k] + problem.series[k].y.size();
    }

    std::vector<std::vector<double>> columns;
    columns.reserve(free.size());
    std::vector<double> x(values.begin(), values.end());
    for (std::size_t j : free)
    {
        const Parameter& p = problem.params[j];
        const double h = step_for(x[j], relative_step);
        double up = x[j] + h;
        double down = x[j] - h;
        if (up > p.upper)
        {
            up = x[j];
        }
        if (down < p.lower)
        {
            down = x[j];
        }
        const double saved = x[j];
        const double span = up - down;
        std::vector<double> col(offset.back(), 0.0);
        for (std::size_t k = 0; k < problem.series.size() && span > 0.0; ++k)
        {
            // Series that do not see parameter j have a zero column block.
            if (!problem.sharing.empty() &&
                std::find(problem.sharing[k].begin(), problem.sharing[k].end(), j) == problem.sharing[k].end())
            {
                continue;
            }
            x[j] = up;
            const std::vector<double> r_up = series_residuals(problem, x, k);
            x[j] = down;
            const std::vector<double> r_down = series_residuals(problem, x, k);
            x[j] = saved;
            for (std::size_t i = 0; i < r_up.size(); ++i)
            {
                col[offset[k] + i] = (r_up[i] - r_down[i]) / span;
            }
        }
        columns.push_back(std::move(col));
    }
    return columns;
}

FitResult least_squares(const FitProblem& problem, const FitOptions& options)
{
    problem.validate();
    const std::vector<std::size_t> free = free_indices(problem);
    const auto nf = static_cast<Eigen::Index>(free.size());
    const std::size_t n_data = count_data(problem);

    std::vector<double> x(problem.params.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        x[i] = problem.params[i].value;
    }

    auto to_eigen = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    };
    auto jacobian = [&](const std::vector<double>& at) {
        const auto cols = numerical_jacobian(problem, at, options.fd_step);
        Eigen::MatrixXd J(static_cast<Eigen::Index>(n_data), nf);
        for (Eigen::Index c = 0; c < nf; ++c)
        {
            J.col(c) = to_eigen(cols[static_cast<std::size_t>(c)]);
        }
        return J;
    };

    std::vector<double> r = residuals(problem, x);
    double cost = 0.5 * to_eigen(r).squaredNorm();

    FitResult result;
    result.model = problem.model;
    result.n_data = n_data;
    result.cost_history.push_back(cost);
    result.status = FitStatus::MaxIter;

    double lambda = options.lambda0;
    int iter = 0;
    bool done = cost == 0.0;
    if (done)
    {
        result.status = FitStatus::Converged;
    }
    while (!done && iter < options.max_iter)
    {
        ++iter;
        const Eigen::MatrixXd J = jacobian(x);
        const Eigen::MatrixXd A = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * to_eigen(r);
        Eigen::VectorXd scale = A.diagonal();
        const double floor = std::max(1e-300, 1e-12 * scale.maxCoeff());
        for (Eigen::Index i = 0; i < nf; ++i)
        {
            scale[i] = std::max(scale[i], floor);
        }

        bool accepted = false;
        while (!accepted)
        {
            Eigen::MatrixXd M = A;
            M.diagonal() += lambda * scale;
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
            const Eigen::VectorXd delta = ldlt.solve(-g);
            if (ldlt.info() != Eigen::Success || !delta.allFinite())
            {
                lambda *= 10.0;
                if (lambda > 1e16)
                {
                    done = true;
                    result.status = FitStatus::Converged;
                    break;
                }
                continue;
            }

            std::vector<double> trial = x;
            for (Eigen::Index i = 0; i < nf; ++i)
            {
                const std::size_t j = free[static_cast<std::size_t>(i)];
                trial[j] = project(problem.params[j], x[j] + delta[i]);
            }
            std::vector<double> r_trial = residuals(problem, trial);
            const double cost_trial = 0.5 * to_eigen(r_trial).squaredNorm();
            if (cost_trial < cost)
            {
                double step2 = 0.0, norm2 = 0.0;
                for (std::size_t j : free)
                {
                    step2 += (trial[j] - x[j]) * (trial[j] - x[j]);
                    norm2 += x[j] * x[j];
                }
                const double rel_change = (cost - cost_trial) / cost;
                x = std::move(trial);
                r = std::move(r_trial);
                cost = cost_trial;
                result.cost_history.push_back(cost);
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                if (cost == 0.0 || rel_change < options.cost_tol ||
                    std::sqrt(step2) < options.step_tol * (std::sqrt(norm2) + options.step_tol))
                {
                    done = true;
                    result.status = FitStatus::Converged;
                }
            }
            else
            {
                lambda *= 10.0;
                if (lambda > 1e16)
                {
                    // No descent direction left at machine precision.
                    done = true;
                    result.status = FitStatus::Converged;
                    break;
                }
            }
        }
    }

    result.n_iter = iter;
    result.cost = cost;
    result.params = problem.params;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        result.params[i].value = x[i];
    }
    const auto dof = static_cast<double>(n_data) - static_cast<double>(free.size());
    result.chi2_red = dof > 0.0 ? 2.0 * cost / dof : 0.0;

    const std::size_t np = problem.params.size();
    result.sigma.assign(np, 0.0);
    result.covariance.assign(np, std::vector<double>(np, 0.0));
    const Eigen::MatrixXd J = jacobian(x);
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    const double max_ev = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(max_ev > 0.0) || eig.eigenvalues().minCoeff() <= 1e-14 * max_ev)
    {
        result.status = FitStatus::Singular;
        return result;
    }
    Eigen::MatrixXd cov = A.inverse();
    if (unit_weighted(problem) && dof > 0.0)
    {
        cov *= result.chi2_red;
    }
    for (Eigen::Index a = 0; a < nf; ++a)
    {
        for (Eigen::Index b = 0; b < nf; ++b)
        {
            result.covariance[free[static_cast<std::size_t>(a)]][free[static_cast<std::size_t>(b)]] = cov(a, b);
        }
        result.sigma[free[static_cast<std::size_t>(a)]] = std::sqrt(std::max(0.0, cov(a, a)));
    }
    return result;
}

} // namespace routerkit::fitkit
