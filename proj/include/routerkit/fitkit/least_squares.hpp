#ifndef ROUTERKIT_FITKIT_LEAST_SQUARES_HPP
#define ROUTERKIT_FITKIT_LEAST_SQUARES_HPP

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace routerkit::fitkit
{

// One data series; an empty sigma means unit weights.
struct DataSeries
{
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma;

    void validate() const;
};

struct Parameter
{
    std::string name;
    double value = 0.0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool fixed = false;
};

/// Model of one series: receives the series index, that series' local
/// parameter vector (ordered by the sharing map) and the abscissae; returns
/// predictions of the same length.
using SeriesModel = std::function<std::vector<double>(std::size_t series, std::span<const double> local,
                                                      std::span<const double> x)>;

struct FitProblem
{
    std::string model;
    std::vector<DataSeries> series;
    std::vector<Parameter> params;
    // sharing[k][j] is the index into params of the j-th local parameter of series k.
    // Empty means every series sees the full parameter vector.
    std::vector<std::vector<std::size_t>> sharing;
    SeriesModel evaluate;

    void validate() const;
};

enum class FitStatus
{
    Converged,
    MaxIter,
    Singular,
};

const char* to_string(FitStatus status);

struct FitResult
{
    std::string model;
    std::vector<Parameter> params; // best-fit values
    std::vector<double> sigma;     // 1-sigma, zero for fixed parameters
    std::vector<std::vector<double>> covariance; // over all parameters, zero rows for fixed
    double cost = 0.0;             // 0.5 * sum r^2
    double chi2_red = 0.0;
    FitStatus status = FitStatus::Converged;
    int n_iter = 0;
    std::size_t n_data = 0;
    std::vector<double> cost_history; // cost after each accepted step, starting with the initial cost

    double value(const std::string& name) const;
    double uncertainty(const std::string& name) const;
};

struct FitOptions
{
    int max_iter = 500;
    double lambda0 = 1e-3;
    double cost_tol = 1e-10; // relative cost change
    double step_tol = 1e-12; // relative step norm
    double fd_step = 1e-6;   // relative central-difference step
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on weighted residuals
/// (model - y) / sigma. Jacobian by central differences; bounds by projection.
/// Throws Error(Evaluation) when the model returns a non-finite value.
FitResult least_squares(const FitProblem& problem, const FitOptions& options = {});

/// Weighted residuals (model - y) / sigma of series k alone.
std::vector<double> series_residuals(const FitProblem& problem, std::span<const double> values,
                                     std::size_t k);

/// Weighted residual vector of all series at a full parameter vector.
std::vector<double> residuals(const FitProblem& problem, std::span<const double> values);

/// Central-difference Jacobian of residuals() with respect to the free
/// parameters (columns in parameter order, fixed ones skipped). Only the
/// series that see a parameter through the sharing map are re-evaluated.
std::vector<std::vector<double>> numerical_jacobian(const FitProblem& problem,
                                                    std::span<const double> values,
                                                    double relative_step = 1e-6);

} // namespace routerkit::fitkit

#endif
