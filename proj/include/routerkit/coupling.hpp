#ifndef ROUTERKIT_COUPLING_HPP
#define ROUTERKIT_COUPLING_HPP

#include <optional>
#include <vector>

#include "routerkit/fitkit/least_squares.hpp"

namespace routerkit
{

struct CouplingModel
{
    double t_cc = 0.0;     // bus transmission at critical coupling, [0, 1]
    double q_int = 0.0;    // intrinsic Q
    double kappa_g0 = 0.0; // coupling ratio at zero gap
    double xi = 0.0;       // 1/nm

    void validate() const;
};

/// kappa_g = kappa_g0 exp(-xi gap).
double kappa_g(const CouplingModel& m, double gap_nm);

/// Transmission dip 1 - [T_cc + (1 - T_cc) ((1 - kappa_g)/(1 + kappa_g))^2].
double delta_t(const CouplingModel& m, double gap_nm);

/// Loaded Q = Q_int / (1 + kappa_g).
double loaded_q(const CouplingModel& m, double gap_nm);

/// Gap at which kappa_g = 1; empty when kappa_g0 <= 1 (critical coupling not reached).
std::optional<double> critical_gap(const CouplingModel& m);

// Missing error bars are stored as 0.
struct GapEntry
{
    double gap_nm = 0.0;
    double delta_t = 0.0;
    double delta_t_err = 0.0;
    double q = 0.0;
    double q_err = 0.0;
};

struct GapSeries
{
    std::vector<GapEntry> entries;

    void validate() const;
};

struct GapFit
{
    CouplingModel model;
    fitkit::FitResult fit; // parameters t_cc, q_int, kappa_g0, xi
    std::optional<double> critical_gap;
    double critical_gap_sigma = 0.0;
};

/// Rough starting model read off the data: T_cc from the deepest dip, Q_int
/// just above the largest Q, kappa_g0 and xi from a log-linear regression.
CouplingModel initial_coupling_model(const GapSeries& data);

/// Joint weighted fit of the dip and loaded-Q series, which share kappa_g0 and
/// xi. Each point is weighted by its error bar, or by the spread of its series
/// when no error bar is given. Fewer than 4 distinct gaps is a Rank error.
GapFit fit_gap_series(const GapSeries& data, const std::optional<CouplingModel>& init = std::nullopt,
                      const fitkit::FitOptions& options = {});

/// Builds the joint fit problem used by fit_gap_series (exposed for diagnostics).
fitkit::FitProblem gap_problem(const GapSeries& data, const CouplingModel& init);

} // namespace routerkit

#endif
