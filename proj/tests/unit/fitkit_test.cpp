#include "doctest.h"

#include <cmath>
#include <random>

#include "routerkit/error.hpp"
#include "routerkit/fitkit/models.hpp"

using namespace routerkit;
using namespace routerkit::fitkit;
using doctest::Approx;

namespace
{

FitProblem line_problem()
{
    FitProblem p;
    p.model = "line";
    DataSeries s;
    for (int i = 0; i < 10; ++i)
    {
        s.x.push_back(i);
        s.y.push_back(2.5 * i - 1.0);
    }
    p.series = {s};
    p.params = {{"a", 1.0}, {"b", 0.0}};
    p.evaluate = [](std::size_t, std::span<const double> q, std::span<const double> x) {
        std::vector<double> y;
        for (double v : x)
        {
            y.push_back(q[0] * v + q[1]);
        }
        return y;
    };
    return p;
}

DataSeries dip(double c, double w, double d, double b, double lo, double hi, int n)
{
    DataSeries s;
    for (int i = 0; i <= n; ++i)
    {
        const double x = lo + (hi - lo) * i / n;
        s.x.push_back(x);
        s.y.push_back(lorentzian(x, c, w, d, b));
    }
    return s;
}

} // namespace

TEST_CASE("linear model")
{
    const FitResult r = least_squares(line_problem());
    CHECK(r.status == FitStatus::Converged);
    CHECK(r.value("a") == Approx(2.5).epsilon(1e-10));
    CHECK(r.value("b") == Approx(-1.0).epsilon(1e-10));
    CHECK(r.cost < 1e-20);
    CHECK(r.n_iter <= 10);
}

TEST_CASE("Rosenbrock valley")
{
    FitProblem p;
    p.model = "rosenbrock";
    p.series = {{{0.0, 1.0}, {0.0, 0.0}, {}}};
    p.params = {{"x", -1.2}, {"y", 1.0}};
    p.evaluate = [](std::size_t, std::span<const double> q, std::span<const double>) {
        return std::vector<double>{10.0 * (q[1] - q[0] * q[0]), 1.0 - q[0]};
    };
    const FitResult r = least_squares(p);
    CHECK(r.value("x") == Approx(1.0).epsilon(1e-8));
    CHECK(r.value("y") == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("bounds and fixed parameters")
{
    FitProblem p = line_problem();
    p.params[0].upper = 2.0;
    FitResult r = least_squares(p);
    CHECK(r.value("a") <= 2.0);

    p = line_problem();
    p.params[1].fixed = true;
    r = least_squares(p);
    CHECK(r.value("b") == 0.0);
    CHECK(r.uncertainty("b") == 0.0);
}

TEST_CASE("non-finite model is an evaluation error")
{
    FitProblem p = line_problem();
    p.evaluate = [](std::size_t, std::span<const double>, std::span<const double> x) {
        return std::vector<double>(x.size(), NAN);
    };
    try
    {
        least_squares(p);
        FAIL("expected an error");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::Evaluation);
    }
}

TEST_CASE("Lorentzian fit")
{
    const LorentzianFit f = fit_lorentzian(dip(319000.0, 31.9, 0.6, 1.0, 318800.0, 319200.0, 800));
    CHECK(f.center == Approx(319000.0).epsilon(1e-12));
    CHECK(f.fwhm == Approx(31.9).epsilon(1e-8));
    CHECK(f.depth == Approx(0.6).epsilon(1e-8));
    CHECK(f.q == Approx(10000.0).epsilon(1e-8));
    CHECK_FALSE(f.degenerate);

    const LorentzianFit flat = fit_lorentzian(dip(0.0, 1.0, 0.0, 1.0, -10.0, 10.0, 100));
    CHECK(flat.degenerate);

    try
    {
        fit_lorentzian(dip(0.0, 1.0, 0.5, 1.0, -1.0, 1.0, 2));
        FAIL("expected a detection error");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::Detection);
    }
}

TEST_CASE("windowed fits of two modes")
{
    // Two modes one FSR apart; each window recovers its own linewidth.
    DataSeries s;
    for (int i = 0; i <= 4000; ++i)
    {
        const double x = 0.25 * i;
        s.x.push_back(x);
        s.y.push_back(lorentzian(x, 300.0, 20.0, 0.5, 1.0) * lorentzian(x, 700.0, 35.0, 0.4, 1.0));
    }
    auto window = [&](double lo, double hi) {
        DataSeries w;
        for (std::size_t i = 0; i < s.x.size(); ++i)
        {
            if (s.x[i] >= lo && s.x[i] <= hi)
            {
                w.x.push_back(s.x[i]);
                w.y.push_back(s.y[i]);
            }
        }
        return w;
    };
    CHECK(fit_lorentzian(window(200.0, 400.0)).fwhm == Approx(20.0).epsilon(0.01));
    CHECK(fit_lorentzian(window(550.0, 850.0)).fwhm == Approx(35.0).epsilon(0.01));
}

TEST_CASE("analytic Lorentzian gradient")
{
    const double h = 1e-6;
    const auto g = lorentzian_gradient(0.3, 0.1, 2.0, 0.7, 1.2);
    CHECK(g[0] == Approx((lorentzian(0.3, 0.1 + h, 2.0, 0.7, 1.2) - lorentzian(0.3, 0.1 - h, 2.0, 0.7, 1.2)) / (2 * h)));
    CHECK(g[1] == Approx((lorentzian(0.3, 0.1, 2.0 + h, 0.7, 1.2) - lorentzian(0.3, 0.1, 2.0 - h, 0.7, 1.2)) / (2 * h)));
    CHECK(g[3] == Approx(lorentzian(0.3, 0.1, 2.0, 0.7, 1.0)));
}

TEST_CASE("lifetime fits")
{
    const LifetimeModel single{DecayOrder::Single, 1e4, 0.63, 0.0, 0.0, 20.0, 1.0};
    DataSeries s;
    for (int i = 0; i <= 400; ++i)
    {
        s.x.push_back(0.05 * i);
        s.y.push_back(single(0.05 * i));
    }
    const LifetimeFit a = fit_lifetime(s, DecayOrder::Single);
    CHECK(a.model.gamma1 == Approx(0.63).epsilon(1e-6));
    CHECK(a.model.t0 == Approx(1.0));
    CHECK_FALSE(a.degenerate);

    const LifetimeModel dbl{DecayOrder::Double, 7e3, 4.97, 3e3, 0.83, 20.0, 1.0};
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < s.x.size(); ++i)
    {
        s.y[i] = static_cast<double>(std::poisson_distribution<long>(dbl(s.x[i]))(rng));
    }
    const LifetimeFit b = fit_lifetime(s, DecayOrder::Double);
    // Shot noise: compare against the reported uncertainties.
    CHECK(std::abs(b.model.gamma1 - 4.97) < 3.0 * b.fit.uncertainty("gamma1"));
    CHECK(std::abs(b.model.gamma2 - 0.83) < 3.0 * b.fit.uncertainty("gamma2"));
    CHECK(b.fit.uncertainty("gamma1") < 0.1 * 4.97);

    // A double fit on single-exponential data flags the degeneracy.
    for (std::size_t i = 0; i < s.x.size(); ++i)
    {
        s.y[i] = single(s.x[i]);
    }
    const LifetimeFit c = fit_lifetime(s, DecayOrder::Double);
    CHECK(c.degenerate);
    CHECK_FALSE(c.warnings.empty());

    DataSeries flat{s.x, std::vector<double>(s.x.size(), 50.0), {}};
    flat.y[0] = 51.0;
    const LifetimeFit d = fit_lifetime(flat, DecayOrder::Single);
    CHECK(d.degenerate);
}

TEST_CASE("Poisson weights")
{
    const auto w = poisson_sigma(std::vector<double>{0.0, 4.0, 100.0});
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 2.0);
    CHECK(w[2] == 10.0);
}

TEST_CASE("multi-power fit")
{
    const SystemParams truth = reference_device();
    const double s_true[] = {0.3, 1.5, 6.0};
    std::vector<PowerSeries> series(3);
    for (int k = 0; k < 3; ++k)
    {
        for (double x = -60.0; x <= 60.0; x += 4.0)
        {
            series[k].drop.x.push_back(x);
        }
        for (double x = -3.0; x <= 3.0; x += 0.2)
        {
            series[k].drop.x.push_back(x);
        }
        std::sort(series[k].drop.x.begin(), series[k].drop.x.end());
        series[k].drop.y = multipower_model(series[k], s_true[k], 0.8, truth, BroadeningMode::Convolution).drop.values;
    }
    SystemParams p0 = truth;
    p0.cavity.kappa *= 1.05;
    p0.sigma_sd *= 1.2;
    MultipowerOptions o;
    o.starts = 3;
    o.seed = 7;
    const MultipowerFit f = fit_multipower(series, p0, o);
    CHECK(f.params.cavity.kappa == Approx(truth.cavity.kappa).epsilon(1e-4));
    CHECK(f.params.sigma_sd == Approx(truth.sigma_sd).epsilon(1e-4));
    for (int k = 0; k < 3; ++k)
    {
        CHECK(f.saturation[k] == Approx(s_true[k]).epsilon(1e-4));
        CHECK(f.eta[k] == Approx(0.8).epsilon(1e-4));
    }

    // S = 0 at the fitted configuration reproduces the low-power dip.
    CHECK(broadened_dip(DriveParams::saturation(0.0), f.params).drop_extinction ==
          Approx(-0.53).epsilon(0.04 / 0.53));

    // One series with only S free reduces to a one-dimensional fit.
    MultipowerOptions one;
    one.fixed = {"omega_qd", "delta", "kappa", "sigma_sd", "eta0"};
    one.initial_saturation = {1.0};
    std::vector<PowerSeries> single = {series[1]};
    single[0].drop.y = multipower_model(single[0], 1.5, 1.0, truth, BroadeningMode::Convolution).drop.values;
    const MultipowerFit g = fit_multipower(single, truth, one);
    CHECK(g.saturation[0] == Approx(1.5).epsilon(1e-8));

    // Identical powers are flagged.
    std::vector<PowerSeries> same = {series[1], series[1]};
    const MultipowerFit h = fit_multipower(same, truth, o);
    CHECK_FALSE(h.warnings.empty());
}

TEST_CASE("neighbouring mode removal")
{
    auto peak = [](double x, double c, double w) { return 1.0 / (1.0 + 4.0 * (x - c) * (x - c) / (w * w)); };
    DataSeries s;
    for (int i = 0; i <= 600; ++i)
    {
        const double x = -100.0 + 0.5 * i;
        s.x.push_back(x);
        s.y.push_back(1.0 - 0.5 * peak(x, 0.0, 30.0) - 0.4 * peak(x, 120.0, 25.0));
    }
    const SecondCavityResult r = subtract_second_cavity(s, {-60.0, 60.0}, {80.0, 180.0});
    CHECK_FALSE(r.passthrough);
    CHECK(r.neighbor_center == Approx(120.0).epsilon(1e-8));
    CHECK(r.neighbor_fwhm == Approx(25.0).epsilon(1e-6));
    for (std::size_t i = 0; i < s.x.size(); ++i)
    {
        if (std::abs(s.x[i]) < 60.0)
        {
            CHECK(std::abs(r.cleaned.y[i] - (1.0 - 0.5 * peak(s.x[i], 0.0, 30.0))) < 0.005);
        }
    }
    // Renormalized to the primary-mode extremum.
    CHECK(r.normalized[200] == Approx(1.0).epsilon(0.01));

    CHECK_THROWS_AS(subtract_second_cavity(s, {-60.0, 90.0}, {80.0, 180.0}), Error);

    DataSeries single;
    for (int i = 0; i <= 600; ++i)
    {
        const double x = -100.0 + 0.5 * i;
        single.x.push_back(x);
        single.y.push_back(1.0 - 0.5 * peak(x, 0.0, 30.0));
    }
    const SecondCavityResult z = subtract_second_cavity(single, {-60.0, 60.0}, {80.0, 180.0});
    for (std::size_t i = 0; i < single.x.size(); ++i)
    {
        CHECK(z.cleaned.y[i] == Approx(single.y[i]).epsilon(1e-6));
    }
}

TEST_CASE("sample statistics")
{
    const std::vector<double> v = {10600.0, 4700.0, 15000.0, 9800.0};
    const SampleStats s = summarize(v);
    CHECK(s.n == 4);
    CHECK(s.mean == Approx(10025.0));
    double ss = 0.0;
    for (double x : v)
    {
        ss += (x - s.mean) * (x - s.mean);
    }
    CHECK(s.variance == Approx(ss / 3.0).epsilon(1e-14));
    CHECK(summarize(std::vector<double>{}).n == 0);
}
