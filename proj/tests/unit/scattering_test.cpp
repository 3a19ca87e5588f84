#include "doctest.h"

#include <cmath>
#include <complex>

#include "routerkit/error.hpp"
#include "routerkit/scattering.hpp"

using namespace routerkit;
using doctest::Approx;

namespace
{

SystemParams on_resonance()
{
    SystemParams p = reference_device();
    p.sigma_sd = 0.0;
    p.emitter.omega_qd = p.cavity.omega_cav;
    return p;
}

// Independent drop coefficient written from the input-output solution.
cdouble oracle_drop(double dw, double s, const SystemParams& p)
{
    const double u = p.cavity.q_ratio;
    const double w = p.emitter.gamma_leak + 2.0 * p.emitter.gamma_dp;
    const cdouble t0 = 1.0 / (1.0 + cdouble(0.0, u * kTwoPi * (dw + p.delta()) / (p.cavity.kappa / 2.0)));
    const cdouble d = cdouble(0.0, kTwoPi * dw) + u * (p.gamma_cav / 2.0) * t0 + u * w / 2.0;
    return u * t0 * (-1.0 + u * (p.gamma_cav / 2.0) * t0 / ((1.0 + s) * d));
}

struct Bloch
{
    cdouble s;
    double sz;
};

// Driven emitter in the cavity, integrated to steady state with RK4.
Bloch integrate_bloch(double dw, cdouble b, const SystemParams& p)
{
    const double u = p.cavity.q_ratio;
    const double gc = p.gamma_cav;
    const double f = gc / (p.emitter.gamma_leak + 2.0 * p.emitter.gamma_dp);
    const cdouble t0 = 1.0 / (1.0 + cdouble(0.0, u * kTwoPi * (dw + p.delta()) / (p.cavity.kappa / 2.0)));
    const double root = std::sqrt(gc / 2.0);
    auto rhs = [&](const Bloch& y) {
        Bloch d;
        d.s = cdouble(0.0, -kTwoPi * dw) * y.s - (gc / 2.0) * u * (t0 + 1.0 / f) * y.s -
              cdouble(0.0, 1.0) * u * root * (2.0 * y.sz) * b * t0;
        d.sz = -gc * u * (t0.real() + 1.0 / f) * (y.sz + 0.5) +
               root * u * 2.0 * (cdouble(0.0, 1.0) * std::conj(y.s) * b * t0).real();
        return d;
    };
    Bloch y{0.0, -0.5};
    const double dt = 2e-4;
    for (int i = 0; i < 200000; ++i)
    {
        const Bloch k1 = rhs(y);
        const Bloch k2 = rhs({y.s + 0.5 * dt * k1.s, y.sz + 0.5 * dt * k1.sz});
        const Bloch k3 = rhs({y.s + 0.5 * dt * k2.s, y.sz + 0.5 * dt * k2.sz});
        const Bloch k4 = rhs({y.s + dt * k3.s, y.sz + dt * k3.sz});
        y.s += dt / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
        y.sz += dt / 6.0 * (k1.sz + 2.0 * k2.sz + 2.0 * k3.sz + k4.sz);
    }
    return y;
}

} // namespace

TEST_CASE("bare cavity")
{
    SystemParams p = reference_device();
    CHECK(std::abs(bare_cavity(-p.delta(), p) - 1.0) < 1e-15);
    const double half = linewidth_from_rate(p.cavity.kappa) / 2.0;
    const cdouble t = bare_cavity(half - p.delta(), p);
    CHECK(std::abs(t - 1.0 / cdouble(1.0, 1.0)) < 1e-12);
    CHECK(std::norm(t) == Approx(0.5));
    CHECK(std::abs(bare_cavity(1e9, p)) < 1e-6);
}

TEST_CASE("drop coefficient on resonance")
{
    const SystemParams p = on_resonance();
    const double f = f_factor(p);
    const cdouble t = drop_coefficient(0.0, 0.0, p);
    CHECK(t.real() == Approx(-1.0 / (1.0 + f)).epsilon(1e-12));
    CHECK(t.real() == Approx(-0.1484).epsilon(1e-3));
    CHECK(std::norm(t) == Approx(0.0220).epsilon(5e-3));
    CHECK(100.0 * (std::norm(t) - 1.0) == Approx(-97.8).epsilon(1e-3));
    CHECK(std::abs(drop_coefficient(0.0, 1e12, p) + 1.0) < 1e-9);

    SystemParams ideal = p;
    ideal.emitter.gamma_leak = 0.0;
    ideal.emitter.gamma_dp = 0.0;
    CHECK(std::abs(drop_coefficient(0.0, 0.0, ideal, EmitterLimit::AllowLossless)) < 1e-15);
    CHECK_THROWS_AS(drop_coefficient(0.0, 0.0, ideal), Error);
}

TEST_CASE("drop coefficient matches an independent evaluation")
{
    SystemParams p = reference_device();
    for (double u : {1.0, 0.6})
    {
        p.cavity.q_ratio = u;
        for (double dw : {-40.0, -3.0, -0.5, 0.0, 0.2, 1.7, 25.0})
        {
            for (double s : {0.0, 0.3, 1.5, 10.0})
            {
                CHECK(std::abs(drop_coefficient(dw, s, p) - oracle_drop(dw, s, p)) < 1e-13);
            }
        }
    }
}

TEST_CASE("bus coefficient")
{
    const SystemParams p = on_resonance();
    const cdouble t = bus_coefficient(0.0, 0.0, p);
    CHECK(t.real() == Approx(0.8516).epsilon(1e-3));
    CHECK(std::norm(t) == Approx(0.7252).epsilon(1e-3));
    CHECK(std::abs(bus_coefficient(0.0, 1e12, p)) < 1e-9);
    CHECK(std::abs(bus_coefficient(1e9, 0.0, p) - 1.0) < 1e-6);
}

TEST_CASE("critical power and photon number")
{
    const SystemParams p = on_resonance();
    CHECK(critical_power(0.0, p) == Approx(1.49).epsilon(5e-3));
    CHECK(critical_photon_number(0.0, p) == Approx(0.30).epsilon(0.02));

    SystemParams ideal = p;
    ideal.emitter.gamma_leak = 0.0;
    ideal.emitter.gamma_dp = 0.0;
    CHECK(critical_power(0.0, ideal, EmitterLimit::AllowLossless) == Approx(ideal.gamma_cav / 4.0).epsilon(1e-12));
    CHECK(critical_photon_number(0.0, ideal, EmitterLimit::AllowLossless) == Approx(0.25).epsilon(1e-12));

    SystemParams unit = p;
    unit.emitter.gamma_dp = 0.0;
    unit.emitter.gamma_leak = unit.gamma_cav;
    CHECK(critical_power(0.0, unit) == Approx(unit.gamma_cav).epsilon(1e-12));

    double prev = critical_photon_number(0.0, p);
    for (double dw = 0.5; dw < 200.0; dw *= 2.0)
    {
        const double n = critical_photon_number(dw, p);
        CHECK(n > prev);
        prev = n;
    }

    SystemParams dark = p;
    dark.gamma_cav = 0.0;
    CHECK(std::isinf(critical_power(0.0, dark)));
}

TEST_CASE("saturation from flux")
{
    SystemParams p = on_resonance();
    p.cavity.alpha = 0.8;
    const double nc = critical_photon_number(0.0, p);
    CHECK(saturation_from_flux(nc / p.cavity.alpha, 0.0, p) == Approx(1.0));
    CHECK(saturation_from_flux(0.0, 0.0, p) == 0.0);
    p.cavity.alpha = 1.0;
    // n_in = 1.4 against n_c = 0.94 gives S close to 1.5.
    CHECK(1.4 / 0.94 == Approx(1.5).epsilon(0.01));
    CHECK(local_saturation(DriveParams::saturation(2.0), 13.0, p) == 2.0);
    CHECK(local_saturation(DriveParams::flux(nc), 0.0, p) == Approx(1.0));
}

TEST_CASE("Bloch steady state")
{
    const SystemParams p = reference_device();
    const BlochState ground = bloch_steady_state(0.3, 0.0, p);
    CHECK(std::abs(ground.s) == 0.0);
    CHECK(ground.s_z == -0.5);

    const double pc = critical_power(0.0, p);
    CHECK(bloch_steady_state(0.0, std::sqrt(pc), p).s_z == Approx(-0.25).epsilon(1e-12));

    const BlochState hot = bloch_steady_state(0.0, 1e6, p);
    CHECK(hot.s_z > -1e-6);
    CHECK(std::abs(hot.s) < 1e-3);
}

TEST_CASE("Bloch steady state matches time integration")
{
    SystemParams p = reference_device();
    for (double u : {1.0, 0.7})
    {
        p.cavity.q_ratio = u;
        for (double dw : {-0.8, 0.0, 0.4})
        {
            for (double flux : {0.3, 1.5, 6.0})
            {
                const cdouble b = std::polar(std::sqrt(flux), 0.4);
                const Bloch ode = integrate_bloch(dw, b, p);
                const BlochState st = bloch_steady_state(dw, b, p);
                CHECK(st.s_z == Approx(ode.sz).epsilon(1e-6));
                CHECK(std::abs(st.s - ode.s) < 1e-6);
            }
        }
    }
}

TEST_CASE("spectrum limits")
{
    SystemParams ideal = on_resonance();
    ideal.emitter.gamma_leak = 0.0;
    ideal.emitter.gamma_dp = 0.0;
    const std::vector<double> axis = uniform_axis(-50.0, 50.0, 0.5);
    const PortSpectra s = spectrum(axis, DriveParams::saturation(0.0), ideal, EmitterLimit::AllowLossless);
    CHECK(s.drop.values[100] < 1e-20);
    CHECK(s.drop.values[110] > 0.5);

    const SystemParams p = reference_device();
    const PortSpectra sat = spectrum(axis, DriveParams::saturation(1e12), p);
    const PortSpectra bare = bare_spectrum(axis, p);
    for (std::size_t i = 0; i < axis.size(); ++i)
    {
        CHECK(sat.drop.values[i] == Approx(bare.drop.values[i]).epsilon(1e-9));
    }

    // Before broadening the S = 1.5 dip is deeper than the measured one.
    const std::vector<double> fine = uniform_axis(-5.0, 5.0, 0.005);
    const DipMetrics d = dip_metrics(spectrum(fine, DriveParams::saturation(1.5), p), bare_spectrum(fine, p));
    CHECK(d.drop_extinction < -0.28);
}

TEST_CASE("axis validation")
{
    CHECK_THROWS_AS(validate_axis(std::vector<double>{}), Error);
    CHECK_THROWS_AS(validate_axis(std::vector<double>{0.0, 0.0}), Error);
    CHECK_THROWS_AS(validate_axis(std::vector<double>{0.0, NAN}), Error);
    const auto a = uniform_axis(0.0, 1.0, 0.3);
    CHECK(a.size() == 4);
    CHECK(a.back() == Approx(0.9));
    CHECK(uniform_axis(-1.0, 1.0, 0.5).size() == 5);
}
