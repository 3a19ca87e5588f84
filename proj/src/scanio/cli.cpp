#include "routerkit/scanio/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "routerkit/broadening.hpp"
#include "routerkit/coupling.hpp"
#include "routerkit/error.hpp"
#include "routerkit/fitkit/models.hpp"
#include "routerkit/merit.hpp"
#include "routerkit/parallel.hpp"
#include "routerkit/scanio/csv.hpp"
#include "routerkit/scanio/formats.hpp"
#include "routerkit/scanio/params_json.hpp"
#include "routerkit/scanio/scan.hpp"

namespace routerkit::scanio
{

namespace
{

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common
{
    std::string params_path;
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    bool no_sd = false;
    bool ensemble_sd = false;
};

struct Context
{
    Common common;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    bool not_converged = false;

    SystemParams params() const
    {
        SystemParams p = common.params_path.empty() ? reference_device() : load_params(common.params_path);
        if (common.no_sd)
        {
            p.sigma_sd = 0.0;
        }
        return p;
    }

    BroadeningMode mode() const
    {
        return common.ensemble_sd ? BroadeningMode::Ensemble : BroadeningMode::Convolution;
    }

    std::istringstream input() const
    {
        if (common.input.empty())
        {
            throw Error(ErrorCode::InvalidInput, "--input is required");
        }
        return std::istringstream(read_file(common.input));
    }

    void warn_all(const Warnings& w) const
    {
        for (const auto& m : w)
        {
            *err << "W: " << m << '\n';
        }
    }

    void status(const fitkit::FitResult& fit)
    {
        if (fit.status == fitkit::FitStatus::MaxIter)
        {
            not_converged = true;
            *err << "E:" << to_string(ErrorCode::Convergence) << ": " << fit.model
                 << " fit reached the iteration limit\n";
        }
        else if (fit.status == fitkit::FitStatus::Singular)
        {
            *err << "W: " << fit.model << " fit has a singular normal matrix; uncertainties are not defined\n";
        }
    }
};

void emit_json(std::ostream& out, const json& j)
{
    out << j.dump(2) << '\n';
}

DriveParams drive_from(double saturation, double flux)
{
    if (!std::isnan(flux))
    {
        return DriveParams::flux(flux);
    }
    return DriveParams::saturation(std::isnan(saturation) ? 0.0 : saturation);
}

std::vector<double> log_axis(double lo, double hi, int points)
{
    if (!(lo > 0.0 && hi > lo) || points < 2)
    {
        throw Error(ErrorCode::InvalidInput, "sweep needs 0 < min < max and at least 2 points");
    }
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
    {
        v[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    }
    return v;
}

// ------------------------------------------------------------------ commands

void cmd_spectrum(Context& ctx, double from, double to, double step, double saturation, double flux)
{
    const SystemParams p = ctx.params();
    const std::vector<double> axis = uniform_axis(from, to, step);
    Warnings w;
    const PortSpectra s = broadened_spectrum(axis, drive_from(saturation, flux), p, ctx.mode(),
                                             EmitterLimit::Finite, &w);
    ctx.warn_all(w);
    write_spectrum(*ctx.out, s);
}

void cmd_saturation(Context& ctx, double n_min, double n_max, int points)
{
    const SystemParams p = ctx.params();
    const std::vector<double> fluxes = log_axis(n_min, n_max, points);
    DipSearch search;
    search.mode = ctx.mode();
    const DipMetrics zero = broadened_dip(DriveParams::saturation(0.0), p, search);
    std::vector<DipMetrics> dips(fluxes.size());
    parallel_for(fluxes.size(), [&](std::size_t i) { dips[i] = broadened_dip(DriveParams::flux(fluxes[i]), p, search); });
    const double half = half_depth_flux(p, search);

    CsvTable t;
    t.comments = {"s0_drop_extinction=" + format_double(zero.drop_extinction),
                  "half_depth_flux=" + format_double(half),
                  "n_in: incident photons per emitter lifetime; S(dw) = alpha n_in / n_c(dw)"};
    t.header = {"n_in", "drop_extinction", "relative_depth", "bus_gain", "position_ghz"};
    for (std::size_t i = 0; i < fluxes.size(); ++i)
    {
        t.rows.push_back({format_double(fluxes[i]), format_double(dips[i].drop_extinction),
                          format_double(dips[i].drop_extinction / zero.drop_extinction),
                          format_double(dips[i].bus_gain), format_double(dips[i].position)});
    }
    write_csv(*ctx.out, t);
}

void cmd_routing(Context& ctx, double from, double to, double step, double saturation, double flux,
                 double sd_slope, double sd_intercept)
{
    const SystemParams p = ctx.params();
    const std::vector<double> deltas = uniform_axis(from, to, step);
    std::optional<SdModel> sd;
    if (!std::isnan(sd_slope) || !std::isnan(sd_intercept))
    {
        if (std::isnan(sd_slope) || std::isnan(sd_intercept))
        {
            throw Error(ErrorCode::InvalidInput, "--sd-slope and --sd-intercept go together");
        }
        sd = SdModel{sd_slope, sd_intercept};
    }
    const DriveParams drive = drive_from(saturation, flux);
    std::vector<RoutingPoint> pts(deltas.size());
    parallel_for(deltas.size(), [&](std::size_t i) { pts[i] = routing_at_cavity(deltas[i], drive, p, sd, ctx.mode()); });

    CsvTable t;
    t.comments = {"laser fixed at omega_cav; delta = omega_qd - omega_cav",
                  "drop_extinction: relative drop-port change vs the bare cavity",
                  "bus_gain: bus-port gain vs the bare cavity, in units of the far-detuned bus level"};
    t.header = {"delta_ghz", "sigma_sd_ghz", "drop_extinction", "bus_gain"};
    for (const auto& r : pts)
    {
        t.rows.push_back({format_double(r.delta), format_double(r.sigma_sd), format_double(r.drop_extinction),
                          format_double(r.bus_gain)});
    }
    write_csv(*ctx.out, t);
}

void cmd_merit(Context& ctx, double gamma_fast, double passive_beta, double q_exp, double v_eff,
               double qe_bulk)
{
    const SystemParams p = ctx.params();
    const double gb = p.emitter.gamma_bulk;
    const double fast = std::isnan(gamma_fast) ? p.gamma_cav + p.emitter.gamma_leak : gamma_fast;
    const double F = purcell_from_lifetimes(fast, gb);
    const double beta = beta_factor(F);
    const double g = coupling_strength(F, p.cavity.kappa, gb);
    const double C = cooperativity(g, p.cavity.kappa, gb);
    const double pb = std::isnan(passive_beta) ? beta : passive_beta;

    json j = {
        {"gamma_fast_ns", fast},
        {"gamma_bulk_ns", gb},
        {"F", F},
        {"lifetime_enhancement", lifetime_enhancement(fast, gb)},
        {"beta", beta},
        {"g_rad_per_ns", g},
        {"g_ghz", linewidth_from_rate(g)},
        {"C", C},
        {"bell_cavity_qed", C > 1.0 ? json(bell_success(BellScheme::CavityQed, C)) : json(nullptr)},
        {"bell_passive", pb >= 0.5 && pb <= 1.0 ? json(bell_success(BellScheme::Passive, pb)) : json(nullptr)},
        {"bell_passive_beta", pb},
        {"n_c", critical_photon_number(0.0, p)},
        {"n_c_sd_averaged", averaged_critical_photon_number(0.0, p, ctx.mode())},
        {"sd_decoherence_ratio", F > 0.0 ? json(sd_decoherence_ratio(p.sigma_sd, F, gb)) : json(nullptr)},
    };
    if (!std::isnan(q_exp) || !std::isnan(v_eff))
    {
        j["F_ideal"] = purcell_ideal({0.0, 0.0, v_eff, q_exp});
    }
    if (!std::isnan(qe_bulk))
    {
        j["qe_cavity"] = qe_cavity(qe_bulk, F);
    }
    emit_json(*ctx.out, j);
}

fitkit::DataSeries port_series(const RawScan& scan, const std::string& port, double from, double to)
{
    const std::vector<double>* y = nullptr;
    if (port == "bus" || (port.empty() && !scan.bus.empty()))
    {
        y = &scan.bus;
    }
    else if (port == "drop" || port.empty())
    {
        y = &scan.drop;
    }
    else
    {
        throw Error(ErrorCode::InvalidInput, "--port must be 'bus' or 'drop'");
    }
    if (y->empty())
    {
        throw Error(ErrorCode::InvalidInput, "scan has no " + (port.empty() ? std::string("counts") : port) + " data");
    }
    fitkit::DataSeries s;
    for (std::size_t i = 0; i < scan.freq_ghz.size(); ++i)
    {
        const double x = scan.freq_ghz[i];
        if ((std::isnan(from) || x >= from) && (std::isnan(to) || x <= to))
        {
            s.x.push_back(x);
            s.y.push_back((*y)[i]);
        }
    }
    return s;
}

void cmd_fit_scan(Context& ctx, const std::string& port, double from, double to, double window)
{
    auto in = ctx.input();
    RawScan scan = read_raw_scan(in);
    if (!std::isnan(window))
    {
        scan = normalize_to_background(scan, window);
    }
    const fitkit::LorentzianFit fit = fitkit::fit_lorentzian(port_series(scan, port, from, to));
    if (fit.degenerate)
    {
        *ctx.err << "W: flat data; no resonance to fit\n";
    }
    else
    {
        ctx.status(fit.fit);
    }
    json j = fit_report(fit.fit);
    j["derived"] = {{"center_ghz", fit.center}, {"fwhm_ghz", fit.fwhm}, {"depth", fit.depth},
                    {"background", fit.background}, {"q", fit.degenerate ? json(nullptr) : json(fit.q)},
                    {"degenerate", fit.degenerate}};
    emit_json(*ctx.out, j);
}

void cmd_fit_lifetime(Context& ctx, const std::string& order, const std::string& weighting,
                      double gamma_bulk)
{
    auto in = ctx.input();
    const fitkit::DataSeries decay = read_lifetime(in);
    fitkit::DecayOrder o;
    if (order == "single")
    {
        o = fitkit::DecayOrder::Single;
    }
    else if (order == "double")
    {
        o = fitkit::DecayOrder::Double;
    }
    else
    {
        throw Error(ErrorCode::InvalidInput, "--order must be 'single' or 'double'");
    }
    if (weighting != "poisson" && weighting != "unit")
    {
        throw Error(ErrorCode::InvalidInput, "--weighting must be 'poisson' or 'unit'");
    }
    const auto fit = fitkit::fit_lifetime(decay, o,
                                          weighting == "poisson" ? fitkit::Weighting::Poisson : fitkit::Weighting::Unit);
    ctx.status(fit.fit);
    ctx.warn_all(fit.warnings);
    json j = fit_report(fit.fit);
    json derived = {{"t0_ns", fit.model.t0}, {"degenerate", fit.degenerate}, {"warnings", fit.warnings}};
    if (o == fitkit::DecayOrder::Single)
    {
        derived["gamma_ns"] = fit.model.gamma1;
    }
    else
    {
        derived["gamma_fast_ns"] = fit.model.gamma1;
        derived["gamma_slow_ns"] = fit.model.gamma2;
    }
    if (!std::isnan(gamma_bulk))
    {
        derived["purcell"] = purcell_from_lifetimes(fit.model.gamma1, gamma_bulk);
        derived["lifetime_enhancement"] = lifetime_enhancement(fit.model.gamma1, gamma_bulk);
    }
    j["derived"] = derived;
    emit_json(*ctx.out, j);
}

void cmd_fit_multipower(Context& ctx, int starts, const std::vector<std::string>& fixed,
                        const std::vector<double>& s_init)
{
    auto in = ctx.input();
    const auto series = read_multipower(in);
    const SystemParams p0 = ctx.params();
    fitkit::MultipowerOptions o;
    o.starts = starts;
    o.seed = ctx.common.seed;
    o.fixed = fixed;
    o.initial_saturation = s_init;
    o.mode = ctx.mode();
    const auto fit = fitkit::fit_multipower(series, p0, o);
    ctx.status(fit.fit);
    ctx.warn_all(fit.warnings);

    DipSearch search;
    search.mode = ctx.mode();
    const DipMetrics zero = broadened_dip(DriveParams::saturation(0.0), fit.params, search);
    json per = json::array();
    for (std::size_t k = 0; k < fit.saturation.size(); ++k)
    {
        per.push_back({{"S", fit.saturation[k]}, {"eta", fit.eta[k]}});
    }
    json j = fit_report(fit.fit);
    j["derived"] = {{"omega_qd_ghz", fit.params.emitter.omega_qd},
                    {"delta_ghz", fit.params.delta()},
                    {"kappa_ghz", linewidth_from_rate(fit.params.cavity.kappa)},
                    {"sigma_sd_ghz", fit.params.sigma_sd},
                    {"per_power", per},
                    {"s0_drop_extinction", zero.drop_extinction},
                    {"best_start", fit.best_start},
                    {"seed", ctx.common.seed},
                    {"warnings", fit.warnings}};
    emit_json(*ctx.out, j);
}

void cmd_fit_gap(Context& ctx, double t_cc, double q_int, double kappa_g0, double xi)
{
    auto in = ctx.input();
    const GapSeries data = read_gap_series(in);
    std::optional<CouplingModel> init;
    const int given = !std::isnan(t_cc) + !std::isnan(q_int) + !std::isnan(kappa_g0) + !std::isnan(xi);
    if (given == 4)
    {
        init = CouplingModel{t_cc, q_int, kappa_g0, xi};
    }
    else if (given != 0)
    {
        throw Error(ErrorCode::InvalidInput, "give all of --t-cc, --q-int, --kappa-g0, --xi or none");
    }
    const GapFit fit = fit_gap_series(data, init);
    ctx.status(fit.fit);
    json j = fit_report(fit.fit);
    j["derived"] = {{"model", model_to_json(fit.model)},
                    {"critical_gap_nm", fit.critical_gap ? json(*fit.critical_gap) : json("not reached")},
                    {"critical_gap_sigma_nm", fit.critical_gap ? json(fit.critical_gap_sigma) : json(nullptr)}};
    emit_json(*ctx.out, j);
}

void cmd_modevolume(Context& ctx, double wavelength_nm)
{
    auto in = ctx.input();
    const FieldGrid grid = read_field_grid(in);
    Warnings w;
    const ModeVolume v = mode_volume(grid, wavelength_nm, &w);
    ctx.warn_all(w);
    emit_json(*ctx.out, mode_volume_to_json(v));
}

void cmd_detect(Context& ctx, const std::string& port, double prominence, double window,
                const std::vector<double>& fsr, double fsr_tol)
{
    auto in = ctx.input();
    const RawScan scan = read_raw_scan(in);
    const fitkit::DataSeries s = port_series(scan, port, kNaN, kNaN);
    DetectOptions o;
    o.prominence = prominence;
    o.fsr_ghz = fsr;
    o.fsr_tolerance = fsr_tol;

    double w = window;
    if (std::isnan(w))
    {
        // Ten typical linewidths, with the typical linewidth taken from a
        // first pass over a coarse normalization.
        const double span = s.x.back() - s.x.front();
        const auto first = detect_resonances(s.x, normalize_series(s.x, s.y, span / 10.0), o);
        w = span / 10.0;
        if (!first.rows.empty())
        {
            std::vector<double> k;
            for (const auto& r : first.rows)
            {
                k.push_back(r.kappa_ghz);
            }
            std::nth_element(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(k.size() / 2), k.end());
            const double spacing = span / static_cast<double>(s.x.size() - 1);
            w = std::max(10.0 * k[k.size() / 2], 2.0 * spacing);
        }
    }
    const auto table = detect_resonances(s.x, normalize_series(s.x, s.y, w), o);
    write_resonance_table(*ctx.out, table);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Context ctx;
    ctx.err = &err;

    CLI::App app{"Photon routing through a QD-coupled microdisk: forward models and fits"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", ctx.common.seed, "Seed for randomized restarts");

    std::function<void()> action;
    auto add_common = [&](CLI::App* sub, bool with_input) {
        sub->add_option("--params", ctx.common.params_path, "System parameter JSON (default: reference device)");
        sub->add_option("-o,--output", ctx.common.output, "Write results to this file instead of stdout");
        if (with_input)
        {
            sub->add_option("-i,--input", ctx.common.input, "Input CSV")->required();
        }
    };
    auto add_sd_flags = [&](CLI::App* sub) {
        sub->add_flag("--no-sd", ctx.common.no_sd, "Disable spectral diffusion");
        sub->add_flag("--ensemble-sd", ctx.common.ensemble_sd,
                      "Average over the wandering QD frequency instead of convolving along the laser axis");
    };

    double from = -60, to = 60, step = 0.05, saturation = kNaN, flux = kNaN;
    auto* spectrum = app.add_subcommand("spectrum", "Drop and bus transmission spectra (CSV)");
    add_common(spectrum, false);
    add_sd_flags(spectrum);
    spectrum->add_option("--from", from, "Lowest laser detuning from the QD, GHz");
    spectrum->add_option("--to", to, "Highest laser detuning from the QD, GHz");
    spectrum->add_option("--step", step, "Axis spacing, GHz");
    auto* s_opt = spectrum->add_option("-S,--saturation", saturation, "Saturation parameter S");
    spectrum->add_option("--flux", flux, "Incident photons per lifetime (detuning-dependent S)")->excludes(s_opt);
    spectrum->callback([&] { action = [&] { cmd_spectrum(ctx, from, to, step, saturation, flux); }; });

    double n_min = 0.01, n_max = 100;
    int points = 41;
    auto* sat = app.add_subcommand("saturation", "Broadened dip extinction versus incident flux (CSV)");
    add_common(sat, false);
    add_sd_flags(sat);
    sat->add_option("--n-min", n_min, "Lowest incident photons per lifetime");
    sat->add_option("--n-max", n_max, "Highest incident photons per lifetime");
    sat->add_option("--points", points, "Log-spaced sweep points");
    sat->callback([&] { action = [&] { cmd_saturation(ctx, n_min, n_max, points); }; });

    double d_from = -10, d_to = 10, d_step = 0.25, sd_slope = kNaN, sd_intercept = kNaN;
    double r_sat = kNaN, r_flux = kNaN;
    auto* routing = app.add_subcommand("routing", "Routing at the cavity frequency versus QD detuning (CSV)");
    add_common(routing, false);
    add_sd_flags(routing);
    routing->add_option("--delta-from", d_from, "Lowest QD-cavity detuning, GHz");
    routing->add_option("--delta-to", d_to, "Highest QD-cavity detuning, GHz");
    routing->add_option("--delta-step", d_step, "Detuning step, GHz");
    auto* rs_opt = routing->add_option("-S,--saturation", r_sat, "Saturation parameter S");
    routing->add_option("--flux", r_flux, "Incident photons per lifetime")->excludes(rs_opt);
    routing->add_option("--sd-slope", sd_slope, "sigma_sd change per GHz of detuning");
    routing->add_option("--sd-intercept", sd_intercept, "sigma_sd at zero detuning, GHz");
    routing->callback([&] {
        action = [&] { cmd_routing(ctx, d_from, d_to, d_step, r_sat, r_flux, sd_slope, sd_intercept); };
    });

    double gamma_fast = kNaN, passive_beta = kNaN, q_exp = kNaN, v_eff = kNaN, qe_bulk = kNaN;
    auto* merit = app.add_subcommand("merit", "Figures of merit (JSON)");
    add_common(merit, false);
    add_sd_flags(merit);
    merit->add_option("--gamma-fast", gamma_fast, "Cavity-enhanced decay rate, 1/ns (default gamma_cav + gamma_leak)");
    merit->add_option("--passive-beta", passive_beta, "beta used for the passive Bell analyzer (default: own beta)");
    auto* q_opt = merit->add_option("--q-exp", q_exp, "Loaded Q for the ideal Purcell factor");
    auto* v_opt = merit->add_option("--v-eff", v_eff, "Mode volume in (lambda/n)^3 for the ideal Purcell factor");
    q_opt->needs(v_opt);
    v_opt->needs(q_opt);
    merit->add_option("--qe-bulk", qe_bulk, "Bulk quantum efficiency for QE_cavity");
    merit->callback([&] { action = [&] { cmd_merit(ctx, gamma_fast, passive_beta, q_exp, v_eff, qe_bulk); }; });

    std::string port;
    double f_from = kNaN, f_to = kNaN, f_window = kNaN;
    auto* fit_scan = app.add_subcommand("fit-scan", "Lorentzian fit of one resonance in a scan (JSON)");
    add_common(fit_scan, true);
    fit_scan->add_option("--port", port, "bus or drop (default: bus when present)");
    fit_scan->add_option("--from", f_from, "Window start, GHz");
    fit_scan->add_option("--to", f_to, "Window end, GHz");
    fit_scan->add_option("--normalize", f_window, "Normalize to a rolling-median background of this half width, GHz");
    fit_scan->callback([&] { action = [&] { cmd_fit_scan(ctx, port, f_from, f_to, f_window); }; });

    std::string order = "single", weighting = "poisson";
    double gamma_bulk = kNaN;
    auto* fit_life = app.add_subcommand("fit-lifetime", "Exponential decay fit (JSON)");
    add_common(fit_life, true);
    fit_life->add_option("--order", order, "single or double");
    fit_life->add_option("--weighting", weighting, "poisson or unit");
    fit_life->add_option("--gamma-bulk", gamma_bulk, "Bulk decay rate, 1/ns, for the derived Purcell factor");
    fit_life->callback([&] { action = [&] { cmd_fit_lifetime(ctx, order, weighting, gamma_bulk); }; });

    int starts = 8;
    std::vector<std::string> fixed;
    std::vector<double> s_init;
    auto* fit_mp = app.add_subcommand("fit-multipower", "Simultaneous multi-power spectrum fit (JSON)");
    add_common(fit_mp, true);
    fit_mp->add_flag("--ensemble-sd", ctx.common.ensemble_sd, "Ensemble spectral-diffusion model");
    fit_mp->add_option("--starts", starts, "Number of randomized starts");
    fit_mp->add_option("--fix", fixed, "Parameters held at their starting value")->delimiter(',');
    fit_mp->add_option("--s-init", s_init, "Initial S per series")->delimiter(',');
    fit_mp->callback([&] { action = [&] { cmd_fit_multipower(ctx, starts, fixed, s_init); }; });

    double t_cc = kNaN, q_int = kNaN, kappa_g0 = kNaN, xi = kNaN;
    auto* fit_gap = app.add_subcommand("fit-gap", "Coupling model fit over a gap series (JSON)");
    add_common(fit_gap, true);
    fit_gap->add_option("--t-cc", t_cc, "Initial T_cc");
    fit_gap->add_option("--q-int", q_int, "Initial Q_int");
    fit_gap->add_option("--kappa-g0", kappa_g0, "Initial kappa_g0");
    fit_gap->add_option("--xi", xi, "Initial xi, 1/nm");
    fit_gap->callback([&] { action = [&] { cmd_fit_gap(ctx, t_cc, q_int, kappa_g0, xi); }; });

    double wavelength = kNaN;
    auto* modevol = app.add_subcommand("modevolume", "Mode volume of a sampled field (JSON)");
    add_common(modevol, true);
    modevol->add_option("--wavelength-nm", wavelength, "Vacuum wavelength, nm")->required();
    modevol->callback([&] { action = [&] { cmd_modevolume(ctx, wavelength); }; });

    double prominence = 0.05, d_window = kNaN, fsr_tol = 0.02;
    std::vector<double> fsr;
    std::string d_port;
    auto* detect = app.add_subcommand("detect", "Resonance table from a raw scan (CSV)");
    add_common(detect, true);
    detect->add_option("--port", d_port, "bus or drop (default: bus when present)");
    detect->add_option("--prominence", prominence, "Minimum dip prominence in normalized units");
    detect->add_option("--window", d_window, "Background half width, GHz (default: 10 typical linewidths)");
    detect->add_option("--fsr", fsr, "Candidate free spectral ranges, GHz")->delimiter(',');
    detect->add_option("--fsr-tol", fsr_tol, "Relative FSR matching tolerance");
    detect->callback([&] { action = [&] { cmd_detect(ctx, d_port, prominence, d_window, fsr, fsr_tol); }; });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "E:usage: " << e.what() << '\n';
        return kExitInput;
    }

    try
    {
        std::ofstream file;
        std::ostringstream buffer;
        ctx.out = ctx.common.output.empty() ? &out : static_cast<std::ostream*>(&buffer);
        *ctx.out << std::setprecision(17);
        action();
        if (!ctx.common.output.empty())
        {
            file.open(ctx.common.output, std::ios::binary);
            if (!file)
            {
                throw Error(ErrorCode::InvalidInput, "cannot write " + ctx.common.output);
            }
            file << buffer.str();
        }
    }
    catch (const Error& e)
    {
        err << "E:" << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == ErrorCode::Convergence || e.code() == ErrorCode::Evaluation ? kExitConvergence
                                                                                        : kExitInput;
    }
    catch (const std::exception& e)
    {
        err << "E:internal: " << e.what() << '\n';
        return kExitInput;
    }
    return ctx.not_converged ? kExitConvergence : kExitOk;
}

} // namespace routerkit::scanio
