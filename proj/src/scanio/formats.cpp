#include "routerkit/scanio/formats.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "routerkit/error.hpp"
#include "routerkit/scanio/csv.hpp"

namespace routerkit::scanio
{

namespace
{

std::vector<std::string> format_row(std::initializer_list<double> values)
{
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values)
    {
        row.push_back(format_double(v));
    }
    return row;
}

std::optional<double> metadata(const CsvTable& t, std::string_view key)
{
    if (auto v = comment_value(t, key))
    {
        return parse_double(*v);
    }
    return std::nullopt;
}

std::vector<double> optional_numbers(const CsvTable& t, std::string_view name)
{
    if (auto c = t.find_column(name))
    {
        return t.numbers(*c);
    }
    return {};
}

} // namespace

RawScan read_raw_scan(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    RawScan scan;
    scan.freq_ghz = t.numbers("freq_ghz");
    scan.bus = optional_numbers(t, "bus");
    scan.drop = optional_numbers(t, "drop");
    scan.integration_s = metadata(t, "integration_s").value_or(0.0);
    scan.gap_nm = metadata(t, "gap_nm");
    scan.temperature_k = metadata(t, "temperature_k");
    scan.power_uw = metadata(t, "power_uw");
    scan.validate();
    return scan;
}

void write_raw_scan(std::ostream& out, const RawScan& scan)
{
    CsvTable t;
    t.comments.push_back("integration_s=" + format_double(scan.integration_s));
    if (scan.gap_nm)
    {
        t.comments.push_back("gap_nm=" + format_double(*scan.gap_nm));
    }
    if (scan.temperature_k)
    {
        t.comments.push_back("temperature_k=" + format_double(*scan.temperature_k));
    }
    if (scan.power_uw)
    {
        t.comments.push_back("power_uw=" + format_double(*scan.power_uw));
    }
    t.header = {"freq_ghz"};
    if (!scan.bus.empty())
    {
        t.header.push_back("bus");
    }
    if (!scan.drop.empty())
    {
        t.header.push_back("drop");
    }
    for (std::size_t i = 0; i < scan.freq_ghz.size(); ++i)
    {
        std::vector<std::string> row{format_double(scan.freq_ghz[i])};
        if (!scan.bus.empty())
        {
            row.push_back(format_double(scan.bus[i]));
        }
        if (!scan.drop.empty())
        {
            row.push_back(format_double(scan.drop[i]));
        }
        t.rows.push_back(std::move(row));
    }
    write_csv(out, t);
}

ResonanceTable read_resonance_table(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    const auto c = t.numbers("center_ghz");
    const auto k = t.numbers("kappa_ghz");
    const auto q = t.numbers("q");
    const auto d = t.numbers("delta_t");
    const auto o = t.numbers("order");
    ResonanceTable table;
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        table.rows.push_back({c[i], k[i], q[i], d[i], static_cast<int>(o[i])});
    }
    table.validate();
    return table;
}

void write_resonance_table(std::ostream& out, const ResonanceTable& table)
{
    CsvTable t;
    t.header = {"center_ghz", "kappa_ghz", "q", "delta_t", "order"};
    for (const auto& r : table.rows)
    {
        auto row = format_row({r.center_ghz, r.kappa_ghz, r.q, r.delta_t});
        row.push_back(std::to_string(r.order));
        t.rows.push_back(std::move(row));
    }
    write_csv(out, t);
}

GapSeries read_gap_series(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    const auto g = t.numbers("gap_nm");
    const auto dt = t.numbers("delta_t");
    const auto q = t.numbers("q");
    auto dt_err = optional_numbers(t, "delta_t_err");
    auto q_err = optional_numbers(t, "q_err");
    dt_err.resize(g.size(), 0.0);
    q_err.resize(g.size(), 0.0);
    GapSeries s;
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        s.entries.push_back({g[i], dt[i], dt_err[i], q[i], q_err[i]});
    }
    s.validate();
    return s;
}

void write_gap_series(std::ostream& out, const GapSeries& series)
{
    CsvTable t;
    t.header = {"gap_nm", "delta_t", "delta_t_err", "q", "q_err"};
    for (const auto& e : series.entries)
    {
        t.rows.push_back(format_row({e.gap_nm, e.delta_t, e.delta_t_err, e.q, e.q_err}));
    }
    write_csv(out, t);
}

FieldGrid read_field_grid(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    const auto r = t.numbers("r_um");
    const auto z = t.numbers("z_um");
    FieldGrid g;
    // z varies fastest: the first run of equal r gives nz.
    std::size_t nz = 0;
    while (nz < r.size() && r[nz] == r[0])
    {
        ++nz;
    }
    if (nz == 0 || r.size() % nz != 0)
    {
        throw Error(ErrorCode::InvalidInput, "field grid rows are not row-major over (r, z)");
    }
    const std::size_t nr = r.size() / nz;
    for (std::size_t iz = 0; iz < nz; ++iz)
    {
        g.z.push_back(z[iz]);
    }
    for (std::size_t ir = 0; ir < nr; ++ir)
    {
        g.r.push_back(r[ir * nz]);
        for (std::size_t iz = 0; iz < nz; ++iz)
        {
            if (r[ir * nz + iz] != g.r[ir] || z[ir * nz + iz] != g.z[iz])
            {
                throw Error(ErrorCode::InvalidInput, "field grid rows are not row-major over (r, z)");
            }
        }
    }
    auto complex_column = [&](const char* name) {
        const auto re = t.numbers(std::string(name) + "_re");
        const auto im = t.numbers(std::string(name) + "_im");
        std::vector<std::complex<double>> v(re.size());
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            v[i] = {re[i], im[i]};
        }
        return v;
    };
    g.e_r = complex_column("Er");
    g.e_z = complex_column("Ez");
    g.e_phi = complex_column("Ephi");
    g.h_r = complex_column("Hr");
    g.h_z = complex_column("Hz");
    g.h_phi = complex_column("Hphi");
    g.eps_rel = t.numbers("eps_rel");
    g.mu_rel = optional_numbers(t, "mu_rel");
    if (g.mu_rel.empty())
    {
        g.mu_rel.assign(g.eps_rel.size(), 1.0);
    }
    g.validate();
    return g;
}

void write_field_grid(std::ostream& out, const FieldGrid& grid)
{
    grid.validate();
    CsvTable t;
    t.header = {"r_um", "z_um", "Er_re", "Er_im", "Ez_re", "Ez_im", "Ephi_re", "Ephi_im", "Hr_re", "Hr_im",
                "Hz_re", "Hz_im", "Hphi_re", "Hphi_im", "eps_rel", "mu_rel"};
    for (std::size_t ir = 0; ir < grid.r.size(); ++ir)
    {
        for (std::size_t iz = 0; iz < grid.z.size(); ++iz)
        {
            const std::size_t k = grid.index(ir, iz);
            t.rows.push_back(format_row({grid.r[ir], grid.z[iz], grid.e_r[k].real(), grid.e_r[k].imag(),
                                         grid.e_z[k].real(), grid.e_z[k].imag(), grid.e_phi[k].real(),
                                         grid.e_phi[k].imag(), grid.h_r[k].real(), grid.h_r[k].imag(),
                                         grid.h_z[k].real(), grid.h_z[k].imag(), grid.h_phi[k].real(),
                                         grid.h_phi[k].imag(), grid.eps_rel[k], grid.mu_rel[k]}));
        }
    }
    write_csv(out, t);
}

PortSpectra read_spectrum(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    PortSpectra s;
    s.drop.axis = t.numbers("x_ghz");
    s.bus.axis = s.drop.axis;
    s.drop.values = t.numbers("t_drop");
    s.bus.values = t.numbers("t_bus");
    return s;
}

void write_spectrum(std::ostream& out, const PortSpectra& spectra)
{
    CsvTable t;
    t.header = {"x_ghz", "t_drop", "t_bus"};
    for (std::size_t i = 0; i < spectra.drop.axis.size(); ++i)
    {
        t.rows.push_back(format_row({spectra.drop.axis[i], spectra.drop.values[i], spectra.bus.values[i]}));
    }
    write_csv(out, t);
}

fitkit::DataSeries read_lifetime(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    fitkit::DataSeries d;
    d.x = t.numbers("t_ns");
    d.y = t.numbers("counts");
    d.sigma = optional_numbers(t, "sigma");
    d.validate();
    return d;
}

void write_lifetime(std::ostream& out, const fitkit::DataSeries& decay)
{
    CsvTable t;
    t.header = {"t_ns", "counts"};
    if (!decay.sigma.empty())
    {
        t.header.push_back("sigma");
    }
    for (std::size_t i = 0; i < decay.x.size(); ++i)
    {
        auto row = format_row({decay.x[i], decay.y[i]});
        if (!decay.sigma.empty())
        {
            row.push_back(format_double(decay.sigma[i]));
        }
        t.rows.push_back(std::move(row));
    }
    write_csv(out, t);
}

std::vector<fitkit::PowerSeries> read_multipower(std::istream& in)
{
    const CsvTable t = parse_csv(in);
    const std::size_t c_series = t.column("series");
    const std::size_t c_port = t.column("port");
    const std::size_t c_x = t.column("x_ghz");
    const std::size_t c_y = t.column("y");
    const auto c_sigma = t.find_column("sigma");
    std::map<long, fitkit::PowerSeries> by_index;
    for (const auto& row : t.rows)
    {
        const double idx = parse_double(row[c_series]);
        if (!(idx >= 0.0) || idx != std::floor(idx))
        {
            throw Error(ErrorCode::InvalidInput, "series index must be a non-negative integer");
        }
        fitkit::PowerSeries& s = by_index[static_cast<long>(idx)];
        fitkit::DataSeries* d = nullptr;
        if (row[c_port] == "drop")
        {
            d = &s.drop;
        }
        else if (row[c_port] == "bus")
        {
            d = &s.bus;
        }
        else
        {
            throw Error(ErrorCode::InvalidInput, "port must be 'drop' or 'bus', got '" + row[c_port] + "'");
        }
        d->x.push_back(parse_double(row[c_x]));
        d->y.push_back(parse_double(row[c_y]));
        if (c_sigma)
        {
            d->sigma.push_back(parse_double(row[*c_sigma]));
        }
    }
    std::vector<fitkit::PowerSeries> out;
    long expected = 0;
    for (auto& [idx, s] : by_index)
    {
        if (idx != expected++)
        {
            throw Error(ErrorCode::InvalidInput, "series indices must run 0, 1, 2, ...");
        }
        s.drop.validate();
        s.bus.validate();
        out.push_back(std::move(s));
    }
    return out;
}

void write_multipower(std::ostream& out, const std::vector<fitkit::PowerSeries>& series)
{
    const bool with_sigma = std::any_of(series.begin(), series.end(), [](const fitkit::PowerSeries& s) {
        return !s.drop.sigma.empty() || !s.bus.sigma.empty();
    });
    CsvTable t;
    t.header = {"series", "port", "x_ghz", "y"};
    if (with_sigma)
    {
        t.header.push_back("sigma");
    }
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        for (const auto& [name, d] : {std::pair{"drop", &series[k].drop}, std::pair{"bus", &series[k].bus}})
        {
            for (std::size_t i = 0; i < d->x.size(); ++i)
            {
                std::vector<std::string> row{std::to_string(k), name, format_double(d->x[i]), format_double(d->y[i])};
                if (with_sigma)
                {
                    row.push_back(format_double(d->sigma.empty() ? 1.0 : d->sigma[i]));
                }
                t.rows.push_back(std::move(row));
            }
        }
    }
    write_csv(out, t);
}

} // namespace routerkit::scanio
