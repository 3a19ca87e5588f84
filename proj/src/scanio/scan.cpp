#include "routerkit/scanio/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routerkit/error.hpp"
#include "routerkit/fitkit/models.hpp"

namespace routerkit::scanio
{

namespace
{

void require_axis(const std::vector<double>& x, const char* what)
{
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (!std::isfinite(x[i]) || (i > 0 && !(x[i] > x[i - 1])))
        {
            throw Error(ErrorCode::InvalidInput, std::string(what) + " must be finite and strictly ascending");
        }
    }
}

double median_of(std::vector<double>& buf)
{
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    double m = *mid;
    if (buf.size() % 2 == 0)
    {
        m = 0.5 * (m + *std::max_element(buf.begin(), mid));
    }
    return m;
}

// Median of y over |x - x_i| <= w, optionally skipping masked samples.
std::vector<double> rolling_median(const std::vector<double>& x, const std::vector<double>& y, double w,
                                   const std::vector<bool>* mask)
{
    const std::size_t n = x.size();
    std::vector<double> out(n);
    std::vector<double> buf;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        while (x[i] - x[lo] > w)
        {
            ++lo;
        }
        while (hi < n && x[hi] - x[i] <= w)
        {
            ++hi;
        }
        buf.clear();
        for (std::size_t j = lo; j < hi; ++j)
        {
            if (mask == nullptr || !(*mask)[j])
            {
                buf.push_back(y[j]);
            }
        }
        out[i] = buf.empty() ? std::numeric_limits<double>::quiet_NaN() : median_of(buf);
    }
    return out;
}

} // namespace

void RawScan::validate() const
{
    require_axis(freq_ghz, "frequency axis");
    if (bus.empty() && drop.empty())
    {
        throw Error(ErrorCode::InvalidInput, "scan has no bus or drop counts");
    }
    for (const auto* port : {&bus, &drop})
    {
        if (port->empty())
        {
            continue;
        }
        if (port->size() != freq_ghz.size())
        {
            throw Error(ErrorCode::InvalidInput, "port counts do not match the frequency axis");
        }
        for (double c : *port)
        {
            if (!(c >= 0.0) || !std::isfinite(c))
            {
                throw Error(ErrorCode::InvalidInput, "counts must be finite and >= 0");
            }
        }
    }
    if (!(integration_s >= 0.0))
    {
        throw Error(ErrorCode::InvalidInput, "integration time must be >= 0");
    }
}

void ResonanceTable::validate() const
{
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        if (!(rows[i].q > 0.0))
        {
            throw Error(ErrorCode::InvalidInput, "resonance Q must be positive");
        }
        if (i > 0 && rows[i].center_ghz < rows[i - 1].center_ghz)
        {
            throw Error(ErrorCode::InvalidInput, "resonance centers must be sorted");
        }
    }
}

std::vector<double> normalize_series(const std::vector<double>& x, const std::vector<double>& y,
                                     double half_width_ghz)
{
    require_axis(x, "frequency axis");
    if (x.size() != y.size())
    {
        throw Error(ErrorCode::InvalidInput, "counts do not match the frequency axis");
    }
    if (x.size() < 2)
    {
        throw Error(ErrorCode::InvalidInput, "normalization needs at least two samples");
    }
    const double spacing = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    if (!(half_width_ghz > spacing))
    {
        throw Error(ErrorCode::InvalidInput, "background window must be wider than the grid spacing");
    }

    const std::vector<double> first = rolling_median(x, y, half_width_ghz, nullptr);
    const std::size_t n = x.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        r[i] = first[i] != 0.0 ? y[i] / first[i] - 1.0 : 0.0;
    }
    std::vector<double> dev(n);
    std::vector<double> tmp = r;
    const double centre = median_of(tmp);
    for (std::size_t i = 0; i < n; ++i)
    {
        dev[i] = std::abs(r[i] - centre);
    }
    const double mad = 1.4826 * median_of(dev);
    const double threshold = std::max(5.0 * mad, 0.02);

    std::vector<bool> flagged(n, false);
    for (std::size_t i = 0; i < n; ++i)
    {
        flagged[i] = std::abs(r[i]) > threshold;
    }
    std::vector<bool> mask = flagged;
    for (std::size_t i = 0; i < n;)
    {
        if (!flagged[i])
        {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && flagged[j])
        {
            ++j;
        }
        // Widen the run [i, j) by its own length on both sides.
        const std::size_t len = j - i;
        const std::size_t from = i > len ? i - len : 0;
        const std::size_t to = std::min(n, j + len);
        for (std::size_t k = from; k < to; ++k)
        {
            mask[k] = true;
        }
        i = j;
    }

    const std::vector<double> second = rolling_median(x, y, half_width_ghz, &mask);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double bg = std::isnan(second[i]) ? first[i] : second[i];
        if (!(bg > 0.0))
        {
            throw Error(ErrorCode::InvalidInput, "background level is zero; cannot normalize");
        }
        out[i] = y[i] / bg;
    }
    return out;
}

RawScan normalize_to_background(const RawScan& scan, double half_width_ghz)
{
    scan.validate();
    RawScan out = scan;
    if (!scan.bus.empty())
    {
        out.bus = normalize_series(scan.freq_ghz, scan.bus, half_width_ghz);
    }
    if (!scan.drop.empty())
    {
        out.drop = normalize_series(scan.freq_ghz, scan.drop, half_width_ghz);
    }
    return out;
}

ResonanceTable detect_resonances(const std::vector<double>& x, const std::vector<double>& t,
                                 const DetectOptions& options)
{
    require_axis(x, "frequency axis");
    if (x.size() != t.size())
    {
        throw Error(ErrorCode::InvalidInput, "transmission does not match the frequency axis");
    }
    if (!(options.prominence >= 0.0))
    {
        throw Error(ErrorCode::InvalidInput, "prominence must be >= 0");
    }
    const std::size_t n = x.size();

    struct Dip
    {
        std::size_t index;
        double prominence;
    };
    std::vector<Dip> dips;
    for (std::size_t i = 1; i + 1 < n; ++i)
    {
        if (!(t[i] < t[i - 1] && t[i] <= t[i + 1]))
        {
            continue;
        }
        // Highest level on each side before reaching a deeper sample.
        double left = t[i];
        for (std::size_t j = i; j-- > 0 && t[j] >= t[i];)
        {
            left = std::max(left, t[j]);
        }
        double right = t[i];
        for (std::size_t j = i + 1; j < n && t[j] >= t[i]; ++j)
        {
            right = std::max(right, t[j]);
        }
        const double prom = std::min(left, right) - t[i];
        if (prom >= options.prominence && prom > 0.0)
        {
            dips.push_back({i, prom});
        }
    }

    ResonanceTable table;
    for (std::size_t d = 0; d < dips.size(); ++d)
    {
        const std::size_t i = dips[d].index;
        const double half = t[i] + 0.5 * dips[d].prominence;
        std::size_t l = i, r = i;
        while (l > 0 && t[l] < half)
        {
            --l;
        }
        while (r + 1 < n && t[r] < half)
        {
            ++r;
        }
        const std::size_t reach = std::max<std::size_t>(4 * (r - l), 5);
        std::size_t lo = i > reach ? i - reach : 0;
        std::size_t hi = std::min(n - 1, i + reach);
        if (d > 0)
        {
            lo = std::max(lo, (dips[d - 1].index + i + 1) / 2);
        }
        if (d + 1 < dips.size())
        {
            hi = std::min(hi, (dips[d + 1].index + i) / 2);
        }

        fitkit::DataSeries window;
        window.x.assign(x.begin() + static_cast<std::ptrdiff_t>(lo), x.begin() + static_cast<std::ptrdiff_t>(hi + 1));
        window.y.assign(t.begin() + static_cast<std::ptrdiff_t>(lo), t.begin() + static_cast<std::ptrdiff_t>(hi + 1));
        Resonance row;
        try
        {
            const fitkit::LorentzianFit fit = fitkit::fit_lorentzian(window);
            if (fit.degenerate || !(fit.fwhm > 0.0) || fit.depth <= 0.0)
            {
                continue;
            }
            row.center_ghz = fit.center;
            row.kappa_ghz = fit.fwhm;
            row.q = fit.q;
            row.delta_t = fit.depth;
        }
        catch (const Error&)
        {
            // Too few samples to fit: keep the raw estimate.
            row.center_ghz = x[i];
            row.kappa_ghz = x[r] - x[l];
            row.q = std::abs(x[i]) / row.kappa_ghz;
            row.delta_t = dips[d].prominence;
            if (!(row.q > 0.0))
            {
                continue;
            }
        }
        table.rows.push_back(row);
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const Resonance& a, const Resonance& b) { return a.center_ghz < b.center_ghz; });
    if (!options.fsr_ghz.empty())
    {
        assign_mode_orders(table, options.fsr_ghz, options.fsr_tolerance);
    }
    return table;
}

void assign_mode_orders(ResonanceTable& table, const std::vector<double>& fsr_ghz, double tolerance)
{
    const std::size_t n = table.rows.size();
    for (auto& row : table.rows)
    {
        row.order = -1;
    }
    if (!(tolerance > 0.0))
    {
        throw Error(ErrorCode::InvalidInput, "FSR tolerance must be positive");
    }
    std::vector<std::size_t> best_len(n, 1);
    for (std::size_t f = 0; f < fsr_ghz.size(); ++f)
    {
        const double fsr = fsr_ghz[f];
        if (!(fsr > 0.0))
        {
            throw Error(ErrorCode::InvalidInput, "FSR candidates must be positive");
        }
        const double tol = tolerance * fsr;
        const std::size_t none = n;
        // Best successor / predecessor by spacing error; keep only mutual pairs.
        std::vector<std::size_t> next(n, none), prev(n, none);
        std::vector<double> next_err(n, tol), prev_err(n, tol);
        for (std::size_t a = 0; a < n; ++a)
        {
            for (std::size_t b = a + 1; b < n; ++b)
            {
                const double err = std::abs(table.rows[b].center_ghz - table.rows[a].center_ghz - fsr);
                if (err <= next_err[a])
                {
                    if (err < next_err[a] || next[a] == none)
                    {
                        next_err[a] = err;
                        next[a] = b;
                    }
                }
                if (err <= prev_err[b])
                {
                    if (err < prev_err[b] || prev[b] == none)
                    {
                        prev_err[b] = err;
                        prev[b] = a;
                    }
                }
            }
        }
        std::vector<std::size_t> chain(n, none);
        std::vector<std::size_t> length;
        for (std::size_t a = 0; a < n; ++a)
        {
            if (chain[a] != none)
            {
                continue;
            }
            const bool head = prev[a] == none || next[prev[a]] != a;
            if (!head)
            {
                continue;
            }
            const std::size_t id = length.size();
            length.push_back(0);
            for (std::size_t k = a; k != none; k = (next[k] != none && prev[next[k]] == k) ? next[k] : none)
            {
                chain[k] = id;
                ++length[id];
            }
        }
        for (std::size_t a = 0; a < n; ++a)
        {
            if (chain[a] == none)
            {
                continue;
            }
            const std::size_t len = length[chain[a]];
            if (len >= 2 && len > best_len[a])
            {
                best_len[a] = len;
                table.rows[a].order = static_cast<int>(f);
            }
        }
    }
}

} // namespace routerkit::scanio
