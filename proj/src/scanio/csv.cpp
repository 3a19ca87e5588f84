#include "routerkit/scanio/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "routerkit/error.hpp"

namespace routerkit::scanio
{

namespace
{

std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        {
            cell.remove_prefix(1);
        }
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
        {
            cell.remove_suffix(1);
        }
        cells.emplace_back(cell);
        if (comma == std::string_view::npos)
        {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

} // namespace

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
    {
        if (header[i] == name)
        {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const
{
    if (auto i = find_column(name))
    {
        return *i;
    }
    throw Error(ErrorCode::InvalidInput, "missing CSV column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numbers(std::string_view name) const
{
    return numbers(column(name));
}

std::vector<double> CsvTable::numbers(std::size_t col) const
{
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& row : rows)
    {
        v.push_back(parse_double(row.at(col)));
    }
    return v;
}

CsvTable parse_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        if (line.front() == '#')
        {
            std::string_view c(line);
            c.remove_prefix(1);
            if (!c.empty() && c.front() == ' ')
            {
                c.remove_prefix(1);
            }
            table.comments.emplace_back(c);
            continue;
        }
        auto cells = split(line);
        if (table.header.empty())
        {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size())
        {
            throw Error(ErrorCode::InvalidInput, "CSV line " + std::to_string(line_no) + " has " +
                                                     std::to_string(cells.size()) + " fields, expected " +
                                                     std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty())
    {
        throw Error(ErrorCode::InvalidInput, "CSV input has no header line");
    }
    return table;
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    for (const auto& c : table.comments)
    {
        out << "# " << c << '\n';
    }
    auto write_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows)
    {
        write_row(row);
    }
}

std::string format_double(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(std::string_view text)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+')
    {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
    {
        throw Error(ErrorCode::InvalidInput, "not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw Error(ErrorCode::InvalidInput, "cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::optional<std::string> comment_value(const CsvTable& table, std::string_view key)
{
    for (const auto& c : table.comments)
    {
        const std::size_t eq = c.find('=');
        if (eq == std::string::npos)
        {
            continue;
        }
        std::string_view k(c.data(), eq);
        while (!k.empty() && k.back() == ' ')
        {
            k.remove_suffix(1);
        }
        if (k == key)
        {
            std::string_view v(c);
            v.remove_prefix(eq + 1);
            while (!v.empty() && v.front() == ' ')
            {
                v.remove_prefix(1);
            }
            return std::string(v);
        }
    }
    return std::nullopt;
}

} // namespace routerkit::scanio
