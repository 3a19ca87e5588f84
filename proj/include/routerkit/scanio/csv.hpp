#ifndef ROUTERKIT_SCANIO_CSV_HPP
#define ROUTERKIT_SCANIO_CSV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace routerkit::scanio
{

// Comma-separated, '#' comment lines before the header, '.' decimal, LF endings.
struct CsvTable
{
    std::vector<std::string> comments; // without the leading '#' and one space
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> find_column(std::string_view name) const;
    std::size_t column(std::string_view name) const; // InvalidInput when missing
    std::vector<double> numbers(std::string_view name) const;
    std::vector<double> numbers(std::size_t column) const;
};

CsvTable parse_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Reads a whole file; InvalidInput when it cannot be opened.
std::string read_file(const std::string& path);

// "key=value" comment lines.
std::optional<std::string> comment_value(const CsvTable& table, std::string_view key);

} // namespace routerkit::scanio

#endif
