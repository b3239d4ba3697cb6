#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arcscale::csv {

/// RFC 4180 record splitting: commas separate fields, double quotes wrap
/// fields that contain commas or quotes, "" escapes a quote. Records do not
/// span lines.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

/// 17 significant digits, shortest-form exponent handling via %.17g.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

/// Reads the next line without its line terminator (\n or \r\n).
bool read_line(std::istream& in, std::string& line);

}  // namespace arcscale::csv
