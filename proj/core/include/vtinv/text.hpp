#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vtinv::text {

/// 17 significant digits, `%g`-style, locale independent. Always round-trips.
std::string format_double(double value);

/// Shortest text that reads back to the same double (e.g. 0.35 -> "0.35").
std::string format_shortest(double value);

/// Strict decimal parse of the whole field (surrounding blanks allowed).
/// Throws ParseError with `line` on failure.
double parse_double(std::string_view field, std::size_t line = 0);
long long parse_int(std::string_view field, std::size_t line = 0);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Splits into lines, dropping a trailing '\r' and a final empty line.
std::vector<std::string_view> lines(std::string_view s);

std::string read_file(const std::string& path);
/// Writes atomically enough for our purposes: truncate + write, throws on failure.
void write_file(const std::string& path, std::string_view contents);

}  // namespace vtinv::text
