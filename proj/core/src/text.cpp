#include "vtinv/text.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vtinv/error.hpp"

namespace vtinv::text {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::size_t line) {
  const std::string_view f = trim(field);
  double value = 0.0;
  const char* begin = f.data();
  // from_chars rejects a leading '+', accept it for hand-written files.
  if (!f.empty() && f.front() == '+') ++begin;
  const auto res = std::from_chars(begin, f.data() + f.size(), value);
  if (f.empty() || res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
    throw ParseError("malformed number '" + std::string(field) + "'", line);
  }
  return value;
}

long long parse_int(std::string_view field, std::size_t line) {
  const std::string_view f = trim(field);
  long long value = 0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
  if (f.empty() || res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
    throw ParseError("malformed integer '" + std::string(field) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines(std::string_view s) {
  std::vector<std::string_view> out = split(s, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  for (auto& l : out) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace vtinv::text
