#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace jpegvpr {

/// Header plus rows; every row has header.size() fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column. Throws DataError if absent.
  std::size_t column(std::string_view name) const;
};

/// RFC 4180 reader (quoted fields, doubled quotes, CRLF tolerant). Throws
/// DataError with the file and line on ragged rows or a missing header.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, std::string_view origin = "<csv>");

/// Serializes with '\n' line endings, quoting only fields that need it.
std::string format_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::filesystem::path& path);

/// Fixed-point text, e.g. format_fixed(0.5, 9) == "0.500000000".
std::string format_fixed(double value, int decimals);

int parse_int(std::string_view text, std::string_view what);
long long parse_int64(std::string_view text, std::string_view what);
double parse_double(std::string_view text, std::string_view what);

}  // namespace jpegvpr
