#pragma once

#include <string>
#include <vector>

namespace trafficsym::io {

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Parses a full decimal string; throws ParseError on trailing garbage.
double parse_double(const std::string& s);

/// Comma-separated text with a mandatory header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

std::string read_file(const std::string& path);

/// Writes bytes verbatim (binary mode); creates parent directories.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace trafficsym::io
