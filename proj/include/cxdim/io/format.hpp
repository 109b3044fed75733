#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace cxdim::io {

/// Shortest decimal that reads back to the value rounded to 15 significant
/// digits; "-0" prints as "0". Byte-stable across runs.
std::string format_number(double v);

/// Comma-separated table with a fixed header. Cells are stored as text.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  Csv& row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& data() const { return rows_; }

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Convenience: number cells.
std::vector<std::string> cells(std::initializer_list<double> values);

/// Reads a CSV produced by Csv::str (no quoting).
Csv read_csv(const std::filesystem::path& path);

/// Writes text exactly (binary mode, no newline translation). Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cxdim::io
