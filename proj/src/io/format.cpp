#include "cxdim/io/format.hpp"

#include "cxdim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cxdim::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  const double target = std::strtod(buf, nullptr);
  for (int p = 1; p < 15; ++p) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", p, target);
    if (std::strtod(shorter, nullptr) == target) return shorter;
  }
  return buf;
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {}

Csv& Csv::row(std::vector<std::string> c) {
  if (c.size() != header_.size()) throw Error(Errc::precondition, "CSV row width does not match the header");
  rows_.push_back(std::move(c));
  return *this;
}

std::string Csv::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += c[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::vector<std::string> cells(std::initializer_list<double> values) {
  std::vector<std::string> out;
  for (double v : values) out.push_back(format_number(v));
  return out;
}

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> c;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) c.push_back(cell);
    if (!line.empty() && line.back() == ',') c.emplace_back();
    return c;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, "empty CSV " + path.string());
  Csv csv(split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = split(line);
    if (c.size() != csv.header().size()) throw Error(Errc::parse_error, "ragged CSV row in " + path.string());
    csv.row(std::move(c));
  }
  return csv;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace cxdim::io
