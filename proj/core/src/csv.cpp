#include "sglab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sg {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_num(Complex v) {
  if (v.imag() == 0.0) return csv_num(v.real());
  return csv_num(v.real()) + (v.imag() < 0 ? "-" : "+") + csv_num(std::abs(v.imag())) + "i";
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : ncols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvBuilder::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_)
    throw std::logic_error("CsvBuilder: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
  ++nrows_;
}

void CsvBuilder::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("CsvBuilder: cannot write " + path);
  f << out_;
}

}  // namespace sg
