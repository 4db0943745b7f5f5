#pragma once

#include <string>
#include <vector>

#include "sglab/grid.hpp"

namespace sg {

/// Round-trip exact float formatting (17 significant digits).
std::string csv_num(double v);
std::string csv_num(Complex v);  // "re+imj" style not used; emits re only when imag == 0

/// Minimal deterministic CSV assembly: header once, then rows.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return out_; }
  int rows() const { return nrows_; }
  void write(const std::string& path) const;

 private:
  std::string out_;
  std::size_t ncols_;
  int nrows_ = 0;
};

}  // namespace sg
