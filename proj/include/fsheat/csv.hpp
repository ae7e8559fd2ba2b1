#pragma once

// Byte-stable CSV emission: comma separation, '\n' endings, floats in
// scientific notation at a configured precision, no locale dependence.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fsheat/errors.hpp"

namespace fsheat {

inline std::string csv_num(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", precision, v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, int precision)
      : out_(path, std::ios::binary), prec_(precision), path_(path) {
    if (!out_) throw domain_error("csv: cannot open " + path);
  }

  std::string num(double v) const { return csv_num(v, prec_); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    ++rows_;
  }

  long rows() const { return rows_; }
  const std::string& path() const { return path_; }

 private:
  std::ofstream out_;
  int prec_;
  std::string path_;
  long rows_ = 0;
};

}  // namespace fsheat
