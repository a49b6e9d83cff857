#pragma once

// Deterministic tabular output. Doubles are printed with %.17g so a value
// round-trips exactly and reruns produce byte-identical files.

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "isogeo/errors.hpp"

namespace isogeo {

inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

class TableWriter {
 public:
  // separator "," gives CSV; " " gives gnuplot-style plot data
  TableWriter(const std::string& path, std::string separator = ",")
      : out_(path, std::ios::trunc), separator_(std::move(separator)) {
    if (!out_) throw config_error("TableWriter: cannot open " + path);
  }

  void header(std::initializer_list<const char*> columns) {
    bool first = true;
    for (const char* column : columns) {
      if (!first) out_ << separator_;
      out_ << column;
      first = false;
    }
    out_ << "\n";
  }

  void cell(const std::string& value) {
    if (!row_open_) {
      row_open_ = true;
    } else {
      out_ << separator_;
    }
    out_ << value;
  }

  void cell(double value) { cell(format_double(value)); }
  void cell(std::size_t value) { cell(std::to_string(value)); }
  void cell(int value) { cell(std::to_string(value)); }
  void cell(bool value) { cell(std::string(value ? "1" : "0")); }

  void end_row() {
    out_ << "\n";
    row_open_ = false;
  }

 private:
  std::ofstream out_;
  std::string separator_;
  bool row_open_ = false;
};

}  // namespace isogeo
