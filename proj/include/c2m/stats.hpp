#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace c2m {

// Non-blank, non-comment-only line count (the LOC/LOM metric).
int count_code_lines(const std::string& text);

struct FileStats {
  std::string file;
  int loc = 0;          // source lines
  int lom = 0;          // translated lines
  int src_nodes = 0;    // source AST nodes
  int out_nodes = 0;    // translated AST nodes
  double millis = 0.0;  // translation wall time
};

struct LinearFit {  // least squares y = a + b x
  double a = 0, b = 0, r2 = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace c2m
