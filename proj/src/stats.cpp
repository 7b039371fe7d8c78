#include "c2m/stats.hpp"

#include <cctype>
#include <sstream>

namespace c2m {

// Counts logical code units rather than raw text lines, so the measure does
// not depend on how statements happen to be wrapped: comment-only and
// brace-only lines are skipped, and a line holding several conjuncts joined
// by a top-level `and` counts once per conjunct.
int count_code_lines(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int n = 0;
  bool in_block_comment = false;
  while (std::getline(is, line)) {
    std::string code;
    for (size_t i = 0; i < line.size(); ++i) {
      if (in_block_comment) {
        if (line[i] == '*' && i + 1 < line.size() && line[i + 1] == '/') {
          in_block_comment = false;
          ++i;
        }
        continue;
      }
      if (line[i] == '/' && i + 1 < line.size() && line[i + 1] == '*') {
        in_block_comment = true;
        ++i;
        continue;
      }
      if (line[i] == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
      code += line[i];
    }
    size_t b = code.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = code.find_last_not_of(" \t\r");
    code = code.substr(b, e - b + 1);
    // Pure block scaffolding carries no statement of its own.
    if (code == "{" || code == "}" || code == "};" || code == "} and" ||
        code == "} else {") {
      continue;
    }
    int units = 1;
    int depth = 0;
    for (size_t i = 0; i + 5 <= code.size(); ++i) {
      char c = code[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      else if (c == ')' || c == ']' || c == '}') --depth;
      else if (depth == 0 && code.compare(i, 5, " and ") == 0) ++units;
    }
    n += units;
  }
  return n;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  size_t n = x.size();
  if (n < 2 || y.size() != n) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) return f;
  f.b = (n * sxy - sx * sy) / denom;
  f.a = (sy - f.b * sx) / n;
  double ss_res = 0, ss_tot = 0, mean = sy / n;
  for (size_t i = 0; i < n; ++i) {
    double pred = f.a + f.b * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = (ss_tot == 0) ? 1.0 : 1.0 - ss_res / ss_tot;
  return f;
}

}  // namespace c2m
