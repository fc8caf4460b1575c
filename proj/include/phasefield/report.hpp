#pragma once

#include <string>
#include <vector>

namespace pf {

// Shortest round-trip decimal form; deterministic across runs.
std::string format_double(double v);

// One CSV line from already-formatted cells.
std::string csv_line(const std::vector<std::string>& cells);

// Least-squares slope of y against x (both already in log scale if a
// convergence order is wanted).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(y) vs log(x); requires positive data.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_text_file(const std::string& path, const std::string& body);

}  // namespace pf
