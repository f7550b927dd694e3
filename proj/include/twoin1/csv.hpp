#pragma once

#include <string>
#include <vector>

namespace twoin1 {

// RFC-4180 field quoting: fields containing a comma, quote, CR or LF are
// wrapped in quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

std::string csv_line(const std::vector<std::string>& fields);

// Shortest round-trip decimal rendering (std::to_chars); "NA" for NaN so
// spreadsheets behave.
std::string format_number(double v);

}  // namespace twoin1
