#pragma once

#include <span>
#include <string>
#include <vector>

namespace embrel {

// Left-aligned plain-text table: header row, dashed rule, one line per row.
std::string format_table(std::span<const std::string> header,
                         std::span<const std::vector<std::string>> rows);

// Fixed-precision decimal rendering used by every emitted artifact.
std::string format_double(double value, int precision = 6);

}  // namespace embrel
