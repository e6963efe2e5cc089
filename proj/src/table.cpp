#include "embrel/table.hpp"

#include <cstdio>

namespace embrel {

std::string format_table(std::span<const std::string> header,
                         std::span<const std::vector<std::string>> rows) {
    std::vector<std::size_t> widths(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    auto append_row = [&](std::string& out, std::span<const std::string> cells) {
        for (std::size_t c = 0; c < widths.size(); ++c) {
            const std::string& cell = c < cells.size() ? cells[c] : std::string();
            out += cell;
            if (c + 1 < widths.size()) {
                out.append(widths[c] - cell.size() + 2, ' ');
            }
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    };
    std::string out;
    append_row(out, header);
    std::size_t rule = 0;
    for (std::size_t c = 0; c < widths.size(); ++c) rule += widths[c] + (c + 1 < widths.size() ? 2 : 0);
    out.append(rule, '-');
    out += '\n';
    for (const auto& row : rows) append_row(out, row);
    return out;
}

std::string format_double(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    return buf;
}

}  // namespace embrel
