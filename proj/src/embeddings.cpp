#include "embrel/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "embrel/errors.hpp"

namespace embrel {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_double(std::string_view s, double& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool parse_positive_int(std::string_view s, std::size_t& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size() && out > 0;
}

// Strips one trailing '\r' so CRLF files parse the same as LF files.
bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool read_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (read_line(in, line)) {
        ++lineno;
        if (!split_ws(line).empty()) return true;
    }
    return false;
}

}  // namespace

EmbeddingTable EmbeddingTable::load(std::istream& in, const std::string& name,
                                    std::optional<std::size_t> expected_dim) {
    EmbeddingTable table;
    table.name_ = name;

    auto parse_vector_line = [&table](std::string_view text, std::size_t at_line) {
        auto fields = split_ws(text);
        if (fields.empty()) return;
        if (fields.size() < 2) {
            throw ParseError("embedding line with no components", at_line);
        }
        std::string token(fields[0]);
        std::size_t dim = fields.size() - 1;
        if (table.dim_ == 0) {
            table.dim_ = dim;
        } else if (dim != table.dim_) {
            throw DimMismatch("embedding line " + std::to_string(at_line) + ": got " +
                              std::to_string(dim) + " components, expected " +
                              std::to_string(table.dim_));
        }
        Vector vec(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (!parse_double(fields[i + 1], vec[i])) {
                throw ParseError("non-numeric component '" + std::string(fields[i + 1]) + "'",
                                 at_line);
            }
            if (!std::isfinite(vec[i])) {
                throw NonFiniteComponent("non-finite component for token '" + token +
                                         "' at line " + std::to_string(at_line));
            }
        }
        auto [it, inserted] = table.entries_.emplace(std::move(token), std::move(vec));
        if (inserted) {
            table.order_.push_back(it->first);
        } else {
            ++table.duplicates_;  // first occurrence wins
        }
    };

    std::string line;
    std::size_t lineno = 0;

    if (!read_content_line(in, line, lineno)) {
        throw EmptyInput("embedding file '" + name + "' has no vector lines");
    }

    // A first line with exactly two positive-integer fields is a "V D" header
    // when D matches the width of the next vector line; otherwise it is data
    // (a one-dimensional vector with a numeric token).
    auto first_fields = split_ws(line);
    std::size_t header_words = 0, header_dim = 0;
    if (first_fields.size() == 2 && parse_positive_int(first_fields[0], header_words) &&
        parse_positive_int(first_fields[1], header_dim)) {
        std::string first_line = line;
        std::size_t first_lineno = lineno;
        if (!read_content_line(in, line, lineno)) {
            // Header with nothing behind it.
            throw EmptyInput("embedding file '" + name + "' has no vector lines");
        }
        if (split_ws(line).size() == header_dim + 1) {
            table.dim_ = header_dim;
        } else {
            parse_vector_line(first_line, first_lineno);
        }
        parse_vector_line(line, lineno);
    } else {
        parse_vector_line(line, lineno);
    }

    while (read_line(in, line)) {
        ++lineno;
        parse_vector_line(line, lineno);
    }

    if (table.entries_.empty()) {
        throw EmptyInput("embedding file '" + name + "' has no vector lines");
    }
    if (expected_dim && table.dim_ != *expected_dim) {
        throw DimMismatch("embedding file '" + name + "' has dimension " +
                          std::to_string(table.dim_) + ", expected " +
                          std::to_string(*expected_dim));
    }
    return table;
}

EmbeddingTable EmbeddingTable::from_entries(
    std::string name, std::size_t dim,
    std::unordered_map<std::string, Vector> entries) {
    EmbeddingTable table;
    table.name_ = std::move(name);
    table.dim_ = dim;
    for (const auto& [token, vec] : entries) {
        if (vec.size() != dim) {
            throw DimMismatch("entry '" + token + "' has dimension " +
                              std::to_string(vec.size()) + ", expected " + std::to_string(dim));
        }
        for (double c : vec) {
            if (!std::isfinite(c)) {
                throw NonFiniteComponent("non-finite component for token '" + token + "'");
            }
        }
    }
    table.entries_ = std::move(entries);
    table.order_.reserve(table.entries_.size());
    for (const auto& [token, vec] : table.entries_) table.order_.push_back(token);
    return table;
}

const Vector* EmbeddingTable::lookup(std::string_view token) const {
    // Transparent lookup would need a heterogeneous hash; one string copy per
    // query is irrelevant next to the vector math it feeds.
    auto it = entries_.find(std::string(token));
    return it == entries_.end() ? nullptr : &it->second;
}

void EmbeddingTable::save(std::ostream& out) const {
    out << entries_.size() << ' ' << dim_ << '\n';
    char buf[64];
    for (const auto& token : order_) {
        out << token;
        const Vector& vec = entries_.at(token);
        for (double c : vec) {
            std::snprintf(buf, sizeof(buf), "%.17g", c);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

}  // namespace embrel
