#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "embrel/vector_math.hpp"

namespace embrel {

// An immutable token -> vector table loaded from a word2vec-style text file.
// Safe for unlimited concurrent readers once constructed.
class EmbeddingTable {
public:
    // Parses word2vec text format (optional "V D" header line, then one
    // "token c1 .. cD" line per word) or headerless GloVe text format.
    // The first line is taken as a header when it has exactly two fields,
    // both parse as positive integers, and the second one matches the width
    // of the following vector line.
    //
    // The dimensionality is inferred from the first vector line; a mismatch
    // with `expected_dim` (when given) or between lines raises DimMismatch.
    // Duplicate tokens keep the first occurrence; the number of discarded
    // duplicates is available via duplicates_discarded().
    //
    // Throws ParseError, DimMismatch, NonFiniteComponent, EmptyInput.
    static EmbeddingTable load(std::istream& in, const std::string& name,
                               std::optional<std::size_t> expected_dim = std::nullopt);

    // Builds a table directly from entries; used by tests and fixtures.
    static EmbeddingTable from_entries(
        std::string name, std::size_t dim,
        std::unordered_map<std::string, Vector> entries);

    // nullptr means out-of-vocabulary.
    const Vector* lookup(std::string_view token) const;

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const std::string& name() const { return name_; }
    std::size_t duplicates_discarded() const { return duplicates_; }

    // Writes word2vec text format with a header line, tokens in load order,
    // components at full double precision so that load(save(t)) == t.
    void save(std::ostream& out) const;

private:
    EmbeddingTable() = default;

    std::string name_;
    std::size_t dim_ = 0;
    std::size_t duplicates_ = 0;
    std::unordered_map<std::string, Vector> entries_;
    std::vector<std::string> order_;  // tokens in first-seen order, for save()
};

}  // namespace embrel
