#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace embrel {

// One (post, op_post, is_related) triple. Forum posts beyond 216 characters
// are a data-quality signal, not an error; loaders count them instead of
// rejecting.
struct PostPairRecord {
    std::string post;
    std::string op_post;
    int is_related = 0;

    bool operator==(const PostPairRecord&) const = default;
};

inline constexpr std::size_t kExpectedMaxPostChars = 216;

struct PairDataset {
    std::vector<PostPairRecord> records;
    std::size_t positives = 0;
    std::size_t duplicate_op_posts = 0;  // records sharing an earlier op_post
    std::size_t over_length_posts = 0;   // posts longer than 216 characters

    std::size_t negatives() const { return records.size() - positives; }
    double positive_fraction() const {
        return records.empty() ? 0.0
                               : static_cast<double>(positives) /
                                     static_cast<double>(records.size());
    }
};

// RFC 4180 CSV with header `post,op_post,is_related`. Labels must be 0 or 1.
// Throws ParseError (missing/odd header, wrong field count, empty text),
// BadLabel, EmptyInput.
PairDataset load_pairs(std::istream& in);

// Inverse of load_pairs; load(save(d)) reproduces the records exactly.
void save_pairs(std::span<const PostPairRecord> records, std::ostream& out);

// One raw annotator judgment.
struct AnnotationRecord {
    std::string pair_id;
    std::string annotator_id;
    int label = 0;
};

// RFC 4180 CSV with header `pair_id,annotator_id,label`; a repeated
// (pair_id, annotator_id) combination is rejected.
std::vector<AnnotationRecord> load_annotations(std::istream& in);

// Majority label per pair, pairs in first-appearance order. Every pair must
// carry an odd number of annotations or EvenAnnotatorCount is thrown: a tie
// has no honest resolution.
std::vector<std::pair<std::string, int>> majority_labels(
    std::span<const AnnotationRecord> annotations);

struct AgreementStats {
    double unanimity_fraction = 0.0;      // pairs where every annotator agrees
    double mean_pairwise_agreement = 0.0; // raw percent agreement, averaged
                                          // over annotator pairs
    std::size_t pair_count = 0;
    std::size_t annotator_count = 0;
};

// Raw agreement only; the source data ships no chance-corrected coefficient
// and this report does not invent one.
AgreementStats agreement_stats(std::span<const AnnotationRecord> annotations);

}  // namespace embrel
