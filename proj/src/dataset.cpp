#include "embrel/dataset.hpp"

#include <unordered_map>
#include <unordered_set>

#include "embrel/csv.hpp"
#include "embrel/errors.hpp"

namespace embrel {

namespace {

bool is_blank_record(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields[0].empty();
}

int parse_label(const std::string& text, std::size_t line) {
    if (text == "0") return 0;
    if (text == "1") return 1;
    throw BadLabel("label must be 0 or 1, got '" + text + "'", line);
}

void expect_header(CsvReader& reader, const std::vector<std::string>& expected) {
    auto header = reader.next_record();
    if (!header) {
        throw EmptyInput("input has no header row");
    }
    if (*header != expected) {
        std::string want;
        for (const auto& h : expected) {
            if (!want.empty()) want += ',';
            want += h;
        }
        throw ParseError("expected header '" + want + "'", reader.record_line());
    }
}

// Character (code point) count: continuation bytes do not start a character.
std::size_t utf8_length(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

}  // namespace

PairDataset load_pairs(std::istream& in) {
    CsvReader reader(in);
    expect_header(reader, {"post", "op_post", "is_related"});

    PairDataset data;
    std::unordered_set<std::string> seen_op_posts;
    while (auto record = reader.next_record()) {
        if (is_blank_record(*record)) continue;
        std::size_t line = reader.record_line();
        if (record->size() != 3) {
            throw ParseError("expected 3 fields, got " + std::to_string(record->size()), line);
        }
        PostPairRecord rec;
        rec.post = std::move((*record)[0]);
        rec.op_post = std::move((*record)[1]);
        rec.is_related = parse_label((*record)[2], line);
        if (rec.post.empty() || rec.op_post.empty()) {
            throw ParseError("post and op_post must be non-empty", line);
        }
        if (utf8_length(rec.post) > kExpectedMaxPostChars) ++data.over_length_posts;
        if (!seen_op_posts.insert(rec.op_post).second) ++data.duplicate_op_posts;
        data.positives += static_cast<std::size_t>(rec.is_related == 1);
        data.records.push_back(std::move(rec));
    }
    if (data.records.empty()) {
        throw EmptyInput("pair dataset has no records");
    }
    return data;
}

void save_pairs(std::span<const PostPairRecord> records, std::ostream& out) {
    const std::vector<std::string> header{"post", "op_post", "is_related"};
    write_csv_record(out, header);
    for (const auto& rec : records) {
        const std::vector<std::string> fields{rec.post, rec.op_post,
                                              std::to_string(rec.is_related)};
        write_csv_record(out, fields);
    }
}

std::vector<AnnotationRecord> load_annotations(std::istream& in) {
    CsvReader reader(in);
    expect_header(reader, {"pair_id", "annotator_id", "label"});

    std::vector<AnnotationRecord> annotations;
    std::unordered_set<std::string> seen;
    while (auto record = reader.next_record()) {
        if (is_blank_record(*record)) continue;
        std::size_t line = reader.record_line();
        if (record->size() != 3) {
            throw ParseError("expected 3 fields, got " + std::to_string(record->size()), line);
        }
        AnnotationRecord rec;
        rec.pair_id = std::move((*record)[0]);
        rec.annotator_id = std::move((*record)[1]);
        rec.label = parse_label((*record)[2], line);
        if (rec.pair_id.empty() || rec.annotator_id.empty()) {
            throw ParseError("pair_id and annotator_id must be non-empty", line);
        }
        if (!seen.insert(rec.pair_id + '\x1f' + rec.annotator_id).second) {
            throw ParseError("duplicate annotation for pair '" + rec.pair_id +
                                 "' by annotator '" + rec.annotator_id + "'",
                             line);
        }
        annotations.push_back(std::move(rec));
    }
    if (annotations.empty()) {
        throw EmptyInput("annotation file has no records");
    }
    return annotations;
}

std::vector<std::pair<std::string, int>> majority_labels(
    std::span<const AnnotationRecord> annotations) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> votes;  // ones, total
    for (const auto& a : annotations) {
        auto [it, inserted] = votes.try_emplace(a.pair_id, 0, 0);
        if (inserted) order.push_back(a.pair_id);
        it->second.first += static_cast<std::size_t>(a.label == 1);
        it->second.second += 1;
    }
    std::vector<std::pair<std::string, int>> labels;
    labels.reserve(order.size());
    for (const auto& pair_id : order) {
        auto [ones, total] = votes.at(pair_id);
        if (total % 2 == 0) {
            throw EvenAnnotatorCount("pair '" + pair_id + "' has " + std::to_string(total) +
                                     " annotations; a strict majority needs an odd count");
        }
        labels.emplace_back(pair_id, ones * 2 > total ? 1 : 0);
    }
    return labels;
}

AgreementStats agreement_stats(std::span<const AnnotationRecord> annotations) {
    std::vector<std::string> annotator_order;
    std::unordered_map<std::string, std::size_t> annotator_idx;
    std::vector<std::string> pair_order;
    std::unordered_map<std::string, std::size_t> pair_idx;
    for (const auto& a : annotations) {
        if (annotator_idx.try_emplace(a.annotator_id, annotator_order.size()).second) {
            annotator_order.push_back(a.annotator_id);
        }
        if (pair_idx.try_emplace(a.pair_id, pair_order.size()).second) {
            pair_order.push_back(a.pair_id);
        }
    }
    const std::size_t n_ann = annotator_order.size();
    const std::size_t n_pairs = pair_order.size();

    // labels[pair][annotator], -1 when that annotator skipped the pair
    std::vector<std::vector<int>> labels(n_pairs, std::vector<int>(n_ann, -1));
    for (const auto& a : annotations) {
        labels[pair_idx.at(a.pair_id)][annotator_idx.at(a.annotator_id)] = a.label;
    }

    AgreementStats stats;
    stats.pair_count = n_pairs;
    stats.annotator_count = n_ann;

    std::size_t unanimous = 0;
    for (const auto& row : labels) {
        int first = -1;
        bool all_equal = true;
        for (int l : row) {
            if (l < 0) continue;
            if (first < 0) first = l;
            else if (l != first) all_equal = false;
        }
        unanimous += static_cast<std::size_t>(all_equal);
    }
    stats.unanimity_fraction =
        n_pairs == 0 ? 1.0 : static_cast<double>(unanimous) / static_cast<double>(n_pairs);

    // Raw percent agreement per annotator pair over the items both touched,
    // averaged over annotator pairs. With fewer than two annotators there is
    // no disagreement evidence, so the value is vacuously 1.
    double total = 0.0;
    std::size_t counted_pairs = 0;
    for (std::size_t i = 0; i < n_ann; ++i) {
        for (std::size_t j = i + 1; j < n_ann; ++j) {
            std::size_t common = 0, agree = 0;
            for (const auto& row : labels) {
                if (row[i] < 0 || row[j] < 0) continue;
                ++common;
                agree += static_cast<std::size_t>(row[i] == row[j]);
            }
            if (common > 0) {
                total += static_cast<double>(agree) / static_cast<double>(common);
                ++counted_pairs;
            }
        }
    }
    stats.mean_pairwise_agreement =
        counted_pairs == 0 ? 1.0 : total / static_cast<double>(counted_pairs);
    return stats;
}

}  // namespace embrel
