#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "embrel/embeddings.hpp"

namespace embrel {

enum class JudgmentKind { Graded, Binary };

const char* to_string(JudgmentKind kind);

struct WordJudgment {
    std::string word1;
    std::string word2;
    double gold = 0.0;
};

// Gold word pairs: graded sets are scored with Spearman's rho, binary sets
// with average precision.
struct WordJudgmentSet {
    std::string name;
    JudgmentKind kind = JudgmentKind::Graded;
    std::vector<WordJudgment> pairs;
};

// UTF-8 CSV with header `word1,word2,sim`. Binary sets only accept gold
// values 0 and 1. Throws ParseError, BadLabel, EmptyInput.
WordJudgmentSet load_judgments(std::istream& in, JudgmentKind kind, std::string name);

// One (model, dataset) evaluation cell. The metric is computed on the pairs
// that survived OOV dropping; the correlated system score is cosine
// similarity, so a graded rho has the opposite sign of a distance-based one.
struct SimEvalReport {
    std::string model;
    std::string dataset;
    std::string metric;  // "rho" or "ap"
    double value = 0.0;
    std::size_t pairs_total = 0;
    std::size_t pairs_dropped = 0;

    double drop_fraction() const {
        return pairs_total == 0 ? 0.0
                                : static_cast<double>(pairs_dropped) /
                                      static_cast<double>(pairs_total);
    }
};

// Drops every pair with at least one out-of-vocabulary word (no vector math
// touches dropped pairs), scores the survivors with the set's metric.
// Throws AllPairsDropped; DegenerateInput / NoPositives propagate from the
// metric layer.
SimEvalReport evaluate_similarity(const EmbeddingTable& table, const WordJudgmentSet& gold);

// `model,dataset,metric,value,pairs_total,pairs_dropped` rows.
void write_sim_reports_csv(std::span<const SimEvalReport> reports, std::ostream& out);

// Aligned text table with the similarity-vs-distance sign note in the header.
std::string format_sim_reports(std::span<const SimEvalReport> reports);

}  // namespace embrel
