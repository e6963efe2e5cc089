#include "embrel/simeval.hpp"

#include <charconv>
#include <cmath>

#include "embrel/csv.hpp"
#include "embrel/errors.hpp"
#include "embrel/metrics.hpp"
#include "embrel/table.hpp"

namespace embrel {

const char* to_string(JudgmentKind kind) {
    return kind == JudgmentKind::Graded ? "graded" : "binary";
}

WordJudgmentSet load_judgments(std::istream& in, JudgmentKind kind, std::string name) {
    CsvReader reader(in);
    auto header = reader.next_record();
    if (!header) {
        throw EmptyInput("judgment file '" + name + "' has no header row");
    }
    if (*header != std::vector<std::string>{"word1", "word2", "sim"}) {
        throw ParseError("expected header 'word1,word2,sim'", reader.record_line());
    }

    WordJudgmentSet set;
    set.name = std::move(name);
    set.kind = kind;
    while (auto record = reader.next_record()) {
        if (record->size() == 1 && (*record)[0].empty()) continue;
        std::size_t line = reader.record_line();
        if (record->size() != 3) {
            throw ParseError("expected 3 fields, got " + std::to_string(record->size()), line);
        }
        WordJudgment judgment;
        judgment.word1 = std::move((*record)[0]);
        judgment.word2 = std::move((*record)[1]);
        if (judgment.word1.empty() || judgment.word2.empty()) {
            throw ParseError("empty word field", line);
        }
        const std::string& sim = (*record)[2];
        auto res = std::from_chars(sim.data(), sim.data() + sim.size(), judgment.gold);
        if (res.ec != std::errc{} || res.ptr != sim.data() + sim.size() ||
            !std::isfinite(judgment.gold)) {
            throw ParseError("non-numeric gold value '" + sim + "'", line);
        }
        if (kind == JudgmentKind::Binary && judgment.gold != 0.0 && judgment.gold != 1.0) {
            throw BadLabel("binary gold value must be 0 or 1, got '" + sim + "'", line);
        }
        set.pairs.push_back(std::move(judgment));
    }
    if (set.pairs.empty()) {
        throw EmptyInput("judgment file '" + set.name + "' has no pairs");
    }
    return set;
}

SimEvalReport evaluate_similarity(const EmbeddingTable& table, const WordJudgmentSet& gold) {
    SimEvalReport report;
    report.model = table.name();
    report.dataset = gold.name;
    report.metric = gold.kind == JudgmentKind::Graded ? "rho" : "ap";
    report.pairs_total = gold.pairs.size();

    std::vector<double> system_scores;
    std::vector<double> gold_scores;
    for (const auto& pair : gold.pairs) {
        const Vector* u = table.lookup(pair.word1);
        const Vector* v = table.lookup(pair.word2);
        if (u == nullptr || v == nullptr) {
            ++report.pairs_dropped;  // dropped before any vector arithmetic
            continue;
        }
        system_scores.push_back(cosine_similarity(*u, *v));
        gold_scores.push_back(pair.gold);
    }
    if (system_scores.empty()) {
        throw AllPairsDropped("every pair of '" + gold.name + "' has an OOV word for model '" +
                              table.name() + "'");
    }

    if (gold.kind == JudgmentKind::Graded) {
        report.value = spearman_rho(system_scores, gold_scores);
    } else {
        std::vector<int> labels(gold_scores.size());
        for (std::size_t i = 0; i < gold_scores.size(); ++i) {
            labels[i] = gold_scores[i] == 1.0 ? 1 : 0;
        }
        report.value = average_precision(system_scores, labels);
    }
    return report;
}

void write_sim_reports_csv(std::span<const SimEvalReport> reports, std::ostream& out) {
    out << "model,dataset,metric,value,pairs_total,pairs_dropped\n";
    for (const auto& r : reports) {
        out << r.model << ',' << r.dataset << ',' << r.metric << ','
            << format_double(r.value) << ',' << r.pairs_total << ',' << r.pairs_dropped << '\n';
    }
}

std::string format_sim_reports(std::span<const SimEvalReport> reports) {
    const std::vector<std::string> header{"model",       "dataset",      "metric", "value",
                                          "pairs_total", "pairs_dropped", "drop_fraction"};
    std::vector<std::vector<std::string>> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) {
        rows.push_back({r.model, r.dataset, r.metric, format_double(r.value),
                        std::to_string(r.pairs_total), std::to_string(r.pairs_dropped),
                        format_double(r.drop_fraction(), 3)});
    }
    std::string out =
        "word similarity report (system score = cosine similarity; a distance-"
        "based rho flips sign)\n";
    out += format_table(header, rows);
    return out;
}

}  // namespace embrel
