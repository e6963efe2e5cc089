#include <doctest.h>

#include <random>
#include <sstream>

#include "embrel/embeddings.hpp"
#include "embrel/errors.hpp"
#include "embrel/simeval.hpp"
#include "oracles.hpp"

using embrel::EmbeddingTable;
using embrel::JudgmentKind;
using embrel::SimEvalReport;
using embrel::Vector;
using embrel::WordJudgment;
using embrel::WordJudgmentSet;
using embrel::evaluate_similarity;
using embrel::load_judgments;

namespace {

EmbeddingTable fixture_table() {
    std::istringstream in(
        "кошка 1 0 0\n"
        "собака 0.9 0.1 0\n"
        "стол 0 1 0\n"
        "стул 0.1 1 0\n"
        "кот 0.95 0.05 0\n");
    return EmbeddingTable::load(in, "fixture");
}

WordJudgmentSet judgments_from(const std::string& text, JudgmentKind kind,
                               const std::string& name = "gold") {
    std::istringstream in(text);
    return load_judgments(in, kind, name);
}

}  // namespace

TEST_SUITE("simeval") {

TEST_CASE("judgment CSV loads") {
    WordJudgmentSet set =
        judgments_from("word1,word2,sim\nкошка,собака,0.7\n", JudgmentKind::Graded);
    REQUIRE(set.pairs.size() == 1);
    CHECK(set.pairs[0].word1 == "кошка");
    CHECK(set.pairs[0].gold == doctest::Approx(0.7));
    CHECK(set.kind == JudgmentKind::Graded);
}

TEST_CASE("binary sets require 0/1 gold values") {
    CHECK_THROWS_AS(judgments_from("word1,word2,sim\nа,б,0.5\n", JudgmentKind::Binary),
                    embrel::BadLabel);
    CHECK_NOTHROW(judgments_from("word1,word2,sim\nа,б,1\n", JudgmentKind::Binary));
    CHECK_NOTHROW(judgments_from("word1,word2,sim\nа,б,0.5\n", JudgmentKind::Graded));
}

TEST_CASE("judgment parsing errors") {
    CHECK_THROWS_AS(judgments_from("bad,header,row\nа,б,1\n", JudgmentKind::Graded),
                    embrel::ParseError);
    CHECK_THROWS_AS(judgments_from("word1,word2,sim\nа,б\n", JudgmentKind::Graded),
                    embrel::ParseError);
    CHECK_THROWS_AS(judgments_from("word1,word2,sim\nа,б,x\n", JudgmentKind::Graded),
                    embrel::ParseError);
    CHECK_THROWS_AS(judgments_from("word1,word2,sim\n", JudgmentKind::Graded),
                    embrel::EmptyInput);
}

TEST_CASE("pair count equals the file's row count") {
    std::string text = "word1,word2,sim\n";
    for (int i = 0; i < 37; ++i) {
        text += "а" + std::to_string(i) + ",б" + std::to_string(i) + ",0." +
                std::to_string(i % 10) + "\n";
    }
    CHECK(judgments_from(text, JudgmentKind::Graded).pairs.size() == 37);
}

TEST_CASE("constructed agreement gives rho = 1 and no drops") {
    EmbeddingTable table = fixture_table();
    // gold in the same rank order as the cosine similarities
    WordJudgmentSet gold;
    gold.name = "hj";
    gold.kind = JudgmentKind::Graded;
    gold.pairs = {{"кошка", "собака", 0.9}, {"кошка", "стол", 0.1}, {"собака", "стул", 0.3}};
    SimEvalReport report = evaluate_similarity(table, gold);
    CHECK(report.metric == "rho");
    CHECK(report.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.pairs_total == 3);
    CHECK(report.pairs_dropped == 0);
    CHECK(report.drop_fraction() == 0.0);
}

TEST_CASE("OOV pairs are dropped and the survivors scored by hand") {
    EmbeddingTable table = fixture_table();
    WordJudgmentSet gold;
    gold.kind = JudgmentKind::Graded;
    gold.name = "hj";
    gold.pairs = {{"кошка", "собака", 0.9},
                  {"кошка", "НЕТУ", 0.5},  // dropped
                  {"кошка", "стол", 0.1},
                  {"собака", "стул", 0.2}};
    SimEvalReport report = evaluate_similarity(table, gold);
    CHECK(report.pairs_total == 4);
    CHECK(report.pairs_dropped == 1);
    CHECK(report.drop_fraction() == doctest::Approx(0.25));

    std::vector<double> survivor_scores{
        embrel::cosine_similarity(*table.lookup("кошка"), *table.lookup("собака")),
        embrel::cosine_similarity(*table.lookup("кошка"), *table.lookup("стол")),
        embrel::cosine_similarity(*table.lookup("собака"), *table.lookup("стул"))};
    std::vector<double> survivor_gold{0.9, 0.1, 0.2};
    CHECK(report.value ==
          doctest::Approx(oracles::spearman(survivor_scores, survivor_gold)).epsilon(1e-12));
}

TEST_CASE("binary sets are scored with average precision") {
    EmbeddingTable table = fixture_table();
    WordJudgmentSet gold;
    gold.kind = JudgmentKind::Binary;
    gold.name = "rt";
    gold.pairs = {{"кошка", "кот", 1}, {"кошка", "стол", 0}, {"собака", "кот", 1}};
    SimEvalReport report = evaluate_similarity(table, gold);
    CHECK(report.metric == "ap");
    std::vector<double> scores{
        embrel::cosine_similarity(*table.lookup("кошка"), *table.lookup("кот")),
        embrel::cosine_similarity(*table.lookup("кошка"), *table.lookup("стол")),
        embrel::cosine_similarity(*table.lookup("собака"), *table.lookup("кот"))};
    CHECK(report.value ==
          doctest::Approx(oracles::average_precision(scores, {1, 0, 1})).epsilon(1e-12));
}

TEST_CASE("all pairs dropped is an error") {
    EmbeddingTable table = fixture_table();
    WordJudgmentSet gold;
    gold.kind = JudgmentKind::Graded;
    gold.name = "hj";
    gold.pairs = {{"нет", "таких", 0.5}, {"слов", "вообще", 0.1}};
    CHECK_THROWS_AS(evaluate_similarity(table, gold), embrel::AllPairsDropped);
}

TEST_CASE("graded metric is invariant under pair shuffling") {
    EmbeddingTable table = fixture_table();
    WordJudgmentSet gold;
    gold.kind = JudgmentKind::Graded;
    gold.name = "hj";
    gold.pairs = {{"кошка", "собака", 0.9},
                  {"кошка", "стол", 0.1},
                  {"собака", "стул", 0.2},
                  {"кот", "стол", 0.15}};
    double base = evaluate_similarity(table, gold).value;
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t i = gold.pairs.size(); i > 1; --i) {
            std::swap(gold.pairs[i - 1], gold.pairs[oracles::uniform_index(rng, i)]);
        }
        CHECK(evaluate_similarity(table, gold).value == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("an extra OOV-only pair changes counts but not the metric") {
    EmbeddingTable table = fixture_table();
    WordJudgmentSet gold;
    gold.kind = JudgmentKind::Graded;
    gold.name = "hj";
    gold.pairs = {{"кошка", "собака", 0.9}, {"кошка", "стол", 0.1}, {"собака", "стул", 0.2}};
    SimEvalReport before = evaluate_similarity(table, gold);
    gold.pairs.push_back({"кошка", "АБРАКАДАБРА", 0.7});
    SimEvalReport after = evaluate_similarity(table, gold);
    CHECK(after.value == before.value);  // bitwise: dropped pairs feed no arithmetic
    CHECK(after.pairs_total == before.pairs_total + 1);
    CHECK(after.pairs_dropped == before.pairs_dropped + 1);
}

TEST_CASE("report CSV shape") {
    std::vector<SimEvalReport> reports{{"w2v", "hj", "rho", 0.51, 100, 10}};
    std::ostringstream out;
    embrel::write_sim_reports_csv(reports, out);
    CHECK(out.str() ==
          "model,dataset,metric,value,pairs_total,pairs_dropped\n"
          "w2v,hj,rho,0.510000,100,10\n");
}

}  // TEST_SUITE
