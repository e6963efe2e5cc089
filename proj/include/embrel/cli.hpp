#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "embrel/compose.hpp"
#include "embrel/simeval.hpp"

namespace embrel {

// Seed used when neither --seed nor EMBREL_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 42;

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCellError = 1;    // an evaluation cell failed
inline constexpr int kExitConfigError = 2;  // bad flags or unusable input file

struct GoldSpec {
    std::string name;
    std::string path;
    JudgmentKind kind = JudgmentKind::Graded;
};

// Everything a run needs. Flags map onto this 1:1; an optional config file
// fills fields the flags left alone.
struct RunConfig {
    std::vector<std::pair<std::string, std::string>> embeddings;  // (name, path)
    std::vector<GoldSpec> gold;
    std::string pairs_path;
    std::string annotations_path;
    std::string texts_path;  // optional pair_id -> (post, op_post) join
    std::string lemmas_path; // optional; absent means identity lemmatization
    std::vector<Strategy> strategies{Strategy::Sum, Strategy::Con, Strategy::ConPca};
    std::size_t neighbors_k = 3;
    std::size_t folds = 10;
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::string out_dir = ".";
    bool keep_going = false;        // attempt remaining cells after a failure
    bool swap_concat_order = false; // concatenate (op_post, post) instead
    bool pca_per_fold = false;      // refit PCA inside each training split
};

// Word-similarity grid (every model x every gold set). Writes
// similarity.csv and similarity.txt into out_dir.
int cmd_eval_sim(const RunConfig& config);

// Relatedness grid (every model x every strategy): text pipeline, mean
// pooling, pair composition, stratified k-fold KNN. Writes relatedness.csv,
// relatedness.txt and one folds_<model>_<strategy>.csv per cell.
int cmd_eval_rel(const RunConfig& config);

// Learning curves; one curve_<model>_<strategy>.csv per cell.
int cmd_curve(const RunConfig& config);

// Majority-vote aggregation of raw annotations plus an agreement report.
// With texts_path set, emits a pairs.csv loadable by eval-rel; otherwise
// labels.csv with pair ids.
int cmd_dataset_agg(const RunConfig& config);

}  // namespace embrel
