#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "embrel/cli.hpp"

namespace {

using embrel::RunConfig;

// "name=path" -> pair; the first '=' splits.
bool parse_embedding_spec(const std::string& spec, RunConfig& config) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) return false;
    config.embeddings.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
    return true;
}

// "name=path:kind" with kind in {graded, binary}; the last ':' splits so
// paths may contain colons.
bool parse_gold_spec(const std::string& spec, RunConfig& config) {
    auto eq = spec.find('=');
    auto colon = spec.rfind(':');
    if (eq == std::string::npos || colon == std::string::npos || colon < eq) return false;
    embrel::GoldSpec gold;
    gold.name = spec.substr(0, eq);
    gold.path = spec.substr(eq + 1, colon - eq - 1);
    std::string kind = spec.substr(colon + 1);
    if (gold.name.empty() || gold.path.empty()) return false;
    if (kind == "graded") {
        gold.kind = embrel::JudgmentKind::Graded;
    } else if (kind == "binary") {
        gold.kind = embrel::JudgmentKind::Binary;
    } else {
        return false;
    }
    config.gold.push_back(std::move(gold));
    return true;
}

bool parse_strategies(const std::string& list, RunConfig& config) {
    config.strategies.clear();
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        std::string part = list.substr(start, comma == std::string::npos ? comma : comma - start);
        auto strategy = embrel::strategy_from_string(part);
        if (!strategy) return false;
        config.strategies.push_back(*strategy);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return !config.strategies.empty();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-embedding evaluation and forum-post relatedness pipeline"};
    app.require_subcommand(1);
    // one optional config file; values live in a section named after the
    // subcommand ([eval-rel], [curve], ...) and explicit flags win
    app.set_config("--config")->description("INI config file with one [subcommand] section");

    RunConfig config;
    std::vector<std::string> embedding_specs;
    std::vector<std::string> gold_specs;
    std::string strategy_list;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->fallthrough();  // lets --config appear after the subcommand name
        cmd->add_option("--out", config.out_dir, "output directory")->capture_default_str();
        cmd->add_flag("--keep-going", config.keep_going,
                      "attempt the remaining cells after a failure");
        return cmd;
    };
    auto add_embeddings = [&](CLI::App* cmd) {
        cmd->add_option("--embeddings", embedding_specs,
                        "embedding model as name=path (repeatable)")
            ->take_all();
    };
    auto add_classify = [&](CLI::App* cmd) {
        cmd->add_option("--pairs", config.pairs_path, "post-pair dataset CSV");
        cmd->add_option("--lemmas", config.lemmas_path, "surface<TAB>lemma TSV");
        cmd->add_option("--strategy", strategy_list,
                        "comma list of sum|con|con_pca (default: all three)");
        cmd->add_option("--k", config.neighbors_k, "KNN neighbor count")->capture_default_str();
        cmd->add_option("--folds", config.folds, "cross-validation folds")->capture_default_str();
        cmd->add_option("--seed", config.seed, "fold-assignment seed")
            ->capture_default_str()
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_flag("--swap-concat-order", config.swap_concat_order,
                      "concatenate (op_post, post) instead of (post, op_post)");
        cmd->add_flag("--pca-per-fold", config.pca_per_fold,
                      "refit PCA on each training split instead of the full matrix");
    };

    CLI::App* eval_sim = add_common(app.add_subcommand(
        "eval-sim", "score embedding models against word-similarity gold datasets"));
    add_embeddings(eval_sim);
    eval_sim->add_option("--gold", gold_specs,
                         "gold dataset as name=path:kind, kind graded|binary (repeatable)")
        ->take_all();

    CLI::App* eval_rel = add_common(app.add_subcommand(
        "eval-rel", "cross-validated KNN relatedness detection per model and strategy"));
    add_embeddings(eval_rel);
    add_classify(eval_rel);

    CLI::App* curve = add_common(app.add_subcommand(
        "curve", "learning curves per model and strategy"));
    add_embeddings(curve);
    add_classify(curve);
    std::vector<double> fractions;
    curve->add_option("--fractions", fractions,
                      "training fractions in (0,1], strictly increasing")
        ->delimiter(',');

    CLI::App* dataset_agg = add_common(app.add_subcommand(
        "dataset-agg", "majority-vote labels and annotator agreement from raw annotations"));
    dataset_agg->add_option("--annotations", config.annotations_path,
                            "pair_id,annotator_id,label CSV");
    dataset_agg->add_option("--texts", config.texts_path,
                            "optional pair_id,post,op_post CSV to emit a full pairs file");

    CLI11_PARSE(app, argc, argv);

    for (const auto& spec : embedding_specs) {
        if (!parse_embedding_spec(spec, config)) {
            std::cerr << "[embrel] bad --embeddings value '" << spec << "' (want name=path)\n";
            return embrel::kExitConfigError;
        }
    }
    for (const auto& spec : gold_specs) {
        if (!parse_gold_spec(spec, config)) {
            std::cerr << "[embrel] bad --gold value '" << spec
                      << "' (want name=path:kind with kind graded|binary)\n";
            return embrel::kExitConfigError;
        }
    }
    if (!strategy_list.empty() && !parse_strategies(strategy_list, config)) {
        std::cerr << "[embrel] bad --strategy value '" << strategy_list << "'\n";
        return embrel::kExitConfigError;
    }
    if (!fractions.empty()) config.fractions = fractions;

    // EMBREL_SEED fills in only when --seed was not on the command line.
    if (!seed_given) {
        if (const char* env = std::getenv("EMBREL_SEED")) {
            try {
                config.seed = std::stoull(env);
            } catch (const std::exception&) {
                std::cerr << "[embrel] EMBREL_SEED is not an integer: '" << env << "'\n";
                return embrel::kExitConfigError;
            }
        }
    }

    if (eval_sim->parsed()) return embrel::cmd_eval_sim(config);
    if (eval_rel->parsed()) return embrel::cmd_eval_rel(config);
    if (curve->parsed()) return embrel::cmd_curve(config);
    if (dataset_agg->parsed()) return embrel::cmd_dataset_agg(config);
    return embrel::kExitConfigError;
}
