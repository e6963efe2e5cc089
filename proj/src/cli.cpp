#include "embrel/cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "embrel/classify.hpp"
#include "embrel/csv.hpp"
#include "embrel/dataset.hpp"
#include "embrel/errors.hpp"
#include "embrel/table.hpp"
#include "embrel/textproc.hpp"

namespace embrel {

namespace fs = std::filesystem;

namespace {

void log_line(const std::string& message) {
    std::cerr << "[embrel] " << message << '\n';
}

// Input problems are reported with the offending path and end the run with
// kExitConfigError; --keep-going only spans evaluation-cell failures.
struct ConfigFailure {
    std::string message;
};

void require_file(const std::string& path, const std::string& role) {
    if (path.empty()) {
        throw ConfigFailure{"missing required " + role + " path"};
    }
    if (!fs::is_regular_file(path)) {
        throw ConfigFailure{role + " file not found: " + path};
    }
}

std::ifstream open_input(const std::string& path, const std::string& role) {
    require_file(path, role);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigFailure{"cannot open " + role + " file: " + path};
    }
    return in;
}

// Output files appear atomically: a half-written artifact must never be
// observable under the final name.
void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write output file: " + tmp.string());
        }
        out << content;
    }
    fs::rename(tmp, path);
}

fs::path ensure_out_dir(const RunConfig& config) {
    fs::path dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigFailure{"cannot create output directory: " + dir.string()};
    }
    return dir;
}

EmbeddingTable load_table(const std::string& name, const std::string& path) {
    auto in = open_input(path, "embedding");
    try {
        return EmbeddingTable::load(in, name);
    } catch (const Error& e) {
        throw ConfigFailure{"embedding file " + path + ": " + e.what()};
    }
}

// Runs one task per cell on its own thread and reports failures in cell
// order, so parallel execution cannot reorder anything observable.
template <typename Cell>
std::size_t run_cells(std::vector<Cell>& cells) {
    std::vector<std::future<void>> futures;
    futures.reserve(cells.size());
    for (auto& cell : cells) {
        futures.push_back(std::async(std::launch::async, [&cell] {
            try {
                cell.run();
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }));
    }
    for (auto& future : futures) future.wait();
    std::size_t failures = 0;
    for (const auto& cell : cells) failures += static_cast<std::size_t>(!cell.error.empty());
    return failures;
}

// ---------------------------------------------------------------- eval-sim

struct SimCell {
    const EmbeddingTable* table = nullptr;
    const WordJudgmentSet* gold = nullptr;
    SimEvalReport report;
    std::string error;

    void run() { report = evaluate_similarity(*table, *gold); }
};

// ---------------------------------------------------------------- eval-rel

struct TokenizedPairs {
    PairDataset data;
    std::vector<std::vector<std::string>> post_tokens;
    std::vector<std::vector<std::string>> op_tokens;
    std::vector<int> labels;
};

TokenizedPairs prepare_pairs(const RunConfig& config) {
    TokenizedPairs prepared;
    {
        auto in = open_input(config.pairs_path, "pair dataset");
        try {
            prepared.data = load_pairs(in);
        } catch (const Error& e) {
            throw ConfigFailure{"pair dataset " + config.pairs_path + ": " + e.what()};
        }
    }
    LemmaMap lemmas;
    if (!config.lemmas_path.empty()) {
        auto in = open_input(config.lemmas_path, "lemma map");
        try {
            lemmas = load_lemmas(in);
        } catch (const Error& e) {
            throw ConfigFailure{"lemma map " + config.lemmas_path + ": " + e.what()};
        }
    }
    auto to_tokens = [&lemmas](const std::string& text) {
        return lemmatize(tokenize(clean_text(text)), lemmas);
    };
    for (const auto& record : prepared.data.records) {
        prepared.post_tokens.push_back(to_tokens(record.post));
        prepared.op_tokens.push_back(to_tokens(record.op_post));
        prepared.labels.push_back(record.is_related);
    }
    log_line("pairs: " + std::to_string(prepared.data.records.size()) + " records, " +
             format_double(100.0 * prepared.data.positive_fraction(), 1) + "% positive, " +
             std::to_string(prepared.data.duplicate_op_posts) + " duplicate op_posts, " +
             std::to_string(prepared.data.over_length_posts) + " posts over " +
             std::to_string(kExpectedMaxPostChars) + " chars");
    return prepared;
}

struct ModelVectors {
    std::vector<PostVector> post;
    std::vector<PostVector> op;
    std::size_t all_oov_posts = 0;
};

ModelVectors embed_pairs(const EmbeddingTable& table, const TokenizedPairs& prepared) {
    ModelVectors vectors;
    vectors.post.reserve(prepared.post_tokens.size());
    vectors.op.reserve(prepared.op_tokens.size());
    for (std::size_t i = 0; i < prepared.post_tokens.size(); ++i) {
        vectors.post.push_back(embed_post(table, prepared.post_tokens[i]));
        vectors.op.push_back(embed_post(table, prepared.op_tokens[i]));
        vectors.all_oov_posts += static_cast<std::size_t>(vectors.post.back().used_tokens == 0);
        vectors.all_oov_posts += static_cast<std::size_t>(vectors.op.back().used_tokens == 0);
    }
    return vectors;
}

// Assembles the feature matrix for one strategy. For con_pca the projection
// is fitted on the full matrix up front unless per-fold refitting was
// requested, in which case the factory carries the fit into each fold.
void build_features(const ModelVectors& vectors, Strategy strategy, bool swap_concat,
                    bool pca_per_fold, std::vector<Vector>& features,
                    FoldTransformFactory& factory, std::size_t& feature_dim) {
    const std::size_t n = vectors.post.size();
    const std::size_t d = vectors.post.empty() ? 0 : vectors.post.front().vec.size();
    features.clear();
    features.reserve(n);
    factory = nullptr;

    auto compose_at = [&](std::size_t i, Strategy s, const PcaModel* pca) {
        const PostVector& first = swap_concat ? vectors.op[i] : vectors.post[i];
        const PostVector& second = swap_concat ? vectors.post[i] : vectors.op[i];
        return compose_pair(first, second, s, pca);
    };

    switch (strategy) {
        case Strategy::Sum:
            for (std::size_t i = 0; i < n; ++i) features.push_back(compose_at(i, strategy, nullptr));
            feature_dim = d;
            return;
        case Strategy::Con:
            for (std::size_t i = 0; i < n; ++i) features.push_back(compose_at(i, strategy, nullptr));
            feature_dim = 2 * d;
            return;
        case Strategy::ConPca: {
            feature_dim = d;
            if (pca_per_fold) {
                for (std::size_t i = 0; i < n; ++i) {
                    features.push_back(compose_at(i, Strategy::Con, nullptr));
                }
                factory = [d](const std::vector<Vector>& train_rows) -> FoldTransform {
                    auto pca = std::make_shared<PcaModel>(PcaModel::fit(train_rows, d));
                    return [pca](const Vector& v) { return pca->project(v); };
                };
                return;
            }
            std::vector<Vector> concat;
            concat.reserve(n);
            for (std::size_t i = 0; i < n; ++i) concat.push_back(compose_at(i, Strategy::Con, nullptr));
            PcaModel pca = PcaModel::fit(concat, d);
            for (const auto& row : concat) features.push_back(pca.project(row));
            return;
        }
    }
}

struct RelCell {
    std::string model;
    Strategy strategy = Strategy::Sum;
    const ModelVectors* vectors = nullptr;
    const std::vector<int>* labels = nullptr;
    const RunConfig* config = nullptr;
    bool want_curve = false;

    std::size_t feature_dim = 0;
    CvResult cv;
    LearningCurve curve;
    std::string error;

    void run() {
        std::vector<Vector> features;
        FoldTransformFactory factory;
        build_features(*vectors, strategy, config->swap_concat_order, config->pca_per_fold,
                       features, factory, feature_dim);
        if (want_curve) {
            curve = learning_curve(features, *labels, config->fractions, config->folds,
                                   config->neighbors_k, config->seed, factory);
        } else {
            cv = cross_validate(features, *labels, config->folds, config->neighbors_k,
                                config->seed, factory);
        }
    }
};

std::vector<RelCell> make_rel_cells(const std::string& model, const ModelVectors& vectors,
                                    const TokenizedPairs& prepared, const RunConfig& config,
                                    bool want_curve) {
    std::vector<RelCell> cells;
    for (Strategy strategy : config.strategies) {
        RelCell cell;
        cell.model = model;
        cell.strategy = strategy;
        cell.vectors = &vectors;
        cell.labels = &prepared.labels;
        cell.config = &config;
        cell.want_curve = want_curve;
        cells.push_back(std::move(cell));
    }
    return cells;
}

int finish_grid(std::size_t failures, std::size_t cells) {
    if (failures > 0) {
        log_line(std::to_string(failures) + " of " + std::to_string(cells) + " cells failed");
        return kExitCellError;
    }
    return kExitOk;
}

}  // namespace

int cmd_eval_sim(const RunConfig& config) {
    try {
        fs::path out_dir = ensure_out_dir(config);
        if (config.embeddings.empty()) throw ConfigFailure{"no --embeddings given"};
        if (config.gold.empty()) throw ConfigFailure{"no --gold given"};
        for (const auto& [name, path] : config.embeddings) require_file(path, "embedding");

        std::vector<WordJudgmentSet> gold_sets;
        for (const auto& spec : config.gold) {
            auto in = open_input(spec.path, "gold dataset");
            try {
                gold_sets.push_back(load_judgments(in, spec.kind, spec.name));
            } catch (const Error& e) {
                throw ConfigFailure{"gold dataset " + spec.path + ": " + e.what()};
            }
        }

        std::vector<SimEvalReport> reports;
        std::size_t failures = 0, cell_count = 0;
        for (const auto& [name, path] : config.embeddings) {
            EmbeddingTable table = load_table(name, path);
            if (table.duplicates_discarded() > 0) {
                log_line("model " + name + ": discarded " +
                         std::to_string(table.duplicates_discarded()) + " duplicate tokens");
            }
            std::vector<SimCell> cells(gold_sets.size());
            for (std::size_t i = 0; i < gold_sets.size(); ++i) {
                cells[i].table = &table;
                cells[i].gold = &gold_sets[i];
            }
            failures += run_cells(cells);
            cell_count += cells.size();
            for (const auto& cell : cells) {
                if (!cell.error.empty()) {
                    log_line("cell " + name + " x " + cell.gold->name + ": " + cell.error);
                    if (!config.keep_going) return kExitCellError;
                } else {
                    reports.push_back(cell.report);
                }
            }
        }

        std::ostringstream csv;
        write_sim_reports_csv(reports, csv);
        write_file_atomic(out_dir / "similarity.csv", csv.str());
        write_file_atomic(out_dir / "similarity.txt", format_sim_reports(reports));
        std::cout << format_sim_reports(reports);
        return finish_grid(failures, cell_count);
    } catch (const ConfigFailure& f) {
        log_line(f.message);
        return kExitConfigError;
    } catch (const std::exception& e) {
        log_line(e.what());
        return kExitCellError;
    }
}

namespace {

int run_relatedness(const RunConfig& config, bool want_curve) {
    try {
        fs::path out_dir = ensure_out_dir(config);
        if (config.embeddings.empty()) throw ConfigFailure{"no --embeddings given"};
        if (config.strategies.empty()) throw ConfigFailure{"no strategy selected"};
        for (const auto& [name, path] : config.embeddings) require_file(path, "embedding");
        TokenizedPairs prepared = prepare_pairs(config);

        std::vector<std::vector<std::string>> summary_rows;
        std::size_t failures = 0, cell_count = 0;
        for (const auto& [name, path] : config.embeddings) {
            EmbeddingTable table = load_table(name, path);
            ModelVectors vectors = embed_pairs(table, prepared);
            log_line("model " + name + ": " + std::to_string(vectors.all_oov_posts) +
                     " of " + std::to_string(2 * prepared.labels.size()) +
                     " posts have no in-vocabulary token");

            std::vector<RelCell> cells = make_rel_cells(name, vectors, prepared, config, want_curve);
            failures += run_cells(cells);
            cell_count += cells.size();
            for (const auto& cell : cells) {
                std::string cell_name = cell.model + "_" + to_string(cell.strategy);
                if (!cell.error.empty()) {
                    log_line("cell " + cell_name + ": " + cell.error);
                    if (!config.keep_going) return kExitCellError;
                    continue;
                }
                if (want_curve) {
                    std::ostringstream curve_csv;
                    write_curve_csv(cell.curve, curve_csv);
                    write_file_atomic(out_dir / ("curve_" + cell_name + ".csv"), curve_csv.str());
                } else {
                    std::ostringstream fold_csv;
                    write_cv_csv(cell.cv, fold_csv);
                    write_file_atomic(out_dir / ("folds_" + cell_name + ".csv"), fold_csv.str());
                    summary_rows.push_back({cell.model, to_string(cell.strategy),
                                            std::to_string(cell.feature_dim),
                                            format_double(cell.cv.mean_f1),
                                            format_double(cell.cv.std_f1)});
                }
            }
        }

        if (!want_curve) {
            const std::vector<std::string> header{"model", "strategy", "feature_dim", "mean_f1",
                                                  "std_f1"};
            std::ostringstream csv;
            csv << "model,strategy,feature_dim,mean_f1,std_f1\n";
            for (const auto& row : summary_rows) {
                for (std::size_t c = 0; c < row.size(); ++c) {
                    if (c > 0) csv << ',';
                    csv << row[c];
                }
                csv << '\n';
            }
            write_file_atomic(out_dir / "relatedness.csv", csv.str());
            std::string text = format_table(header, summary_rows);
            write_file_atomic(out_dir / "relatedness.txt", text);
            std::cout << text;
        }
        return finish_grid(failures, cell_count);
    } catch (const ConfigFailure& f) {
        log_line(f.message);
        return kExitConfigError;
    } catch (const std::exception& e) {
        log_line(e.what());
        return kExitCellError;
    }
}

}  // namespace

int cmd_eval_rel(const RunConfig& config) { return run_relatedness(config, false); }

int cmd_curve(const RunConfig& config) { return run_relatedness(config, true); }

int cmd_dataset_agg(const RunConfig& config) {
    try {
        fs::path out_dir = ensure_out_dir(config);
        std::vector<AnnotationRecord> annotations;
        {
            auto in = open_input(config.annotations_path, "annotation");
            try {
                annotations = load_annotations(in);
            } catch (const Error& e) {
                throw ConfigFailure{"annotation file " + config.annotations_path + ": " + e.what()};
            }
        }
        auto labels = majority_labels(annotations);
        AgreementStats stats = agreement_stats(annotations);

        std::ostringstream pairs_csv;
        std::string pairs_name;
        if (!config.texts_path.empty()) {
            std::unordered_map<std::string, std::pair<std::string, std::string>> texts;
            auto in = open_input(config.texts_path, "pair text");
            CsvReader reader(in);
            auto header = reader.next_record();
            if (!header || *header != std::vector<std::string>{"pair_id", "post", "op_post"}) {
                throw ConfigFailure{"pair text file " + config.texts_path +
                                    ": expected header 'pair_id,post,op_post'"};
            }
            while (auto record = reader.next_record()) {
                if (record->size() == 1 && (*record)[0].empty()) continue;
                if (record->size() != 3) {
                    throw ConfigFailure{"pair text file " + config.texts_path + ": bad row at line " +
                                        std::to_string(reader.record_line())};
                }
                texts[(*record)[0]] = {(*record)[1], (*record)[2]};
            }
            std::vector<PostPairRecord> records;
            for (const auto& [pair_id, label] : labels) {
                auto it = texts.find(pair_id);
                if (it == texts.end()) {
                    throw ConfigFailure{"pair text file " + config.texts_path +
                                        " has no texts for pair '" + pair_id + "'"};
                }
                records.push_back({it->second.first, it->second.second, label});
            }
            save_pairs(records, pairs_csv);
            pairs_name = "pairs.csv";
        } else {
            pairs_csv << "pair_id,is_related\n";
            for (const auto& [pair_id, label] : labels) {
                const std::vector<std::string> fields{pair_id, std::to_string(label)};
                write_csv_record(pairs_csv, fields);
            }
            pairs_name = "labels.csv";
        }
        write_file_atomic(out_dir / pairs_name, pairs_csv.str());

        std::size_t positives = 0;
        for (const auto& [pair_id, label] : labels) positives += static_cast<std::size_t>(label == 1);
        std::ostringstream report;
        report << "pairs:                   " << stats.pair_count << '\n'
               << "annotators:              " << stats.annotator_count << '\n'
               << "positive majority labels: " << positives << " ("
               << format_double(100.0 * static_cast<double>(positives) /
                                    static_cast<double>(labels.size()), 1)
               << "%)\n"
               << "unanimous pairs:         " << format_double(stats.unanimity_fraction, 4) << '\n'
               << "mean pairwise agreement: " << format_double(stats.mean_pairwise_agreement, 4)
               << '\n';
        write_file_atomic(out_dir / "agreement.txt", report.str());
        std::cout << report.str();
        return kExitOk;
    } catch (const ConfigFailure& f) {
        log_line(f.message);
        return kExitConfigError;
    } catch (const std::exception& e) {
        log_line(e.what());
        return kExitCellError;
    }
}

}  // namespace embrel
