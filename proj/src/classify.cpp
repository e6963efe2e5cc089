#include "embrel/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "embrel/errors.hpp"
#include "embrel/table.hpp"

namespace embrel {

int knn_predict(const KnnModel& model, const Vector& query) {
    if (model.features.size() != model.labels.size()) {
        throw LengthMismatch("KNN model with " + std::to_string(model.features.size()) +
                             " features and " + std::to_string(model.labels.size()) + " labels");
    }
    if (model.features.size() < model.neighbors_k || model.neighbors_k == 0) {
        throw TooFewTrainingPoints("KNN with k=" + std::to_string(model.neighbors_k) + " needs " +
                                   std::to_string(model.neighbors_k) + " training points, has " +
                                   std::to_string(model.features.size()));
    }
    const std::size_t n = model.features.size();
    std::vector<std::pair<double, std::size_t>> by_distance(n);
    for (std::size_t i = 0; i < n; ++i) {
        by_distance[i] = {cosine_distance(model.features[i], query), i};
    }
    // pair comparison breaks distance ties toward the lower training index
    std::partial_sort(by_distance.begin(),
                      by_distance.begin() + static_cast<std::ptrdiff_t>(model.neighbors_k),
                      by_distance.end());
    std::size_t votes_for_one = 0;
    for (std::size_t i = 0; i < model.neighbors_k; ++i) {
        votes_for_one += static_cast<std::size_t>(model.labels[by_distance[i].second] == 1);
    }
    // an exact split (even k) counts as related
    return 2 * votes_for_one >= model.neighbors_k ? 1 : 0;
}

namespace {

// std::shuffle's draw sequence is implementation-defined; fold assignment
// must reproduce bit-for-bit across standard libraries, so roll the
// Fisher-Yates by hand. Modulo bias is irrelevant at these sizes.
void deterministic_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng() % i;
        std::swap(v[i - 1], v[j]);
    }
}

struct FoldPlan {
    std::vector<std::vector<std::size_t>> test_indices;       // disjoint, covering
    std::vector<std::vector<std::size_t>> train_permutation;  // per fold
};

// Shuffles each class once, deals the combined stream round-robin (so folds
// stay stratified and balanced), then draws every fold's training
// permutation from the same generator.
FoldPlan plan_folds(const std::vector<int>& labels, std::size_t folds, std::uint64_t seed) {
    const std::size_t n = labels.size();
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < n; ++i) {
        (labels[i] == 1 ? positives : negatives).push_back(i);
    }
    if (positives.empty() || negatives.empty()) {
        throw SingleClassData("cross-validation requires both classes in the data");
    }
    if (folds < 2 || folds > n) {
        throw TooFewInstances("cannot split " + std::to_string(n) + " instances into " +
                              std::to_string(folds) + " folds");
    }

    std::mt19937_64 rng(seed);
    deterministic_shuffle(positives, rng);
    deterministic_shuffle(negatives, rng);

    FoldPlan plan;
    plan.test_indices.assign(folds, {});
    std::size_t position = 0;
    for (std::size_t idx : positives) plan.test_indices[position++ % folds].push_back(idx);
    for (std::size_t idx : negatives) plan.test_indices[position++ % folds].push_back(idx);

    std::vector<char> in_test(n, 0);
    plan.train_permutation.assign(folds, {});
    for (std::size_t f = 0; f < folds; ++f) {
        for (std::size_t idx : plan.test_indices[f]) in_test[idx] = 1;
        auto& train = plan.train_permutation[f];
        train.reserve(n - plan.test_indices[f].size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_test[i]) train.push_back(i);
        }
        deterministic_shuffle(train, rng);
        for (std::size_t idx : plan.test_indices[f]) in_test[idx] = 0;
    }
    return plan;
}

ConfusionCounts evaluate_fold(const std::vector<Vector>& features, const std::vector<int>& labels,
                              const std::vector<std::size_t>& train, std::size_t train_count,
                              const std::vector<std::size_t>& test, std::size_t neighbors_k,
                              const FoldTransformFactory& per_fold_transform) {
    if (train_count < neighbors_k) {
        throw TooFewInstances("training split of " + std::to_string(train_count) +
                              " points is smaller than k=" + std::to_string(neighbors_k));
    }
    KnnModel model;
    model.neighbors_k = neighbors_k;
    model.features.reserve(train_count);
    model.labels.reserve(train_count);

    FoldTransform transform;
    if (per_fold_transform) {
        std::vector<Vector> train_rows;
        train_rows.reserve(train_count);
        for (std::size_t i = 0; i < train_count; ++i) train_rows.push_back(features[train[i]]);
        transform = per_fold_transform(train_rows);
    }
    for (std::size_t i = 0; i < train_count; ++i) {
        const Vector& row = features[train[i]];
        model.features.push_back(transform ? transform(row) : row);
        model.labels.push_back(labels[train[i]]);
    }

    ConfusionCounts counts;
    for (std::size_t idx : test) {
        int predicted = knn_predict(model, transform ? transform(features[idx]) : features[idx]);
        if (labels[idx] == 1) {
            predicted == 1 ? ++counts.tp : ++counts.fn;
        } else {
            predicted == 1 ? ++counts.fp : ++counts.tn;
        }
    }
    return counts;
}

void mean_and_std(const std::vector<double>& values, double& mean, double& std_dev) {
    mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    std_dev = std::sqrt(ss / static_cast<double>(values.size()));
}

CvResult evaluate_plan_at(const std::vector<Vector>& features, const std::vector<int>& labels,
                          const FoldPlan& plan, double fraction, std::size_t neighbors_k,
                          const FoldTransformFactory& per_fold_transform) {
    CvResult result;
    for (std::size_t f = 0; f < plan.test_indices.size(); ++f) {
        const auto& train = plan.train_permutation[f];
        auto train_count = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(train.size())));
        ConfusionCounts counts =
            evaluate_fold(features, labels, train, train_count, plan.test_indices[f],
                          neighbors_k, per_fold_transform);
        result.fold_confusions.push_back(counts);
        result.fold_f1.push_back(f1_score(counts));
    }
    mean_and_std(result.fold_f1, result.mean_f1, result.std_f1);
    return result;
}

void validate_inputs(const std::vector<Vector>& features, const std::vector<int>& labels) {
    if (features.size() != labels.size()) {
        throw LengthMismatch("got " + std::to_string(features.size()) + " features and " +
                             std::to_string(labels.size()) + " labels");
    }
    for (const auto& row : features) {
        if (row.size() != features.front().size()) {
            throw DimMismatch("feature rows of dimension " + std::to_string(row.size()) +
                              " and " + std::to_string(features.front().size()));
        }
    }
}

}  // namespace

CvResult cross_validate(const std::vector<Vector>& features, const std::vector<int>& labels,
                        std::size_t folds, std::size_t neighbors_k, std::uint64_t seed,
                        const FoldTransformFactory& per_fold_transform) {
    validate_inputs(features, labels);
    FoldPlan plan = plan_folds(labels, folds, seed);
    return evaluate_plan_at(features, labels, plan, 1.0, neighbors_k, per_fold_transform);
}

LearningCurve learning_curve(const std::vector<Vector>& features, const std::vector<int>& labels,
                             std::span<const double> fractions, std::size_t folds,
                             std::size_t neighbors_k, std::uint64_t seed,
                             const FoldTransformFactory& per_fold_transform) {
    if (fractions.empty()) {
        throw Error("learning curve needs at least one fraction");
    }
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (fractions[i] <= 0.0 || fractions[i] > 1.0 ||
            (i > 0 && fractions[i] <= fractions[i - 1])) {
            throw Error("fractions must be strictly increasing within (0, 1]");
        }
    }
    validate_inputs(features, labels);
    FoldPlan plan = plan_folds(labels, folds, seed);

    LearningCurve curve;
    curve.points.reserve(fractions.size());
    for (double fraction : fractions) {
        CvResult at = evaluate_plan_at(features, labels, plan, fraction, neighbors_k,
                                       per_fold_transform);
        curve.points.push_back({fraction, at.mean_f1, at.std_f1});
    }
    return curve;
}

void write_cv_csv(const CvResult& result, std::ostream& out) {
    out << "fold,f1\n";
    for (std::size_t f = 0; f < result.fold_f1.size(); ++f) {
        out << (f + 1) << ',' << format_double(result.fold_f1[f]) << '\n';
    }
}

void write_curve_csv(const LearningCurve& curve, std::ostream& out) {
    out << "fraction,mean_f1,std_f1\n";
    for (const auto& point : curve.points) {
        out << format_double(point.fraction) << ',' << format_double(point.mean_f1) << ','
            << format_double(point.std_f1) << '\n';
    }
}

}  // namespace embrel
