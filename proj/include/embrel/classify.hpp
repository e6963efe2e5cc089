#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "embrel/metrics.hpp"
#include "embrel/vector_math.hpp"

namespace embrel {

// Brute-force cosine-metric KNN. At the dataset sizes this pipeline sees,
// exhaustive search is fast and exactly reproducible; no index structure.
struct KnnModel {
    std::size_t neighbors_k = 3;
    std::vector<Vector> features;
    std::vector<int> labels;  // binary, parallel to features
};

// Majority label of the neighbors_k training points nearest in cosine
// distance. Distance ties resolve toward the lower training index; a split
// vote (possible only for even k) resolves toward label 1.
// Throws DimMismatch, LengthMismatch, TooFewTrainingPoints.
int knn_predict(const KnnModel& model, const Vector& query);

struct CvResult {
    std::vector<double> fold_f1;
    std::vector<ConfusionCounts> fold_confusions;
    double mean_f1 = 0.0;
    double std_f1 = 0.0;  // population standard deviation across folds
};

struct LearningCurvePoint {
    double fraction = 0.0;
    double mean_f1 = 0.0;
    double std_f1 = 0.0;
};

struct LearningCurve {
    std::vector<LearningCurvePoint> points;
};

// Optional per-fold feature preprocessing (PCA refitting without test-fold
// leakage): given the effective training rows, returns the transform applied
// to both training and test vectors of that fold.
using FoldTransform = std::function<Vector(const Vector&)>;
using FoldTransformFactory = std::function<FoldTransform(const std::vector<Vector>&)>;

// Stratified k-fold cross-validation of cosine KNN.
//
// Fold assignment comes from a deterministic hand-rolled shuffle of each
// class seeded with `seed`, dealt round-robin, so identical inputs and seed
// reproduce bit-for-bit on any platform. Each fold's training split is
// presented to the classifier in a seeded permutation order (this order is
// what learning_curve subsamples, and it also fixes neighbor tie-breaking).
//
// Throws TooFewInstances (folds < 2, folds > n, or a training split smaller
// than neighbors_k) and SingleClassData.
CvResult cross_validate(const std::vector<Vector>& features, const std::vector<int>& labels,
                        std::size_t folds, std::size_t neighbors_k, std::uint64_t seed,
                        const FoldTransformFactory& per_fold_transform = nullptr);

// F1 as a function of training volume: for each fraction f, every fold is
// evaluated after training on the first ceil(f * |train|) points of that
// fold's seeded training permutation. The fraction-1.0 point is bit-identical
// to cross_validate with the same arguments.
//
// Fractions must be strictly increasing within (0, 1].
LearningCurve learning_curve(const std::vector<Vector>& features, const std::vector<int>& labels,
                             std::span<const double> fractions, std::size_t folds,
                             std::size_t neighbors_k, std::uint64_t seed,
                             const FoldTransformFactory& per_fold_transform = nullptr);

// `fold,f1` rows, folds numbered from 1.
void write_cv_csv(const CvResult& result, std::ostream& out);

// `fraction,mean_f1,std_f1` rows.
void write_curve_csv(const LearningCurve& curve, std::ostream& out);

}  // namespace embrel
