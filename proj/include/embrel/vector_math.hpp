#pragma once

#include <span>
#include <vector>

namespace embrel {

// All embedding math runs on 64-bit floats regardless of how vectors were
// stored on disk, so metric values reproduce across platforms.
using Vector = std::vector<double>;

// Cosine of the angle between u and v, clamped to [-1, 1].
// If either vector has zero norm the result is 0: mean pooling can produce
// all-zero vectors for fully out-of-vocabulary posts and those must compare
// as neutral rather than fail.
// Throws DimMismatch when the spans differ in length.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// 1 - cosine_similarity, the metric used by the KNN classifier.
double cosine_distance(std::span<const double> u, std::span<const double> v);

}  // namespace embrel
