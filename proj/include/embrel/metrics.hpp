#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace embrel {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
};

// 1-based fractional ranks with ties assigned the average rank.
std::vector<double> fractional_ranks(std::span<const double> values);

// Pearson correlation of the fractional ranks of xs and ys.
// Throws LengthMismatch when sizes differ, DegenerateInput when fewer than
// two observations or either sequence is constant.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

// Non-interpolated average precision: items are ranked by score descending,
// ties broken by original index ascending, and precision is averaged at the
// positions of positive items. Throws LengthMismatch, NoPositives.
double average_precision(std::span<const double> scores, std::span<const int> gold);

// 2tp / (2tp + fp + fn); 0 when the denominator is 0.
double f1_score(const ConfusionCounts& counts);

}  // namespace embrel
