#include "embrel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "embrel/errors.hpp"

namespace embrel {

std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Positions i..j (0-based) hold equal values; average of 1-based ranks.
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw LengthMismatch("spearman: " + std::to_string(xs.size()) + " vs " +
                             std::to_string(ys.size()) + " observations");
    }
    const std::size_t n = xs.size();
    if (n < 2) {
        throw DegenerateInput("spearman: need at least 2 observations");
    }
    std::vector<double> rx = fractional_ranks(xs);
    std::vector<double> ry = fractional_ranks(ys);

    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mx;
        double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateInput("spearman: constant sequence has no rank order");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double average_precision(std::span<const double> scores, std::span<const int> gold) {
    if (scores.size() != gold.size()) {
        throw LengthMismatch("average precision: " + std::to_string(scores.size()) + " scores vs " +
                             std::to_string(gold.size()) + " labels");
    }
    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (int g : gold) positives += static_cast<std::size_t>(g != 0);
    if (positives == 0) {
        throw NoPositives("average precision needs at least one positive item");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;  // score ties keep input order
    });

    double sum = 0.0;
    std::size_t seen_positives = 0;
    for (std::size_t rank = 1; rank <= n; ++rank) {
        if (gold[order[rank - 1]] != 0) {
            ++seen_positives;
            sum += static_cast<double>(seen_positives) / static_cast<double>(rank);
        }
    }
    return sum / static_cast<double>(positives);
}

double f1_score(const ConfusionCounts& counts) {
    double denom = static_cast<double>(2 * counts.tp + counts.fp + counts.fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(counts.tp) / denom;
}

}  // namespace embrel
