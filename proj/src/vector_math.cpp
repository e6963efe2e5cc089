#include "embrel/vector_math.hpp"

#include <algorithm>
#include <cmath>

#include "embrel/errors.hpp"

namespace embrel {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw DimMismatch("cosine: vectors of dimension " + std::to_string(u.size()) +
                          " and " + std::to_string(v.size()));
    }
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) {
        return 0.0;
    }
    double cos = dot / (std::sqrt(uu) * std::sqrt(vv));
    return std::clamp(cos, -1.0, 1.0);
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
    return 1.0 - cosine_similarity(u, v);
}

}  // namespace embrel
