#include "embrel/compose.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "embrel/errors.hpp"

namespace embrel {

const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Sum: return "sum";
        case Strategy::Con: return "con";
        case Strategy::ConPca: return "con_pca";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view text) {
    if (text == "sum") return Strategy::Sum;
    if (text == "con") return Strategy::Con;
    if (text == "con_pca" || text == "con+pca") return Strategy::ConPca;
    return std::nullopt;
}

PostVector embed_post(const EmbeddingTable& table, std::span<const std::string> tokens) {
    PostVector post;
    post.vec.assign(table.dim(), 0.0);

    // Accumulate in sorted token order: floating-point addition is not
    // associative, and the mean must not depend on token order.
    std::vector<const std::string*> sorted;
    sorted.reserve(tokens.size());
    for (const auto& token : tokens) sorted.push_back(&token);
    std::sort(sorted.begin(), sorted.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });

    for (const std::string* token : sorted) {
        const Vector* vec = table.lookup(*token);
        if (vec == nullptr) {
            ++post.oov_tokens;
            continue;
        }
        for (std::size_t i = 0; i < post.vec.size(); ++i) post.vec[i] += (*vec)[i];
        ++post.used_tokens;
    }
    if (post.used_tokens > 0) {
        double inv = 1.0 / static_cast<double>(post.used_tokens);
        for (double& c : post.vec) c *= inv;
    }
    return post;
}

namespace {

// Flips v in place so that its largest-magnitude coordinate (first one on a
// magnitude tie) is positive.
void fix_sign_by_largest(Vector& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    if (v[best] < 0.0) {
        for (double& c : v) c = -c;
    }
}

// Flips v so that its first coordinate with |c| > 1e-12 is positive.
void fix_sign_by_first_nonzero(Vector& v) {
    for (double c : v) {
        if (std::abs(c) > 1e-12) {
            if (c < 0.0) {
                for (double& x : v) x = -x;
            }
            return;
        }
    }
}

}  // namespace

PcaModel PcaModel::fit(const std::vector<Vector>& rows, std::size_t output_dim) {
    if (rows.size() < 2) {
        throw TooFewRows("PCA needs at least 2 rows, got " + std::to_string(rows.size()));
    }
    const std::size_t n = rows.size();
    const std::size_t dim = rows[0].size();
    for (const auto& row : rows) {
        if (row.size() != dim) {
            throw DimMismatch("PCA rows of dimension " + std::to_string(row.size()) + " and " +
                              std::to_string(dim));
        }
    }
    if (output_dim < 1 || output_dim > dim) {
        throw DimMismatch("PCA output_dim " + std::to_string(output_dim) +
                          " outside [1, " + std::to_string(dim) + "]");
    }

    Eigen::MatrixXd data(n, dim);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < dim; ++c) data(r, c) = rows[r][c];
    }
    Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;
    Eigen::MatrixXd covariance =
        (data.transpose() * data) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    if (solver.info() != Eigen::Success) {
        throw Error("PCA eigendecomposition failed to converge");
    }

    // Solver returns ascending eigenvalues; flip to descending and clamp the
    // negative dust a zero eigenvalue can come out as.
    std::vector<std::pair<double, Vector>> eigen_pairs(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t src = dim - 1 - i;
        double value = std::max(0.0, solver.eigenvalues()(static_cast<Eigen::Index>(src)));
        Vector component(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            component[c] = solver.eigenvectors()(static_cast<Eigen::Index>(c),
                                                 static_cast<Eigen::Index>(src));
        }
        eigen_pairs[i] = {value, std::move(component)};
    }

    // Deterministic basis: a lone eigenvalue gets the largest-coordinate sign
    // rule; a group of equal eigenvalues gets the first-nonzero sign rule and
    // lexicographic ordering.
    double lambda_max = eigen_pairs.empty() ? 0.0 : eigen_pairs.front().first;
    double group_tol = 1e-9 * std::max(1.0, lambda_max);
    std::size_t i = 0;
    while (i < eigen_pairs.size()) {
        std::size_t j = i;
        while (j + 1 < eigen_pairs.size() &&
               eigen_pairs[i].first - eigen_pairs[j + 1].first <= group_tol) {
            ++j;
        }
        if (j == i) {
            fix_sign_by_largest(eigen_pairs[i].second);
        } else {
            for (std::size_t k = i; k <= j; ++k) {
                fix_sign_by_first_nonzero(eigen_pairs[k].second);
            }
            std::sort(eigen_pairs.begin() + static_cast<std::ptrdiff_t>(i),
                      eigen_pairs.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                      [](const auto& a, const auto& b) { return a.second < b.second; });
        }
        i = j + 1;
    }

    PcaModel model;
    model.input_dim_ = dim;
    model.mean_.assign(mean.data(), mean.data() + dim);
    model.components_.reserve(output_dim);
    model.eigenvalues_.reserve(output_dim);
    for (std::size_t k = 0; k < output_dim; ++k) {
        model.eigenvalues_.push_back(eigen_pairs[k].first);
        model.components_.push_back(std::move(eigen_pairs[k].second));
    }
    return model;
}

Vector PcaModel::project(std::span<const double> x) const {
    if (x.size() != input_dim_) {
        throw DimMismatch("PCA projection of dimension " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(input_dim_));
    }
    Vector out(components_.size(), 0.0);
    for (std::size_t k = 0; k < components_.size(); ++k) {
        double dot = 0.0;
        for (std::size_t c = 0; c < input_dim_; ++c) {
            dot += components_[k][c] * (x[c] - mean_[c]);
        }
        out[k] = dot;
    }
    return out;
}

Vector PcaModel::back_project(std::span<const double> projected) const {
    if (projected.size() != components_.size()) {
        throw DimMismatch("PCA back-projection of dimension " + std::to_string(projected.size()) +
                          ", model has " + std::to_string(components_.size()) + " components");
    }
    Vector out(input_dim_, 0.0);
    for (std::size_t k = 0; k < components_.size(); ++k) {
        for (std::size_t c = 0; c < input_dim_; ++c) {
            out[c] += projected[k] * components_[k][c];
        }
    }
    return out;
}

void PcaModel::save(std::ostream& out) const {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    out << "PCA " << input_dim_ << ' ' << components_.size() << '\n';
    for (std::size_t c = 0; c < input_dim_; ++c) {
        if (c > 0) out << ' ';
        put(mean_[c]);
    }
    out << '\n';
    for (std::size_t k = 0; k < components_.size(); ++k) {
        put(eigenvalues_[k]);
        for (std::size_t c = 0; c < input_dim_; ++c) {
            out << ' ';
            put(components_[k][c]);
        }
        out << '\n';
    }
}

PcaModel PcaModel::load(std::istream& in) {
    std::string magic;
    std::size_t input_dim = 0, output_dim = 0;
    if (!(in >> magic >> input_dim >> output_dim) || magic != "PCA" || input_dim == 0) {
        throw ParseError("bad PCA model header", 1);
    }
    PcaModel model;
    model.input_dim_ = input_dim;
    model.mean_.resize(input_dim);
    for (std::size_t c = 0; c < input_dim; ++c) {
        if (!(in >> model.mean_[c])) throw ParseError("truncated PCA mean line", 2);
    }
    model.components_.assign(output_dim, Vector(input_dim));
    model.eigenvalues_.resize(output_dim);
    for (std::size_t k = 0; k < output_dim; ++k) {
        if (!(in >> model.eigenvalues_[k])) {
            throw ParseError("truncated PCA component line", 3 + k);
        }
        for (std::size_t c = 0; c < input_dim; ++c) {
            if (!(in >> model.components_[k][c])) {
                throw ParseError("truncated PCA component line", 3 + k);
            }
        }
    }
    return model;
}

Vector compose_pair(const PostVector& p, const PostVector& q, Strategy strategy,
                    const PcaModel* pca) {
    if (p.vec.size() != q.vec.size()) {
        throw DimMismatch("pair of post vectors with dimensions " + std::to_string(p.vec.size()) +
                          " and " + std::to_string(q.vec.size()));
    }
    const std::size_t d = p.vec.size();
    switch (strategy) {
        case Strategy::Sum: {
            Vector out(d);
            for (std::size_t i = 0; i < d; ++i) out[i] = (p.vec[i] + q.vec[i]) / 2.0;
            return out;
        }
        case Strategy::Con: {
            Vector out;
            out.reserve(2 * d);
            out.insert(out.end(), p.vec.begin(), p.vec.end());
            out.insert(out.end(), q.vec.begin(), q.vec.end());
            return out;
        }
        case Strategy::ConPca: {
            if (pca == nullptr) {
                throw MissingPcaModel("con_pca composition requires a fitted PCA model");
            }
            Vector concat;
            concat.reserve(2 * d);
            concat.insert(concat.end(), p.vec.begin(), p.vec.end());
            concat.insert(concat.end(), q.vec.begin(), q.vec.end());
            return pca->project(concat);
        }
    }
    throw Error("unknown composition strategy");
}

}  // namespace embrel
