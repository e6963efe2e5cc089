#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "embrel/compose.hpp"
#include "embrel/errors.hpp"
#include "oracles.hpp"

using embrel::EmbeddingTable;
using embrel::PcaModel;
using embrel::PostVector;
using embrel::Strategy;
using embrel::Vector;
using embrel::compose_pair;
using embrel::embed_post;

namespace {

EmbeddingTable small_table() {
    std::istringstream in("a 2 4\nb 0 0\nc -1 3\n");
    return EmbeddingTable::load(in, "small");
}

std::vector<Vector> random_rows(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                double spread = 1.0) {
    std::vector<Vector> rows(n, Vector(dim));
    for (auto& row : rows) {
        for (auto& x : row) x = spread * oracles::gaussian(rng);
    }
    return rows;
}

// Same sign convention the library promises, reapplied to oracle vectors so
// the two eigendecompositions become comparable.
void fix_sign(Vector& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    if (v[best] < 0.0) {
        for (double& x : v) x = -x;
    }
}

PostVector as_post(Vector v) {
    PostVector post;
    post.used_tokens = 1;
    post.vec = std::move(v);
    return post;
}

}  // namespace

TEST_SUITE("compose") {

TEST_CASE("mean pooling basics") {
    EmbeddingTable table = small_table();
    PostVector single = embed_post(table, std::vector<std::string>{"a"});
    CHECK(single.vec == Vector{2, 4});
    CHECK(single.used_tokens == 1);
    CHECK(single.oov_tokens == 0);

    PostVector with_oov = embed_post(table, std::vector<std::string>{"a", "zzz"});
    CHECK(with_oov.vec == Vector{2, 4});
    CHECK(with_oov.used_tokens == 1);
    CHECK(with_oov.oov_tokens == 1);

    PostVector mean = embed_post(table, std::vector<std::string>{"a", "b"});
    for (std::size_t i = 0; i < 2; ++i) {
        double expected = (table.lookup("a")->at(i) + table.lookup("b")->at(i)) / 2.0;
        CHECK(mean.vec[i] == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(mean.vec == Vector{1, 2});
}

TEST_CASE("all-OOV and empty posts yield the zero vector") {
    EmbeddingTable table = small_table();
    for (auto tokens : {std::vector<std::string>{}, std::vector<std::string>{"xx", "yy"}}) {
        PostVector post = embed_post(table, tokens);
        CHECK(post.vec == Vector{0, 0});
        CHECK(post.used_tokens == 0);
    }
}

TEST_CASE("duplicates count every occurrence") {
    EmbeddingTable table = small_table();
    PostVector post = embed_post(table, std::vector<std::string>{"a", "c", "a"});
    CHECK(post.used_tokens == 3);
    // (2 + 2 - 1) / 3, (4 + 4 + 3) / 3
    CHECK(post.vec[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(post.vec[1] == doctest::Approx(11.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mean pooling is bit-identical under token permutation") {
    EmbeddingTable table = small_table();
    std::vector<std::string> tokens{"a", "b", "c", "a", "zzz", "c"};
    PostVector base = embed_post(table, tokens);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto shuffled = tokens;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[oracles::uniform_index(rng, i)]);
        }
        PostVector other = embed_post(table, shuffled);
        CHECK(other.vec == base.vec);  // exact
        CHECK(other.used_tokens == base.used_tokens);
        CHECK(other.oov_tokens == base.oov_tokens);
    }
}

TEST_CASE("sum and concatenation composition") {
    PostVector p = as_post({1, 1});
    PostVector q = as_post({3, 3});
    CHECK(compose_pair(p, q, Strategy::Sum) == Vector{2, 2});

    PostVector a = as_post({1, 2});
    PostVector b = as_post({3, 4});
    CHECK(compose_pair(a, b, Strategy::Con) == Vector{1, 2, 3, 4});
    CHECK(compose_pair(b, a, Strategy::Con) == Vector{3, 4, 1, 2});  // order matters
}

TEST_CASE("sum is symmetric bit-for-bit") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        Vector u(6), v(6);
        for (std::size_t i = 0; i < 6; ++i) {
            u[i] = oracles::uniform(rng, -5, 5);
            v[i] = oracles::uniform(rng, -5, 5);
        }
        CHECK(compose_pair(as_post(u), as_post(v), Strategy::Sum) ==
              compose_pair(as_post(v), as_post(u), Strategy::Sum));
    }
}

TEST_CASE("composition error paths") {
    PostVector p = as_post({1, 2});
    PostVector q = as_post({1, 2, 3});
    CHECK_THROWS_AS(compose_pair(p, q, Strategy::Sum), embrel::DimMismatch);
    PostVector r = as_post({3, 4});
    CHECK_THROWS_AS(compose_pair(p, r, Strategy::ConPca, nullptr), embrel::MissingPcaModel);
}

TEST_CASE("pca on collinear points finds the line") {
    std::vector<Vector> rows{{0, 0}, {1, 2}, {2, 4}, {-1, -2}};
    PcaModel model = PcaModel::fit(rows, 2);
    double inv_norm = 1.0 / std::sqrt(5.0);
    CHECK(model.components()[0][0] == doctest::Approx(inv_norm).epsilon(1e-12));
    CHECK(model.components()[0][1] == doctest::Approx(2.0 * inv_norm).epsilon(1e-12));
    CHECK(model.eigenvalues()[0] > 0.0);
    CHECK(model.eigenvalues()[1] == doctest::Approx(0.0).epsilon(1e-10));  // rank deficient, no error
}

TEST_CASE("pca on an axis-aligned ellipse matches the closed form") {
    // (+-3, 0), (0, +-1): sample covariance diag(6, 2/3)
    std::vector<Vector> rows{{3, 0}, {-3, 0}, {0, 1}, {0, -1}};
    PcaModel model = PcaModel::fit(rows, 2);
    CHECK(model.eigenvalues()[0] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(model.eigenvalues()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(model.components()[0][0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.components()[0][0] > 0.0);  // sign rule
    CHECK(model.components()[0][1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("con_pca projection matches an independent eigendecomposition") {
    std::mt19937_64 rng(47);
    std::vector<Vector> rows = random_rows(rng, 10, 4);
    PcaModel model = PcaModel::fit(rows, 2);

    auto oracle_pairs = oracles::jacobi_eigen(oracles::covariance(rows));
    Vector mean(4, 0.0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < 4; ++c) mean[c] += row[c] / 10.0;
    }

    PostVector p = as_post({0.3, -0.7});
    PostVector q = as_post({1.1, 0.4});
    Vector projected = compose_pair(p, q, Strategy::ConPca, &model);
    REQUIRE(projected.size() == 2);

    Vector concat{0.3, -0.7, 1.1, 0.4};
    for (std::size_t k = 0; k < 2; ++k) {
        Vector component = oracle_pairs[k].second;
        fix_sign(component);
        double expected = 0.0;
        for (std::size_t c = 0; c < 4; ++c) expected += component[c] * (concat[c] - mean[c]);
        CHECK(projected[k] == doctest::Approx(expected).epsilon(1e-8));
        CHECK(model.eigenvalues()[k] ==
              doctest::Approx(oracle_pairs[k].first).epsilon(1e-8));
    }
}

TEST_CASE("full-rank projection reconstructs centered rows") {
    std::mt19937_64 rng(53);
    std::vector<Vector> rows = random_rows(rng, 12, 5);
    PcaModel model = PcaModel::fit(rows, 5);
    for (const auto& row : rows) {
        Vector rebuilt = model.back_project(model.project(row));
        for (std::size_t c = 0; c < 5; ++c) {
            CHECK(rebuilt[c] == doctest::Approx(row[c] - model.mean()[c]).epsilon(1e-8));
        }
    }
}

TEST_CASE("components are orthonormal and variances match eigenvalues") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 5 + oracles::uniform_index(rng, 40);
        std::size_t dim = 2 + oracles::uniform_index(rng, 8);
        std::vector<Vector> rows = random_rows(rng, n, dim, 2.0);
        PcaModel model = PcaModel::fit(rows, dim);

        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                double dot = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    dot += model.components()[i][c] * model.components()[j][c];
                }
                CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-8);
            }
            if (i > 0) CHECK(model.eigenvalues()[i] <= model.eigenvalues()[i - 1]);
        }

        std::vector<Vector> projected;
        for (const auto& row : rows) projected.push_back(model.project(row));
        for (std::size_t k = 0; k < dim; ++k) {
            double mean = 0.0;
            for (const auto& p : projected) mean += p[k];
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (const auto& p : projected) var += (p[k] - mean) * (p[k] - mean);
            var /= static_cast<double>(n - 1);
            double lambda = model.eigenvalues()[k];
            CHECK(std::abs(var - lambda) <= 1e-6 * std::max(lambda, 1e-12));
        }
    }
}

TEST_CASE("pca dimension bookkeeping across strategies") {
    std::mt19937_64 rng(61);
    std::vector<Vector> rows = random_rows(rng, 20, 8);  // concatenated pairs, 2d = 8
    PcaModel model = PcaModel::fit(rows, 4);
    PostVector p = as_post({1, 2, 3, 4});
    PostVector q = as_post({5, 6, 7, 8});
    CHECK(compose_pair(p, q, Strategy::Sum).size() == 4);
    CHECK(compose_pair(p, q, Strategy::Con).size() == 8);
    CHECK(compose_pair(p, q, Strategy::ConPca, &model).size() == 4);
}

TEST_CASE("pca error paths") {
    CHECK_THROWS_AS(PcaModel::fit({{1, 2}}, 1), embrel::TooFewRows);
    CHECK_THROWS_AS(PcaModel::fit({{1, 2}, {3, 4}}, 3), embrel::DimMismatch);
    CHECK_THROWS_AS(PcaModel::fit({{1, 2}, {3, 4, 5}}, 1), embrel::DimMismatch);
    PostVector p = as_post({1, 2, 3});
    PostVector q = as_post({4, 5, 6});
    PcaModel model = PcaModel::fit({{1.0, 2}, {3, 4}}, 1);  // input_dim 2, not 6
    CHECK_THROWS_AS(compose_pair(p, q, Strategy::ConPca, &model), embrel::DimMismatch);
}

TEST_CASE("rank-deficient fits are allowed") {
    // 3 points in 5-D span at most a 2-D subspace
    std::mt19937_64 rng(67);
    std::vector<Vector> rows = random_rows(rng, 3, 5);
    PcaModel model = PcaModel::fit(rows, 5);
    CHECK(model.eigenvalues()[2] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(model.eigenvalues()[4] == doctest::Approx(0.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 5; ++i) {
        double norm = 0.0;
        for (double c : model.components()[i]) norm += c * c;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("pca model save/load round trip") {
    std::mt19937_64 rng(71);
    std::vector<Vector> rows = random_rows(rng, 15, 6);
    PcaModel model = PcaModel::fit(rows, 3);
    std::ostringstream out;
    model.save(out);
    std::istringstream in(out.str());
    PcaModel reloaded = PcaModel::load(in);
    CHECK(reloaded.input_dim() == model.input_dim());
    CHECK(reloaded.mean() == model.mean());
    CHECK(reloaded.eigenvalues() == model.eigenvalues());
    CHECK(reloaded.components() == model.components());
}

}  // TEST_SUITE
