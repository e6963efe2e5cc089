#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "embrel/embeddings.hpp"
#include "embrel/vector_math.hpp"

namespace embrel {

// Mean-pooled representation of one post.
struct PostVector {
    Vector vec;                 // arithmetic mean of used_tokens embeddings
    std::size_t used_tokens = 0;
    std::size_t oov_tokens = 0;
};

// How a (post, op_post) pair becomes one feature vector.
enum class Strategy {
    Sum,     // component-wise mean of the two post vectors, dim d
    Con,     // post components then op_post components, dim 2d
    ConPca,  // Con projected down to dim d by a fitted PCA model
};

const char* to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(std::string_view text);

// Mean of the embeddings of the in-vocabulary tokens, each occurrence
// counted. An all-OOV (or empty) post yields the zero vector with
// used_tokens = 0. The summation order is fixed by sorting the tokens, so
// any permutation of the input produces a bit-identical mean.
PostVector embed_post(const EmbeddingTable& table, std::span<const std::string> tokens);

// Linear projection learned from mean-centered data.
class PcaModel {
public:
    // Eigendecomposition of the sample covariance (n-1 normalization) of the
    // mean-centered rows; keeps the top `output_dim` eigenvectors by
    // descending eigenvalue. Tiny negative eigenvalues are clamped to zero.
    //
    // The basis is made deterministic: each component's sign is fixed so its
    // largest-magnitude coordinate is positive (first such coordinate when
    // tied); groups of equal eigenvalues are sign-fixed on the first nonzero
    // coordinate and ordered lexicographically. Rank deficiency is not an
    // error: trailing components simply carry zero eigenvalues.
    //
    // Throws TooFewRows (< 2 rows), DimMismatch (ragged rows or
    // output_dim > dim).
    static PcaModel fit(const std::vector<Vector>& rows, std::size_t output_dim);

    // components * (x - mean). Throws DimMismatch.
    Vector project(std::span<const double> x) const;

    // components^T * projected: reconstructs the centered input (exact at
    // full rank). Throws DimMismatch.
    Vector back_project(std::span<const double> projected) const;

    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const { return components_.size(); }
    const Vector& mean() const { return mean_; }
    const std::vector<Vector>& components() const { return components_; }
    const Vector& eigenvalues() const { return eigenvalues_; }

    // Text format: "PCA <input_dim> <output_dim>", a mean line, then one
    // "<eigenvalue> <c1> ... <c_input_dim>" line per component. Full double
    // precision; save/load round-trips exactly.
    void save(std::ostream& out) const;
    static PcaModel load(std::istream& in);

private:
    PcaModel() = default;

    std::size_t input_dim_ = 0;
    Vector mean_;
    std::vector<Vector> components_;  // output_dim rows of length input_dim
    Vector eigenvalues_;              // descending, non-negative
};

// Builds the pair feature vector. p is the single post, q the opening post;
// the concatenation order is fixed as (p, q). `pca` is consulted only for
// ConPca and must accept vectors of dimension 2d.
// Throws DimMismatch, MissingPcaModel.
Vector compose_pair(const PostVector& p, const PostVector& q, Strategy strategy,
                    const PcaModel* pca = nullptr);

}  // namespace embrel
