#ifndef HDLSS_CLUSTERING_HPP
#define HDLSS_CLUSTERING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdlss/data_matrix.hpp"
#include "hdlss/linalg.hpp"
#include "hdlss/pcscores.hpp"

namespace hdlss {

enum class ClusterMethod { sign_rule, kmeans };

ClusterMethod parse_cluster_method(const std::string& name);
std::string to_string(ClusterMethod method);

/// Labels are 0-based class indices. `permutation[p]` maps predicted class p
/// to the truth class it was matched with when accuracy is present.
struct ClusterResult {
    std::vector<std::size_t> labels;
    ClusterMethod method = ClusterMethod::sign_rule;
    std::size_t feature_dim = 0;
    std::optional<Matrix> centers;  ///< k x feature_dim, k-means only
    std::optional<double> accuracy;
    std::vector<std::size_t> permutation;
    double objective = 0.0;          ///< within-cluster sum of squares, k-means only
    Vector objective_history;        ///< objective after each Lloyd step of the winning restart
};

/// Sequential sign rule on a (rows >= k-1) x n score matrix: the first row
/// with a strictly positive score names the class; otherwise class k-1.
ClusterResult sign_rule(const Matrix& scores, std::size_t k);

struct KMeansOptions {
    std::uint64_t seed = 0;
    int restarts = 10;
    int max_iterations = 100;
    double tolerance = 1e-10;  ///< relative objective change
};

/// Lloyd's algorithm from k-means++ seeds, best of `options.restarts` by
/// within-cluster sum of squares. `points` is n x dim. A cluster that
/// empties is re-seeded at the point farthest from its current center.
ClusterResult kmeans(const Matrix& points, std::size_t k, const KMeansOptions& options = {});

/// Within-cluster sum of squares of a labeling (empty clusters allowed).
double within_cluster_ss(const Matrix& points, std::span<const std::size_t> labels, std::size_t k);

struct LabelMatch {
    std::vector<std::size_t> permutation;
    double accuracy = 0.0;
};

/// Best agreement over all k! relabelings of `pred` (k <= 8). Ties resolve
/// to the lexicographically first permutation.
LabelMatch match_accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth,
                          std::size_t k);

enum class SignReference { largest_entry, labels };

SignReference parse_sign_reference(const std::string& name);
std::string to_string(SignReference ref);

struct PipelineConfig {
    /// Unset: sign rule when scores are oriented by labels, k-means otherwise.
    std::optional<ClusterMethod> method;
    std::size_t feature_dim = 3;
    SignReference sign_reference = SignReference::largest_entry;
    KMeansOptions kmeans;
};

struct PipelineResult {
    DualPca pca;
    ClusterResult clusters;
    std::vector<std::string> warnings;
};

/// PCA on the dual covariance, map samples to the leading score space, then
/// cluster by the sign rule or k-means. Accuracy is filled when x is labeled.
PipelineResult pipeline(const DataMatrix& x, std::size_t k, const PipelineConfig& config = {});

}  // namespace hdlss

#endif  // HDLSS_CLUSTERING_HPP
