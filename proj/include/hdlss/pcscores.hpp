#ifndef HDLSS_PCSCORES_HPP
#define HDLSS_PCSCORES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "hdlss/data_matrix.hpp"
#include "hdlss/linalg.hpp"
#include "hdlss/mixture.hpp"

namespace hdlss {

/// PCA through the n x n dual sample covariance S_D.
///
/// `values` holds the n-1 largest eigenvalues of S_D; the first `retained`
/// eigenvectors u_i are kept together with their scores
/// z_ij = u_ij * sqrt(n). A component whose eigenvalue is numerically zero
/// is marked undefined and its score row is NaN; asking for it throws.
struct DualPca {
    SymMatrix s_d;
    double trace = 0.0;
    Vector values;
    std::vector<Vector> vectors;   ///< retained u_i, unit length
    Matrix scores;                 ///< retained x n
    std::vector<bool> defined;     ///< per retained component
    std::vector<int> orientation;  ///< +1 / -1 applied to the raw eigenvector

    std::size_t retained() const noexcept { return vectors.size(); }
    std::size_t samples() const noexcept { return s_d.order(); }
    /// True when S_D vanishes, i.e. all columns coincide.
    bool degenerate() const;
    /// Score row of a defined component (0-based); throws UndefinedComponentError.
    std::span<const double> score_row(std::size_t component) const;
    /// Number of leading components that are defined.
    std::size_t defined_prefix() const;
};

/// Eigendecomposition of centered_gram(x), keeping `retained` components.
/// Each u_i is signed so its largest-magnitude entry (first on ties) is positive.
DualPca dual_pca(const DataMatrix& x, std::size_t retained);

/// Flips u_i (and score row i) so that u_i . reference.row(i) >= 0, for the
/// leading min(retained, reference.rows()) components. With the class
/// vectors from u_vectors() this reproduces the simulation-side convention.
void orient_to_reference(DualPca& p, const Matrix& reference);

/// Sample eigenvector of the d x d covariance recovered from the dual
/// problem: h_i = (X - Xbar) u_i / sqrt((n-1) lambda_i).
Vector reconstruct_h(const DataMatrix& x, const DualPca& p, std::size_t component);

/// Spectrum (lambda_i, h_i) of the mixture covariance with the sign rule
/// h_i . (mu_i - mu_{i+1}) >= 0 for i < k-1 and largest entry positive after.
struct MixtureSpectrum {
    Vector mean;
    Vector values;
    std::vector<Vector> vectors;
};

MixtureSpectrum mixture_spectrum(const MixtureModel& m, const DenseLimits& limits = {});

/// Normalized true PC scores z_ij = h_i^T (x_j - mu) / sqrt(lambda_i).
struct TrueScores {
    Matrix z;  ///< count x n
    Vector lambdas;
};

TrueScores true_scores(const MixtureSpectrum& spectrum, const DataMatrix& x, std::size_t count);
TrueScores true_scores(const MixtureModel& m, const DataMatrix& x, std::size_t count,
                       const DenseLimits& limits = {});

/// Noise-reduced eigenvalues
///   lambda~_i = lambda^_i - (tr S_D - sum_{l<=i} lambda^_l) / (n - 1 - i),
/// floored at 0, for i = 1..n-2.
Vector nr_eigenvalues(std::span<const double> values, double trace, std::size_t n);
Vector nr_eigenvalues(const DualPca& p);
/// Single component, 0-based; throws UndefinedComponentError when n-1-i <= 0.
double nr_eigenvalue(const DualPca& p, std::size_t component);

/// Unbiased estimate of ||mu_1 - mu_2||^2 from two samples:
///   ||xbar_1 - xbar_2||^2 - tr(S_1)/n_1 - tr(S_2)/n_2.
double estimate_delta(const DataMatrix& x1, const DataMatrix& x2);

/// Between-cluster sum of squares fraction of the best split of the values
/// into two contiguous groups (optimal 1-d 2-means). Zero for constant input.
double two_means_separation(std::span<const double> values);

struct IstarResult {
    std::size_t index = 0;  ///< 0-based component with the largest separation
    Vector separation;
};

/// Scores each of the first `max_components` components by
/// two_means_separation and returns the best (smallest index on ties).
IstarResult detect_istar(const DualPca& p, std::size_t max_components);

}  // namespace hdlss

#endif  // HDLSS_PCSCORES_HPP
