#ifndef HDLSS_MIXTURE_HPP
#define HDLSS_MIXTURE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdlss/linalg.hpp"

namespace hdlss {

/// k Gaussian populations N_d(mu_i, Sigma_i) mixed with proportions eps_i.
///
/// Construction checks k >= 2, matching dimensions, eps_i in (0,1) and
/// sum eps_i = 1 within 1e-12. Covariances are assumed PSD; that is only
/// checked when they are factored.
class MixtureModel {
public:
    MixtureModel(std::vector<Vector> means, std::vector<SymMatrix> covariances, Vector mix);

    std::size_t classes() const noexcept { return means_.size(); }
    std::size_t dim() const noexcept { return means_.front().size(); }

    const Vector& mean(std::size_t i) const { return means_.at(i); }
    const SymMatrix& covariance(std::size_t i) const { return covariances_.at(i); }
    const Vector& mix() const noexcept { return mix_; }

    /// mu = sum eps_i mu_i
    Vector overall_mean() const;
    /// mu_i - mu_j
    Vector mean_gap(std::size_t i, std::size_t j) const;

    MixtureModel with_mix(Vector mix) const;
    MixtureModel with_covariance(std::size_t i, SymMatrix cov) const;

private:
    std::vector<Vector> means_;
    std::vector<SymMatrix> covariances_;
    Vector mix_;
};

/// Validates a proportion vector: entries in (0,1), sum 1 within 1e-12.
void check_proportions(std::span<const double> p, std::size_t expected_size);

/// Toeplitz correlation matrix with entry (i,j) = rho^{|i-j|^exponent}.
SymMatrix make_gamma_cov(std::size_t d, double rho = 0.3, double exponent = 1.0 / 3.0);

/// B * base * B with B = diag((-1)^i (0.5 + i/(d+1))^{1/2}), i = 1..d.
SymMatrix make_b_scaled_cov(std::size_t d, const SymMatrix& base);

/// Smallest integer m with m^4 >= d^3, i.e. ceil(d^{3/4}) without rounding error.
std::size_t ceil_pow_three_quarters(std::size_t d);
/// Smallest integer m with m^2 >= d.
std::size_t ceil_sqrt(std::size_t d);

enum class ToyKind { two_class, three_class, four_class };

struct ToySpec {
    ToyKind kind = ToyKind::two_class;
    std::size_t dim = 0;
    /// Defaults: (1/2,1/2), (1/2,1/4,1/4), (1/4,1/4,1/4,1/4).
    std::optional<Vector> mix;
};

/// The Gaussian toy constructions: Gamma = make_gamma_cov(d) and its B-scaled
/// twin as covariances, indicator-style means. Requires d >= 4.
///
/// two_class:   mu = (0, 1_d), Sigma = (Gamma, B Gamma B)
/// three_class: mu_1 = 1_d, mu_2 = first ceil(d^{3/4}) ones, mu_3 = first
///              ceil(d^{1/2}) ones; Sigma_3 = 0.8 Gamma
/// four_class:  as three_class plus mu_4 = 0, Sigma_4 = 1.2 B Gamma B
MixtureModel build_toy_model(const ToySpec& spec);

ToyKind parse_toy_kind(const std::string& name);
std::string to_string(ToyKind kind);
std::size_t toy_class_count(ToyKind kind);

/// Squared mean distances Delta_{i,j} = ||mu_i - mu_j||^2.
struct DeltaTable {
    Matrix pairwise;  ///< k x k, symmetric, zero diagonal
    double min = 0.0;

    double operator()(std::size_t i, std::size_t j) const { return pairwise(i, j); }
    /// Delta_{i,i+1} for i = 0..k-2.
    Vector consecutive() const;
};

DeltaTable delta_matrix(const MixtureModel& m);

/// Sigma = sum_{i<j} eps_i eps_j mu_ij mu_ij^T + sum_i eps_i Sigma_i.
SymMatrix mixture_covariance(const MixtureModel& m, const DenseLimits& limits = {});
/// tr(Sigma) without forming Sigma: sum eps_i tr(Sigma_i) + sum_{i<j} eps_i eps_j Delta_{i,j}.
double mixture_trace(const MixtureModel& m);

/// Left-hand quantities of the asymptotic regularity conditions at the
/// model's dimension. Ranges that are empty for the given k report 0.
struct ConditionReport {
    double ratio1 = 0.0;        ///< max_i lambda_{i1} / Delta_min
    double ratio2 = 0.0;        ///< max_i tr(Sigma_i^2) / Delta_min^2
    double ratio3 = 0.0;        ///< max_i var(||x - mu_i||^2) / Delta_min^2, Gaussian closed form
    double ratio4 = 0.0;        ///< max_{i<j} |tr Sigma_i - tr Sigma_j| / Delta_min
    double ratio5_cos = 0.0;    ///< max_{i<j} |cos angle(mu_{i,i+1}, mu_{j,j+1})|
    double ratio5_delta = 0.0;  ///< max_{i<j} Delta_{j,j+1} / Delta_{i,i+1}
    double ratio6 = 0.0;        ///< max_{i<=k-2, j} mu_{i,i+1}^T Sigma_j mu_{i,i+1} / Delta_min^2
    double ratio21 = 0.0;       ///< max_i var(||x - mu_i||^2) / tr(Sigma_i)^2, Gaussian closed form
};

ConditionReport check_conditions(const MixtureModel& m, const DenseLimits& limits = {});

/// Limiting normalized PC scores. vertices(i, g) is the limit of the
/// (i+1)-th score for a sample of class g.
struct ScoreLimits {
    Matrix vertices;  ///< (k-1) x k
    Vector proportions;
};

ScoreLimits score_limits(std::span<const double> p);

/// lambda_i ~ p_i (1 - p_(i)) / (1 - p_(i-1)) * Delta_{i,i+1}, p_(i) cumulative.
Vector lambda_limits(std::span<const double> p, std::span<const double> consecutive_deltas);

/// The (k-1) x n matrix of unit vectors u_i built from class membership alone,
/// using empirical fractions eta_i = n_i / n. Every class must be non-empty.
Matrix u_vectors(std::span<const std::size_t> labels, std::size_t classes);

struct AppendixOracle {
    Matrix u;                   ///< (k-1) x n
    Vector eta;                 ///< n_i / n
    std::vector<Vector> nu;     ///< nu_i = sum_m eta_m (mu_i - mu_m), length d each
    Matrix v;                   ///< d x n, column j = nu of its class
    Vector tilde_values;        ///< top k-1 eigenvalues of V^T V / n
    std::vector<Vector> tilde_vectors;  ///< oriented so tilde_u_i . u_i >= 0
};

AppendixOracle appendix_oracle(const MixtureModel& m, std::span<const std::size_t> labels);

}  // namespace hdlss

#endif  // HDLSS_MIXTURE_HPP
