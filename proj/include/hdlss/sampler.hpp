#ifndef HDLSS_SAMPLER_HPP
#define HDLSS_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "hdlss/data_matrix.hpp"
#include "hdlss/linalg.hpp"
#include "hdlss/mixture.hpp"

namespace hdlss {

/// Master seed plus the replicate index; column indices are supplied by the
/// sampler so every (replicate, column) pair owns an independent stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t replicate = 0;
};

/// Column index reserved for the class-label stream of mixture draws.
inline constexpr std::uint64_t label_stream = std::numeric_limits<std::uint64_t>::max();

/// 64-bit key of the (master, replicate, column) stream. For a fixed master
/// and replicate the map column -> key is a bijection.
std::uint64_t stream_key(std::uint64_t master, std::uint64_t replicate, std::uint64_t column);

/// Uniform and standard normal variates over mt19937_64. Normals use
/// Box-Muller rather than std::normal_distribution, so a stream is
/// reproducible across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) : engine_(key) {}
    RandomStream(const SeedSpec& seed, std::uint64_t column)
        : RandomStream(stream_key(seed.master_seed, seed.replicate, column)) {}

    /// Uniform on (0, 1].
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Holds a model together with the Cholesky factor of each covariance, so
/// replicates reuse the O(d^3) work.
class MixtureSampler {
public:
    explicit MixtureSampler(MixtureModel model, const DenseLimits& limits = {},
                            const JitterPolicy& jitter = {});

    const MixtureModel& model() const noexcept { return model_; }
    const CholeskyFactor& factor(std::size_t cls) const { return factors_.at(cls); }

    /// counts[i] columns of class i, grouped in class order. Column j of the
    /// output is mu_i + L_i g with g drawn from stream (replicate, j).
    DataMatrix sample_fixed_counts(std::span<const std::size_t> counts, const SeedSpec& seed) const;

    /// Labels drawn i.i.d. from the mixing proportions (stream
    /// (replicate, label_stream)), columns in draw order.
    DataMatrix sample_mixture_draws(std::size_t n, const SeedSpec& seed) const;

private:
    DataMatrix sample_labels(std::vector<std::size_t> labels, const SeedSpec& seed) const;

    MixtureModel model_;
    std::vector<CholeskyFactor> factors_;
};

DataMatrix sample_fixed_counts(const MixtureModel& m, std::span<const std::size_t> counts,
                               const SeedSpec& seed, const DenseLimits& limits = {});
DataMatrix sample_mixture_draws(const MixtureModel& m, std::size_t n, const SeedSpec& seed,
                                const DenseLimits& limits = {});

}  // namespace hdlss

#endif  // HDLSS_SAMPLER_HPP
