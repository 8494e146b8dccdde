#include "hdlss/sampler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hdlss/errors.hpp"

namespace hdlss {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_key(std::uint64_t master, std::uint64_t replicate, std::uint64_t column) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ replicate);
    return splitmix64(h ^ column);
}

double RandomStream::uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

MixtureSampler::MixtureSampler(MixtureModel model, const DenseLimits& limits,
                               const JitterPolicy& jitter)
    : model_(std::move(model)) {
    const std::size_t d = model_.dim();
    if (d > limits.cholesky_max)
        throw ResourceError("sampler: d = " + std::to_string(d) + " exceeds the Cholesky cap " +
                            std::to_string(limits.cholesky_max));
    factors_.reserve(model_.classes());
    for (std::size_t i = 0; i < model_.classes(); ++i) {
        // Reuse the factor of an identical covariance.
        bool reused = false;
        for (std::size_t j = 0; j < i && !reused; ++j) {
            if (model_.covariance(j).dense().data() == model_.covariance(i).dense().data()) {
                factors_.push_back(factors_[j]);
                reused = true;
            }
        }
        if (!reused) factors_.push_back(cholesky(model_.covariance(i), jitter));
    }
}

DataMatrix MixtureSampler::sample_labels(std::vector<std::size_t> labels,
                                         const SeedSpec& seed) const {
    const std::size_t d = model_.dim();
    const std::size_t n = labels.size();
    std::vector<double> values(d * n);
    Vector g(d);
    for (std::size_t j = 0; j < n; ++j) {
        RandomStream stream(seed, j);
        for (double& x : g) x = stream.normal();
        const Matrix& l = factors_[labels[j]].lower;
        const Vector& mu = model_.mean(labels[j]);
        double* col = values.data() + j * d;
        for (std::size_t r = 0; r < d; ++r) {
            auto lr = l.row(r).first(r + 1);
            col[r] = mu[r] + dot(lr, std::span<const double>(g).first(r + 1));
        }
    }
    return DataMatrix(d, n, std::move(values), std::move(labels), model_.classes());
}

DataMatrix MixtureSampler::sample_fixed_counts(std::span<const std::size_t> counts,
                                               const SeedSpec& seed) const {
    if (counts.size() != model_.classes())
        throw InputError("sample_fixed_counts: expected " + std::to_string(model_.classes()) +
                         " class counts, got " + std::to_string(counts.size()));
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < counts.size(); ++i) labels.insert(labels.end(), counts[i], i);
    if (labels.size() < 2) throw InputError("sample_fixed_counts: need at least 2 samples in total");
    return sample_labels(std::move(labels), seed);
}

DataMatrix MixtureSampler::sample_mixture_draws(std::size_t n, const SeedSpec& seed) const {
    if (n < 2) throw InputError("sample_mixture_draws: need at least 2 samples");
    RandomStream stream(seed, label_stream);
    const Vector& eps = model_.mix();
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) {
        const double u = stream.uniform();
        double cum = 0.0;
        l = eps.size() - 1;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            cum += eps[i];
            if (u <= cum) {
                l = i;
                break;
            }
        }
    }
    return sample_labels(std::move(labels), seed);
}

DataMatrix sample_fixed_counts(const MixtureModel& m, std::span<const std::size_t> counts,
                               const SeedSpec& seed, const DenseLimits& limits) {
    return MixtureSampler(m, limits).sample_fixed_counts(counts, seed);
}

DataMatrix sample_mixture_draws(const MixtureModel& m, std::size_t n, const SeedSpec& seed,
                                const DenseLimits& limits) {
    return MixtureSampler(m, limits).sample_mixture_draws(n, seed);
}

}  // namespace hdlss
