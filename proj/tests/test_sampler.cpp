#include <cmath>
#include <set>

#include "doctest.h"
#include "hdlss/errors.hpp"
#include "hdlss/sampler.hpp"
#include "support.hpp"

using namespace hdlss;

namespace {

MixtureModel zero_cov_model(std::vector<Vector> means, Vector mix) {
    const std::size_t d = means.front().size();
    std::vector<SymMatrix> covs(means.size(), SymMatrix(d));
    return MixtureModel(std::move(means), std::move(covs), std::move(mix));
}

}  // namespace

TEST_CASE("stream keys are distinct across replicates and columns") {
    std::set<std::uint64_t> keys;
    for (std::uint64_t rep = 0; rep < 100; ++rep)
        for (std::uint64_t col = 0; col < 100; ++col) keys.insert(stream_key(7, rep, col));
    for (std::uint64_t rep = 0; rep < 100; ++rep) keys.insert(stream_key(7, rep, label_stream));
    CHECK(keys.size() == 100 * 101);
    CHECK(stream_key(7, 0, 0) != stream_key(8, 0, 0));
}

TEST_CASE("RandomStream variates") {
    RandomStream s(stream_key(1, 0, 0));
    Vector u, z;
    for (int i = 0; i < 20000; ++i) {
        const double v = s.uniform();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        u.push_back(v);
        z.push_back(s.normal());
    }
    CHECK(std::abs(testing::mean(u) - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / 20000.0));
    CHECK(std::abs(testing::mean(z)) < 3.0 / std::sqrt(20000.0));
    CHECK(std::abs(testing::stddev(z) - 1.0) < 0.03);
}

TEST_CASE("fixed counts: ordering, labels and degenerate covariance") {
    const MixtureModel two = build_toy_model({ToyKind::two_class, 6, std::nullopt});
    const std::vector<std::size_t> counts{1, 2};
    const DataMatrix x = sample_fixed_counts(two, counts, {5, 0});
    CHECK(x.labels() == std::vector<std::size_t>{0, 1, 1});
    CHECK(x.counts() == std::vector<std::size_t>{1, 2});

    const MixtureModel flat = zero_cov_model({{1, 2, 3}, {-1, 0, 4}}, {0.5, 0.5});
    const DataMatrix y = sample_fixed_counts(flat, std::vector<std::size_t>{2, 3}, {9, 4});
    for (std::size_t j = 0; j < y.size(); ++j)
        for (std::size_t r = 0; r < 3; ++r) CHECK(y(r, j) == flat.mean(y.labels()[j])[r]);

    CHECK_THROWS_AS(sample_fixed_counts(flat, std::vector<std::size_t>{1, 0}, {0, 0}), InputError);
    CHECK_THROWS_AS(sample_fixed_counts(flat, std::vector<std::size_t>{1, 1, 1}, {0, 0}),
                    InputError);
}

TEST_CASE("fixed counts: class covariance matches within Monte-Carlo tolerance") {
    const MixtureModel two = build_toy_model({ToyKind::two_class, 5, std::nullopt});
    const DataMatrix x = sample_fixed_counts(two, std::vector<std::size_t>{0, 400}, {3, 0});
    const SymMatrix s = testing::sample_covariance(x);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) CHECK(std::abs(s(a, b) - two.covariance(1)(a, b)) < 0.15);
}

TEST_CASE("fixed counts: class means within 3 standard errors") {
    const MixtureModel three = build_toy_model({ToyKind::three_class, 8, std::nullopt});
    const std::vector<std::size_t> counts{300, 200, 250};
    const DataMatrix x = sample_fixed_counts(three, counts, {11, 2});
    for (std::size_t g = 0; g < 3; ++g) {
        const Vector m = x.class_columns(g).column_mean();
        double max_diag = 0.0;
        for (std::size_t r = 0; r < 8; ++r) max_diag = std::max(max_diag, three.covariance(g)(r, r));
        const double band = 3.0 * std::sqrt(max_diag / static_cast<double>(counts[g]));
        for (std::size_t r = 0; r < 8; ++r) CHECK(std::abs(m[r] - three.mean(g)[r]) < band);
    }
}

TEST_CASE("determinism and replicate independence") {
    const MixtureSampler sampler(build_toy_model({ToyKind::two_class, 30, std::nullopt}));
    const std::vector<std::size_t> counts{3, 4};
    const DataMatrix a = sampler.sample_fixed_counts(counts, {42, 3});
    const DataMatrix b = sampler.sample_fixed_counts(counts, {42, 3});
    CHECK(a.values() == b.values());
    // Replicate 3 does not depend on which replicates were drawn before it.
    for (std::uint64_t rep : {5u, 1u, 0u}) (void)sampler.sample_fixed_counts(counts, {42, rep});
    CHECK(sampler.sample_fixed_counts(counts, {42, 3}).values() == a.values());
    CHECK(sampler.sample_fixed_counts(counts, {42, 4}).values() != a.values());
    CHECK(sampler.sample_fixed_counts(counts, {43, 3}).values() != a.values());

    const DataMatrix m1 = sampler.sample_mixture_draws(20, {42, 1});
    const DataMatrix m2 = sampler.sample_mixture_draws(20, {42, 1});
    CHECK(m1.values() == m2.values());
    CHECK(m1.labels() == m2.labels());
}

TEST_CASE("mixture draws follow the mixing proportions") {
    const Vector near_one{1.0 - 2e-12, 1e-12, 1e-12};
    const MixtureModel skewed =
        zero_cov_model({{0.0}, {1.0}, {2.0}}, near_one);
    const DataMatrix x = sample_mixture_draws(skewed, 1000, {1, 0});
    for (std::size_t l : x.labels()) CHECK(l == 0);

    const MixtureModel third = zero_cov_model({{0.0}, {1.0}}, {1.0 / 3.0, 2.0 / 3.0});
    const DataMatrix y = sample_mixture_draws(third, 10000, {2, 0});
    const double eta1 = static_cast<double>(y.counts()[0]) / 10000.0;
    CHECK(eta1 > 0.32);
    CHECK(eta1 < 0.35);
    // Columns follow draw order, so labels are interleaved rather than sorted.
    CHECK(!std::is_sorted(y.labels().begin(), y.labels().end()));
}

TEST_CASE("dense cap is enforced before factoring") {
    DenseLimits tiny;
    tiny.cholesky_max = 8;
    CHECK_THROWS_AS(MixtureSampler(build_toy_model({ToyKind::two_class, 9, std::nullopt}), tiny),
                    ResourceError);
}

TEST_CASE("an indefinite covariance is reported") {
    SymMatrix bad = SymMatrix::identity(3);
    bad.set(2, 2, -1.0);
    const MixtureModel m({Vector(3, 0.0), Vector(3, 1.0)}, {SymMatrix::identity(3), bad},
                         {0.5, 0.5});
    CHECK_THROWS_AS(MixtureSampler{m}, NotPositiveSemidefiniteError);
}
