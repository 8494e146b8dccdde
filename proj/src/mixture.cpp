#include "hdlss/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hdlss/errors.hpp"

namespace hdlss {

MixtureModel::MixtureModel(std::vector<Vector> means, std::vector<SymMatrix> covariances,
                           Vector mix)
    : means_(std::move(means)), covariances_(std::move(covariances)), mix_(std::move(mix)) {
    const std::size_t k = means_.size();
    if (k < 2) throw InputError("mixture model needs at least 2 classes");
    if (covariances_.size() != k) throw InputError("mixture model: one covariance per class");
    const std::size_t d = means_.front().size();
    if (d == 0) throw InputError("mixture model: dimension must be at least 1");
    for (std::size_t i = 0; i < k; ++i) {
        if (means_[i].size() != d)
            throw InputError("mixture model: mean " + std::to_string(i + 1) + " has wrong length");
        if (covariances_[i].order() != d)
            throw InputError("mixture model: covariance " + std::to_string(i + 1) +
                             " has wrong order");
        for (double v : means_[i])
            if (!std::isfinite(v)) throw InputError("mixture model: non-finite mean entry");
    }
    check_proportions(mix_, k);
}

Vector MixtureModel::overall_mean() const {
    Vector mu(dim(), 0.0);
    for (std::size_t i = 0; i < classes(); ++i)
        for (std::size_t r = 0; r < dim(); ++r) mu[r] += mix_[i] * means_[i][r];
    return mu;
}

Vector MixtureModel::mean_gap(std::size_t i, std::size_t j) const {
    Vector g(dim());
    for (std::size_t r = 0; r < dim(); ++r) g[r] = means_.at(i)[r] - means_.at(j)[r];
    return g;
}

MixtureModel MixtureModel::with_mix(Vector mix) const {
    return MixtureModel(means_, covariances_, std::move(mix));
}

MixtureModel MixtureModel::with_covariance(std::size_t i, SymMatrix cov) const {
    auto covs = covariances_;
    covs.at(i) = std::move(cov);
    return MixtureModel(means_, std::move(covs), mix_);
}

void check_proportions(std::span<const double> p, std::size_t expected_size) {
    if (p.size() != expected_size)
        throw InputError("proportions: expected " + std::to_string(expected_size) + " entries, got " +
                         std::to_string(p.size()));
    double sum = 0.0;
    for (double v : p) {
        if (!(v > 0.0 && v < 1.0)) throw InputError("proportions must lie in (0,1)");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InputError("proportions must sum to 1");
}

// ---------------------------------------------------------------------------

SymMatrix make_gamma_cov(std::size_t d, double rho, double exponent) {
    if (d == 0) throw InputError("make_gamma_cov: d must be at least 1");
    if (!(rho > 0.0 && rho < 1.0)) throw InputError("make_gamma_cov: rho must lie in (0,1)");
    if (!(exponent > 0.0)) throw InputError("make_gamma_cov: exponent must be positive");
    // Toeplitz: one value per lag.
    Vector lag(d);
    lag[0] = 1.0;
    for (std::size_t h = 1; h < d; ++h)
        lag[h] = std::pow(rho, std::pow(static_cast<double>(h), exponent));
    SymMatrix g(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) g.set(i, j, lag[j - i]);
    return g;
}

SymMatrix make_b_scaled_cov(std::size_t d, const SymMatrix& base) {
    if (base.order() != d)
        throw InputError("make_b_scaled_cov: base has order " + std::to_string(base.order()) +
                         ", expected " + std::to_string(d));
    Vector b(d);
    for (std::size_t i = 1; i <= d; ++i) {
        const double mag = std::sqrt(0.5 + static_cast<double>(i) / static_cast<double>(d + 1));
        b[i - 1] = (i % 2 == 1) ? -mag : mag;
    }
    SymMatrix out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) out.set(i, j, b[i] * base(i, j) * b[j]);
    return out;
}

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::size_t ceil_pow_three_quarters(std::size_t d) {
    const auto target = static_cast<u128>(d) * d * d;
    auto m = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(d), 0.75)));
    if (m > 0) --m;
    auto fourth = [](std::size_t x) {
        const auto y = static_cast<u128>(x) * x;
        return y * y;
    };
    while (fourth(m) < target) ++m;
    return m;
}

std::size_t ceil_sqrt(std::size_t d) {
    auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d))));
    if (m > 0) --m;
    while (static_cast<u128>(m) * m < d) ++m;
    return m;
}

ToyKind parse_toy_kind(const std::string& name) {
    if (name == "two_class") return ToyKind::two_class;
    if (name == "three_class") return ToyKind::three_class;
    if (name == "four_class") return ToyKind::four_class;
    throw InputError("unknown model '" + name + "' (expected two_class, three_class or four_class)");
}

std::string to_string(ToyKind kind) {
    switch (kind) {
        case ToyKind::two_class: return "two_class";
        case ToyKind::three_class: return "three_class";
        case ToyKind::four_class: return "four_class";
    }
    return "?";
}

std::size_t toy_class_count(ToyKind kind) {
    switch (kind) {
        case ToyKind::two_class: return 2;
        case ToyKind::three_class: return 3;
        case ToyKind::four_class: return 4;
    }
    return 0;
}

MixtureModel build_toy_model(const ToySpec& spec) {
    const std::size_t d = spec.dim;
    if (d < 4) throw InputError("toy models need d >= 4, got " + std::to_string(d));
    const SymMatrix gamma = make_gamma_cov(d);
    const SymMatrix bgb = make_b_scaled_cov(d, gamma);

    auto leading_ones = [d](std::size_t count) {
        Vector v(d, 0.0);
        std::fill_n(v.begin(), count, 1.0);
        return v;
    };

    switch (spec.kind) {
        case ToyKind::two_class:
            return MixtureModel({Vector(d, 0.0), Vector(d, 1.0)}, {gamma, bgb},
                                spec.mix.value_or(Vector{0.5, 0.5}));
        case ToyKind::three_class:
            return MixtureModel(
                {Vector(d, 1.0), leading_ones(ceil_pow_three_quarters(d)), leading_ones(ceil_sqrt(d))},
                {gamma, bgb, gamma.scaled(0.8)}, spec.mix.value_or(Vector{0.5, 0.25, 0.25}));
        case ToyKind::four_class:
            return MixtureModel({Vector(d, 1.0), leading_ones(ceil_pow_three_quarters(d)),
                                 leading_ones(ceil_sqrt(d)), Vector(d, 0.0)},
                                {gamma, bgb, gamma.scaled(0.8), bgb.scaled(1.2)},
                                spec.mix.value_or(Vector{0.25, 0.25, 0.25, 0.25}));
    }
    throw InputError("unknown toy model kind");
}

// ---------------------------------------------------------------------------

Vector DeltaTable::consecutive() const {
    Vector out;
    for (std::size_t i = 0; i + 1 < pairwise.rows(); ++i) out.push_back(pairwise(i, i + 1));
    return out;
}

DeltaTable delta_matrix(const MixtureModel& m) {
    const std::size_t k = m.classes();
    DeltaTable t{Matrix(k, k), 0.0};
    bool first = true;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const Vector g = m.mean_gap(i, j);
            const double delta = dot(g, g);
            t.pairwise(i, j) = delta;
            t.pairwise(j, i) = delta;
            t.min = first ? delta : std::min(t.min, delta);
            first = false;
        }
    return t;
}

SymMatrix mixture_covariance(const MixtureModel& m, const DenseLimits& limits) {
    const std::size_t d = m.dim();
    if (d > limits.cholesky_max)
        throw ResourceError("mixture_covariance: d = " + std::to_string(d) +
                            " exceeds the dense cap " + std::to_string(limits.cholesky_max));
    const std::size_t k = m.classes();
    const auto& eps = m.mix();
    Matrix sigma(d, d);
    for (std::size_t i = 0; i < k; ++i) {
        const SymMatrix& cov = m.covariance(i);
        for (std::size_t r = 0; r < d; ++r) {
            auto dst = sigma.row(r);
            auto src = cov.row(r);
            for (std::size_t c = 0; c < d; ++c) dst[c] += eps[i] * src[c];
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const Vector g = m.mean_gap(i, j);
            const double w = eps[i] * eps[j];
            for (std::size_t r = 0; r < d; ++r) {
                if (g[r] == 0.0) continue;
                auto row = sigma.row(r);
                const double wr = w * g[r];
                for (std::size_t c = 0; c < d; ++c) row[c] += wr * g[c];
            }
        }
    // The accumulation above is symmetric term by term, but copy the upper
    // triangle to guarantee bitwise symmetry.
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = r + 1; c < d; ++c) sigma(c, r) = sigma(r, c);
    return SymMatrix::from_dense(sigma);
}

double mixture_trace(const MixtureModel& m) {
    const auto& eps = m.mix();
    const DeltaTable delta = delta_matrix(m);
    double t = 0.0;
    for (std::size_t i = 0; i < m.classes(); ++i) {
        t += eps[i] * m.covariance(i).trace();
        for (std::size_t j = i + 1; j < m.classes(); ++j) t += eps[i] * eps[j] * delta(i, j);
    }
    return t;
}

ConditionReport check_conditions(const MixtureModel& m, const DenseLimits& limits) {
    const DeltaTable delta = delta_matrix(m);
    if (!(delta.min > 0.0))
        throw InputError("conditions undefined: Delta_min = 0 (two classes share a mean)");
    const std::size_t k = m.classes();
    const double dmin = delta.min;
    const double dmin2 = dmin * dmin;

    ConditionReport r;
    for (std::size_t i = 0; i < k; ++i) {
        const SymMatrix& cov = m.covariance(i);
        const double top = cov.order() <= limits.eigen_max ? sym_eigen(cov).values.front()
                                                          : top_eigenvalue(cov, 1e-8);
        r.ratio1 = std::max(r.ratio1, std::max(top, 0.0) / dmin);
        const double tr_sq = cov.frobenius_squared();
        r.ratio2 = std::max(r.ratio2, tr_sq / dmin2);
        r.ratio3 = std::max(r.ratio3, 2.0 * tr_sq / dmin2);
        const double tr = cov.trace();
        if (tr > 0.0) r.ratio21 = std::max(r.ratio21, 2.0 * tr_sq / (tr * tr));
        for (std::size_t j = i + 1; j < k; ++j)
            r.ratio4 = std::max(r.ratio4, std::abs(tr - m.covariance(j).trace()) / dmin);
    }

    std::vector<Vector> gaps;
    for (std::size_t i = 0; i + 1 < k; ++i) gaps.push_back(m.mean_gap(i, i + 1));
    const Vector cons = delta.consecutive();
    for (std::size_t i = 0; i < gaps.size(); ++i)
        for (std::size_t j = i + 1; j < gaps.size(); ++j) {
            const double c = std::abs(dot(gaps[i], gaps[j])) / std::sqrt(cons[i] * cons[j]);
            r.ratio5_cos = std::max(r.ratio5_cos, c);
            r.ratio5_delta = std::max(r.ratio5_delta, cons[j] / cons[i]);
        }

    for (std::size_t i = 0; i + 2 < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            r.ratio6 = std::max(r.ratio6, m.covariance(j).quadratic_form(gaps[i]) / dmin2);
    return r;
}

// ---------------------------------------------------------------------------

ScoreLimits score_limits(std::span<const double> p) {
    const std::size_t k = p.size();
    if (k < 2) throw InputError("score_limits: need at least 2 classes");
    check_proportions(p, k);
    ScoreLimits out{Matrix(k - 1, k), Vector(p.begin(), p.end())};
    double cum_prev = 0.0;  // p_(i-1)
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double cum = cum_prev + p[i];  // p_(i)
        const double own = std::sqrt((1.0 - cum) / (p[i] * (1.0 - cum_prev)));
        const double rest = -std::sqrt(p[i] / ((1.0 - cum) * (1.0 - cum_prev)));
        for (std::size_t g = 0; g < k; ++g)
            out.vertices(i, g) = g < i ? 0.0 : (g == i ? own : rest);
        cum_prev = cum;
    }
    return out;
}

Vector lambda_limits(std::span<const double> p, std::span<const double> consecutive_deltas) {
    const std::size_t k = p.size();
    check_proportions(p, k);
    if (consecutive_deltas.size() + 1 != k)
        throw InputError("lambda_limits: need k-1 consecutive deltas");
    Vector out(k - 1);
    double cum_prev = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double cum = cum_prev + p[i];
        out[i] = p[i] * (1.0 - cum) / (1.0 - cum_prev) * consecutive_deltas[i];
        cum_prev = cum;
    }
    return out;
}

namespace {

Vector empirical_fractions(std::span<const std::size_t> labels, std::size_t classes) {
    if (labels.empty()) throw InputError("labels must not be empty");
    Vector eta(classes, 0.0);
    for (std::size_t l : labels) {
        if (l >= classes) throw InputError("label outside [0, k)");
        eta[l] += 1.0;
    }
    for (std::size_t i = 0; i < classes; ++i) {
        if (eta[i] == 0.0)
            throw InputError("class " + std::to_string(i + 1) +
                             " has no samples; eta_i = 0 appears in a denominator");
        eta[i] /= static_cast<double>(labels.size());
    }
    return eta;
}

}  // namespace

Matrix u_vectors(std::span<const std::size_t> labels, std::size_t classes) {
    if (classes < 2) throw InputError("u_vectors: need at least 2 classes");
    const Vector eta = empirical_fractions(labels, classes);
    const std::size_t n = labels.size();
    const double nd = static_cast<double>(n);
    Matrix u(classes - 1, n);
    double cum_prev = 0.0;
    for (std::size_t i = 0; i + 1 < classes; ++i) {
        const double cum = cum_prev + eta[i];
        // 1 - cum: fraction in the remaining classes, positive here.
        const double own = std::sqrt((1.0 - cum) / (nd * eta[i] * (1.0 - cum_prev)));
        const double rest = -std::sqrt(eta[i] / (nd * (1.0 - cum) * (1.0 - cum_prev)));
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t g = labels[j];
            u(i, j) = g < i ? 0.0 : (g == i ? own : rest);
        }
        cum_prev = cum;
    }
    return u;
}

AppendixOracle appendix_oracle(const MixtureModel& m, std::span<const std::size_t> labels) {
    const std::size_t k = m.classes();
    const std::size_t n = labels.size();
    const std::size_t d = m.dim();
    if (n < k) throw InputError("appendix_oracle: need n >= k");

    AppendixOracle o;
    o.eta = empirical_fractions(labels, k);
    o.u = u_vectors(labels, k);

    o.nu.assign(k, Vector(d, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t mm = 0; mm < k; ++mm)
            for (std::size_t r = 0; r < d; ++r)
                o.nu[i][r] += o.eta[mm] * (m.mean(i)[r] - m.mean(mm)[r]);

    o.v = Matrix(d, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < d; ++r) o.v(r, j) = o.nu[labels[j]][r];

    // V^T V / n only depends on the class pair of (j, l).
    Matrix class_gram(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            class_gram(a, b) = dot(o.nu[a], o.nu[b]) / static_cast<double>(n);
            class_gram(b, a) = class_gram(a, b);
        }
    SymMatrix vtv(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = j; l < n; ++l) vtv.set(j, l, class_gram(labels[j], labels[l]));

    EigenDecomposition eig = sym_eigen(vtv);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        Vector vec = eig.vectors[i];
        if (dot(vec, o.u.row(i)) < 0.0)
            for (double& x : vec) x = -x;
        o.tilde_values.push_back(eig.values[i]);
        o.tilde_vectors.push_back(std::move(vec));
    }
    return o;
}

}  // namespace hdlss
