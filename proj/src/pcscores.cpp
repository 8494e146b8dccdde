#include "hdlss/pcscores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hdlss/errors.hpp"

namespace hdlss {

namespace {

// Relative levels below which S_D, or one of its eigenvalues, counts as zero.
constexpr double degenerate_level = 1e-24;
constexpr double component_level = 1e-12;

int largest_entry_sign(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    return v[best] < 0.0 ? -1 : 1;
}

void flip(DualPca& p, std::size_t i) {
    for (double& x : p.vectors[i]) x = -x;
    for (double& x : p.scores.row(i)) x = -x;
    p.orientation[i] = -p.orientation[i];
}

}  // namespace

bool DualPca::degenerate() const {
    return std::none_of(defined.begin(), defined.end(), [](bool b) { return b; });
}

std::span<const double> DualPca::score_row(std::size_t component) const {
    if (component >= retained())
        throw UndefinedComponentError("component " + std::to_string(component + 1) +
                                      " was not retained");
    if (!defined[component])
        throw UndefinedComponentError("component " + std::to_string(component + 1) +
                                      " has a zero eigenvalue; its scores are undefined");
    return scores.row(component);
}

std::size_t DualPca::defined_prefix() const {
    std::size_t i = 0;
    while (i < defined.size() && defined[i]) ++i;
    return i;
}

DualPca dual_pca(const DataMatrix& x, std::size_t retained) {
    const std::size_t n = x.size();
    if (n < 2) throw InputError("dual_pca: need at least 2 samples");
    if (retained < 1 || retained > n - 1)
        throw InputError("dual_pca: retained components must lie in [1, " + std::to_string(n - 1) +
                         "], got " + std::to_string(retained));

    DualPca p;
    p.s_d = centered_gram(x);
    p.trace = p.s_d.trace();
    EigenDecomposition eig = sym_eigen(p.s_d);

    double energy = 0.0;
    for (double v : x.values()) energy += v * v;
    energy /= static_cast<double>(n - 1);
    const bool zero = energy == 0.0 || p.trace <= degenerate_level * energy;

    p.values.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(n - 1));
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    p.scores = Matrix(retained, n);
    for (std::size_t i = 0; i < retained; ++i) {
        Vector u = std::move(eig.vectors[i]);
        const int sign = largest_entry_sign(u);
        if (sign < 0)
            for (double& v : u) v = -v;
        const bool ok = !zero && p.values[i] > component_level * p.trace;
        for (std::size_t j = 0; j < n; ++j)
            p.scores(i, j) = ok ? u[j] * sqrt_n : std::numeric_limits<double>::quiet_NaN();
        p.vectors.push_back(std::move(u));
        p.defined.push_back(ok);
        p.orientation.push_back(sign);
    }
    return p;
}

void orient_to_reference(DualPca& p, const Matrix& reference) {
    if (reference.cols() != p.samples())
        throw InputError("orient_to_reference: reference vectors have the wrong length");
    const std::size_t count = std::min(p.retained(), reference.rows());
    for (std::size_t i = 0; i < count; ++i)
        if (dot(p.vectors[i], reference.row(i)) < 0.0) flip(p, i);
}

Vector reconstruct_h(const DataMatrix& x, const DualPca& p, std::size_t component) {
    if (x.size() != p.samples()) throw InputError("reconstruct_h: data and PCA sizes differ");
    if (component >= p.retained() || !p.defined[component])
        throw UndefinedComponentError("reconstruct_h: component " + std::to_string(component + 1) +
                                      " is undefined (zero eigenvalue or not retained)");
    const std::size_t d = x.dim();
    const std::size_t n = x.size();
    const Vector mean = x.column_mean();
    const Vector& u = p.vectors[component];
    Vector h(d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        auto c = x.column(j);
        for (std::size_t r = 0; r < d; ++r) h[r] += (c[r] - mean[r]) * u[j];
    }
    const double scale = std::sqrt(static_cast<double>(n - 1) * p.values[component]);
    for (double& v : h) v /= scale;
    return h;
}

MixtureSpectrum mixture_spectrum(const MixtureModel& m, const DenseLimits& limits) {
    if (m.dim() > limits.eigen_max)
        throw ResourceError("true scores need the full d x d spectrum; d = " +
                            std::to_string(m.dim()) + " exceeds the eigen cap " +
                            std::to_string(limits.eigen_max));
    EigenDecomposition eig = sym_eigen(mixture_covariance(m, limits));
    MixtureSpectrum s{m.overall_mean(), std::move(eig.values), std::move(eig.vectors)};
    const std::size_t k = m.classes();
    for (std::size_t i = 0; i < s.vectors.size(); ++i) {
        Vector& h = s.vectors[i];
        const bool negative = i + 1 < k ? dot(h, m.mean_gap(i, i + 1)) < 0.0
                                        : largest_entry_sign(h) < 0;
        if (negative)
            for (double& v : h) v = -v;
    }
    return s;
}

TrueScores true_scores(const MixtureSpectrum& spectrum, const DataMatrix& x, std::size_t count) {
    const std::size_t d = spectrum.mean.size();
    if (x.dim() != d) throw InputError("true_scores: data dimension differs from the model");
    if (count < 1 || count > spectrum.values.size())
        throw InputError("true_scores: component count out of range");
    TrueScores t{Matrix(count, x.size()), Vector(spectrum.values.begin(),
                                                  spectrum.values.begin() +
                                                      static_cast<std::ptrdiff_t>(count))};
    Vector centered(d);
    for (std::size_t i = 0; i < count; ++i) {
        if (!(t.lambdas[i] > 0.0))
            throw UndefinedComponentError("true_scores: eigenvalue " + std::to_string(i + 1) +
                                          " of the mixture covariance is zero");
        const double root = std::sqrt(t.lambdas[i]);
        for (std::size_t j = 0; j < x.size(); ++j) {
            auto c = x.column(j);
            for (std::size_t r = 0; r < d; ++r) centered[r] = c[r] - spectrum.mean[r];
            t.z(i, j) = dot(spectrum.vectors[i], centered) / root;
        }
    }
    return t;
}

TrueScores true_scores(const MixtureModel& m, const DataMatrix& x, std::size_t count,
                       const DenseLimits& limits) {
    return true_scores(mixture_spectrum(m, limits), x, count);
}

Vector nr_eigenvalues(std::span<const double> values, double trace, std::size_t n) {
    if (n < 3) return {};
    if (values.size() < n - 2) throw InputError("nr_eigenvalues: need n-2 sample eigenvalues");
    Vector out(n - 2);
    double head = 0.0;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        head += values[i];
        const double residual = (trace - head) / static_cast<double>(n - 2 - i);
        out[i] = std::max(0.0, values[i] - residual);
    }
    return out;
}

Vector nr_eigenvalues(const DualPca& p) { return nr_eigenvalues(p.values, p.trace, p.samples()); }

double nr_eigenvalue(const DualPca& p, std::size_t component) {
    const std::size_t n = p.samples();
    if (component + 2 >= n)
        throw UndefinedComponentError("noise-reduced eigenvalue " + std::to_string(component + 1) +
                                      " needs n - 1 - i > 0 (n = " + std::to_string(n) + ")");
    return nr_eigenvalues(p)[component];
}

double estimate_delta(const DataMatrix& x1, const DataMatrix& x2) {
    if (x1.size() < 2 || x2.size() < 2)
        throw InputError("estimate_delta: each class needs at least 2 samples");
    if (x1.dim() != x2.dim()) throw InputError("estimate_delta: dimensions differ");
    auto within_trace = [](const DataMatrix& x, const Vector& mean) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            auto c = x.column(j);
            for (std::size_t r = 0; r < x.dim(); ++r) s += (c[r] - mean[r]) * (c[r] - mean[r]);
        }
        return s / static_cast<double>(x.size() - 1);
    };
    const Vector m1 = x1.column_mean();
    const Vector m2 = x2.column_mean();
    double gap = 0.0;
    for (std::size_t r = 0; r < m1.size(); ++r) gap += (m1[r] - m2[r]) * (m1[r] - m2[r]);
    return gap - within_trace(x1, m1) / static_cast<double>(x1.size()) -
           within_trace(x2, m2) / static_cast<double>(x2.size());
}

double two_means_separation(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw InputError("two_means_separation: need at least 2 values");
    Vector v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double total = 0.0;
    for (double x : v) total += (x - mean) * (x - mean);
    if (!(total > 0.0)) return 0.0;

    double best = 0.0;
    double left_sum = 0.0;
    const double sum = mean * static_cast<double>(n);
    for (std::size_t k = 1; k < n; ++k) {
        left_sum += v[k - 1];
        const double nl = static_cast<double>(k);
        const double nr = static_cast<double>(n - k);
        const double gap = left_sum / nl - (sum - left_sum) / nr;
        best = std::max(best, nl * nr / static_cast<double>(n) * gap * gap);
    }
    return std::min(1.0, best / total);
}

IstarResult detect_istar(const DualPca& p, std::size_t max_components) {
    if (p.samples() < 2) throw InputError("detect_istar: need at least 2 samples");
    if (max_components < 1 || max_components > p.defined_prefix())
        throw InputError("detect_istar: max_components must lie in [1, " +
                         std::to_string(p.defined_prefix()) + "] (retained, nonzero components)");
    IstarResult r;
    for (std::size_t i = 0; i < max_components; ++i) {
        r.separation.push_back(two_means_separation(p.score_row(i)));
        if (r.separation[i] > r.separation[r.index]) r.index = i;
    }
    return r;
}

}  // namespace hdlss
