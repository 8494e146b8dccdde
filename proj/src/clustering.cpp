#include "hdlss/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdlss/errors.hpp"
#include "hdlss/mixture.hpp"
#include "hdlss/sampler.hpp"

namespace hdlss {

ClusterMethod parse_cluster_method(const std::string& name) {
    if (name == "sign") return ClusterMethod::sign_rule;
    if (name == "kmeans") return ClusterMethod::kmeans;
    throw InputError("unknown clustering method '" + name + "' (expected sign or kmeans)");
}

std::string to_string(ClusterMethod method) {
    return method == ClusterMethod::sign_rule ? "sign" : "kmeans";
}

SignReference parse_sign_reference(const std::string& name) {
    if (name == "largest-entry") return SignReference::largest_entry;
    if (name == "labels") return SignReference::labels;
    throw InputError("unknown sign reference '" + name + "' (expected largest-entry or labels)");
}

std::string to_string(SignReference ref) {
    return ref == SignReference::labels ? "labels" : "largest-entry";
}

ClusterResult sign_rule(const Matrix& scores, std::size_t k) {
    if (k < 2) throw InputError("sign_rule: need k >= 2");
    if (scores.rows() < k - 1)
        throw InputError("sign_rule: need " + std::to_string(k - 1) + " score rows, got " +
                         std::to_string(scores.rows()));
    ClusterResult r;
    r.method = ClusterMethod::sign_rule;
    r.feature_dim = k - 1;
    r.labels.assign(scores.cols(), k - 1);
    for (std::size_t j = 0; j < scores.cols(); ++j)
        for (std::size_t i = 0; i + 1 < k; ++i)
            if (scores(i, j) > 0.0) {
                r.labels[j] = i;
                break;
            }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

Matrix plus_plus_seeds(const Matrix& points, std::size_t k, RandomStream& rng) {
    const std::size_t n = points.rows();
    Matrix centers(k, points.cols());
    auto pick = [&](std::size_t c, std::size_t j) {
        std::copy(points.row(j).begin(), points.row(j).end(), centers.row(c).begin());
    };
    std::size_t first = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
    pick(0, first);
    Vector best(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            best[j] = std::min(best[j], squared_distance(points.row(j), centers.row(c - 1)));
            total += best[j];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t j = 0; j < n; ++j) {
                acc += best[j];
                if (acc >= target && best[j] > 0.0) {
                    chosen = j;
                    break;
                }
            }
        } else {
            chosen = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
        }
        pick(c, chosen);
    }
    return centers;
}

bool assign(const Matrix& points, const Matrix& centers, std::vector<std::size_t>& labels) {
    bool changed = false;
    for (std::size_t j = 0; j < points.rows(); ++j) {
        std::size_t arg = 0;
        double dist = squared_distance(points.row(j), centers.row(0));
        for (std::size_t c = 1; c < centers.rows(); ++c) {
            const double dc = squared_distance(points.row(j), centers.row(c));
            if (dc < dist) {
                dist = dc;
                arg = c;
            }
        }
        if (labels[j] != arg) {
            labels[j] = arg;
            changed = true;
        }
    }
    return changed;
}

// Recomputes centroids; an empty cluster takes the point farthest from its
// own center. Returns true if any re-seed happened.
bool update_centers(const Matrix& points, std::vector<std::size_t>& labels, Matrix& centers) {
    const std::size_t k = centers.rows();
    const std::size_t dim = points.cols();
    bool reseeded = false;
    for (std::size_t pass = 0; pass < k; ++pass) {
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t l : labels) ++sizes[l];
        auto empty = std::find(sizes.begin(), sizes.end(), 0u);
        if (empty == sizes.end()) break;
        std::size_t far = 0;
        double far_dist = -1.0;
        for (std::size_t j = 0; j < points.rows(); ++j) {
            if (sizes[labels[j]] < 2) continue;
            const double dj = squared_distance(points.row(j), centers.row(labels[j]));
            if (dj > far_dist) {
                far_dist = dj;
                far = j;
            }
        }
        labels[far] = static_cast<std::size_t>(empty - sizes.begin());
        reseeded = true;
    }
    Matrix sums(k, dim);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t j = 0; j < points.rows(); ++j) {
        ++sizes[labels[j]];
        auto s = sums.row(labels[j]);
        auto p = points.row(j);
        for (std::size_t q = 0; q < dim; ++q) s[q] += p[q];
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t q = 0; q < dim; ++q)
            centers(c, q) = sums(c, q) / static_cast<double>(sizes[c]);
    return reseeded;
}

}  // namespace

double within_cluster_ss(const Matrix& points, std::span<const std::size_t> labels, std::size_t k) {
    Matrix sums(k, points.cols());
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t j = 0; j < points.rows(); ++j) {
        ++sizes[labels[j]];
        for (std::size_t q = 0; q < points.cols(); ++q) sums(labels[j], q) += points(j, q);
    }
    double ss = 0.0;
    for (std::size_t j = 0; j < points.rows(); ++j) {
        const std::size_t c = labels[j];
        for (std::size_t q = 0; q < points.cols(); ++q) {
            const double diff = points(j, q) - sums(c, q) / static_cast<double>(sizes[c]);
            ss += diff * diff;
        }
    }
    return ss;
}

ClusterResult kmeans(const Matrix& points, std::size_t k, const KMeansOptions& options) {
    const std::size_t n = points.rows();
    if (k < 1) throw InputError("kmeans: need k >= 1");
    if (points.cols() < 1) throw InputError("kmeans: points need at least one dimension");
    if (n < k)
        throw InputError("kmeans: " + std::to_string(n) + " points cannot form " +
                         std::to_string(k) + " clusters");
    if (options.restarts < 1) throw InputError("kmeans: restarts must be at least 1");

    ClusterResult best;
    best.method = ClusterMethod::kmeans;
    best.feature_dim = points.cols();
    best.objective = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < options.restarts; ++restart) {
        RandomStream rng(stream_key(options.seed, static_cast<std::uint64_t>(restart), 0));
        Matrix centers = plus_plus_seeds(points, k, rng);
        std::vector<std::size_t> labels(n, k);  // k marks "unassigned"
        Vector history;
        double previous = std::numeric_limits<double>::infinity();
        for (int it = 0; it < options.max_iterations; ++it) {
            const bool changed = assign(points, centers, labels);
            if (!changed && it > 0) break;
            update_centers(points, labels, centers);
            const double obj = within_cluster_ss(points, labels, k);
            history.push_back(obj);
            if (std::isfinite(previous) && previous - obj <= options.tolerance * previous) break;
            previous = obj;
        }
        const double obj = history.empty() ? within_cluster_ss(points, labels, k) : history.back();
        if (obj < best.objective) {
            best.objective = obj;
            best.labels = labels;
            best.centers = centers;
            best.objective_history = std::move(history);
        }
    }
    return best;
}

LabelMatch match_accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth,
                          std::size_t k) {
    if (pred.size() != truth.size()) throw InputError("match_accuracy: label vectors differ in length");
    if (pred.empty()) throw InputError("match_accuracy: no labels");
    if (k > 8) throw InputError("match_accuracy: k > 8 is unsupported (exhaustive search over k!)");
    for (std::size_t j = 0; j < pred.size(); ++j)
        if (pred[j] >= k || truth[j] >= k) throw InputError("match_accuracy: label outside [0, k)");

    // agree(p, t) = #{j : pred = p, truth = t}
    Matrix agree(k, k);
    for (std::size_t j = 0; j < pred.size(); ++j) agree(pred[j], truth[j]) += 1.0;

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    LabelMatch best{perm, -1.0};
    do {
        double hits = 0.0;
        for (std::size_t p = 0; p < k; ++p) hits += agree(p, perm[p]);
        if (hits > best.accuracy) best = {perm, hits};
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.accuracy /= static_cast<double>(pred.size());
    return best;
}

PipelineResult pipeline(const DataMatrix& x, std::size_t k, const PipelineConfig& config) {
    const std::size_t n = x.size();
    if (k < 2) throw InputError("pipeline: need k >= 2");
    if (n < k) throw InputError("pipeline: need at least k samples");
    if (config.feature_dim < 1) throw InputError("pipeline: feature_dim must be at least 1");

    PipelineResult out;
    std::size_t feature_dim = config.feature_dim;
    if (feature_dim > n - 1) {
        out.warnings.push_back("feature_dim " + std::to_string(feature_dim) + " clamped to n-1 = " +
                               std::to_string(n - 1));
        feature_dim = n - 1;
    }
    const std::size_t retained = std::min(std::max(k - 1, feature_dim), n - 1);
    out.pca = dual_pca(x, retained);
    if (out.pca.degenerate())
        throw UndefinedComponentError("pipeline: S_D is zero (all samples coincide); no PC scores");

    if (config.sign_reference == SignReference::labels) {
        if (!x.has_labels())
            throw InputError("pipeline: sign reference 'labels' needs labeled data");
        orient_to_reference(out.pca, u_vectors(x.labels(), x.class_count()));
    }
    const ClusterMethod method = config.method.value_or(
        config.sign_reference == SignReference::labels ? ClusterMethod::sign_rule
                                                       : ClusterMethod::kmeans);
    const std::size_t usable = out.pca.defined_prefix();

    if (method == ClusterMethod::sign_rule) {
        if (usable < k - 1)
            throw UndefinedComponentError("pipeline: the sign rule needs " + std::to_string(k - 1) +
                                          " nonzero components, found " + std::to_string(usable));
        out.clusters = sign_rule(out.pca.scores, k);
    } else {
        if (usable < feature_dim) {
            out.warnings.push_back("feature_dim reduced to " + std::to_string(usable) +
                                   " nonzero components");
            feature_dim = usable;
        }
        Matrix points(n, feature_dim);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < feature_dim; ++i) points(j, i) = out.pca.scores(i, j);
        out.clusters = kmeans(points, k, config.kmeans);
    }

    if (x.has_labels()) {
        const std::size_t classes = std::max(k, x.class_count());
        LabelMatch m = match_accuracy(out.clusters.labels, x.labels(), classes);
        out.clusters.accuracy = m.accuracy;
        out.clusters.permutation = std::move(m.permutation);
    }
    return out;
}

}  // namespace hdlss
