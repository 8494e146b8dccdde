#include "hdlss/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hdlss/clustering.hpp"
#include "hdlss/csv.hpp"
#include "hdlss/errors.hpp"
#include "hdlss/pcscores.hpp"
#include "hdlss/sampler.hpp"
#include "hdlss/svg.hpp"

namespace hdlss {

namespace fs = std::filesystem;

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "conditions",
                                                   "theorem1"};
    return names;
}

SymMatrix centering_projector(std::size_t n) {
    SymMatrix p(n);
    const double off = -1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) p.set(i, j, (i == j ? 1.0 : 0.0) + off);
    return p;
}

Vector two_class_r(std::span<const std::size_t> labels) {
    const double n = static_cast<double>(labels.size());
    double n1 = 0.0;
    for (std::size_t l : labels) {
        if (l > 1) throw InputError("two_class_r: labels must be 0 or 1");
        if (l == 0) n1 += 1.0;
    }
    const double eta1 = n1 / n;
    Vector r(labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) r[j] = labels[j] == 0 ? 1.0 - eta1 : -eta1;
    return r;
}

SymMatrix two_class_limit(std::span<const std::size_t> labels, double c, double weight) {
    const Vector r = two_class_r(labels);
    SymMatrix m = centering_projector(labels.size()).scaled(weight);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i; j < r.size(); ++j) m.set(i, j, m(i, j) + c * r[i] * r[j]);
    return m;
}

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
    return (a - b).frobenius_norm();
}

double angle_between(std::span<const double> a, std::span<const double> b) {
    const double c = dot(a, b) / (norm(a) * norm(b));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

namespace {

std::vector<std::size_t> sequential_labels(std::span<const std::size_t> counts) {
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < counts.size(); ++i) labels.insert(labels.end(), counts[i], i);
    return labels;
}

MixtureModel toy(ToyKind kind, std::size_t d, const std::optional<Vector>& mix = std::nullopt) {
    return build_toy_model(ToySpec{kind, d, mix});
}

}  // namespace

std::vector<Fig1Row> fig1_rows(std::span<const std::size_t> grid, std::size_t replicates,
                               std::uint64_t seed, std::span<const std::size_t> counts) {
    if (counts.size() != 2) throw InputError("fig1: counts must name two classes");
    const Matrix u_ref = u_vectors(sequential_labels(counts), 2);
    std::vector<Fig1Row> rows;
    for (std::size_t d : grid) {
        const MixtureSampler sampler(toy(ToyKind::two_class, d));
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            const DataMatrix x = sampler.sample_fixed_counts(counts, {seed, rep});
            DualPca p = dual_pca(x, 1);
            if (!p.defined[0]) throw UndefinedComponentError("fig1: first component undefined");
            orient_to_reference(p, u_ref);
            rows.push_back({d, rep, angle_between(p.vectors[0], u_ref.row(0)), p.vectors[0]});
        }
    }
    return rows;
}

std::vector<Theorem1Row> theorem1_rows(std::span<const std::size_t> grid, std::size_t replicates,
                                       std::uint64_t seed, std::span<const std::size_t> counts) {
    if (counts.size() != 2) throw InputError("theorem1: counts must name two classes");
    const std::vector<std::size_t> labels = sequential_labels(counts);
    const double n = static_cast<double>(labels.size());
    const double eta12 = static_cast<double>(counts[0]) * static_cast<double>(counts[1]) / (n * n);
    std::vector<Theorem1Row> rows;
    for (std::size_t d : grid) {
        const MixtureModel m = toy(ToyKind::two_class, d);
        const MixtureSampler sampler(m);
        const double tr = mixture_trace(m);
        const double c = delta_matrix(m)(0, 1) / tr;
        const double eps12 = m.mix()[0] * m.mix()[1];
        const SymMatrix target = two_class_limit(labels, c, 1.0 - eps12 * c);
        const SymMatrix target_eta = two_class_limit(labels, c, 1.0 - eta12 * c);
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            const DataMatrix x = sampler.sample_fixed_counts(counts, {seed, rep});
            const SymMatrix scaled = centered_gram(x).scaled((n - 1.0) / tr);
            rows.push_back({d, rep, frobenius_distance(scaled, target),
                            frobenius_distance(scaled, target_eta)});
        }
    }
    return rows;
}

std::vector<ScoreRecord> score_rows(ToyKind kind, std::span<const std::size_t> grid,
                                    std::size_t replicates, std::uint64_t seed,
                                    std::span<const std::size_t> counts,
                                    const DenseLimits& limits) {
    const std::size_t k = toy_class_count(kind);
    if (counts.size() != k)
        throw InputError(to_string(kind) + ": counts must name " + std::to_string(k) + " classes");
    const std::vector<std::size_t> labels = sequential_labels(counts);
    if (labels.size() < k + 1)
        throw InputError(to_string(kind) + ": need at least k+1 samples for k-1 sample scores");
    const Matrix u_ref = u_vectors(labels, k);
    std::vector<ScoreRecord> rows;
    for (std::size_t d : grid) {
        const MixtureModel m = toy(kind, d);
        const MixtureSampler sampler(m, limits);
        const bool estimated = d > limits.eigen_max;
        std::optional<MixtureSpectrum> spectrum;
        if (!estimated) spectrum = mixture_spectrum(m, limits);
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            const DataMatrix x = sampler.sample_fixed_counts(counts, {seed, rep});
            Matrix z;
            if (estimated) {
                DualPca p = dual_pca(x, k - 1);
                if (p.defined_prefix() < k - 1)
                    throw UndefinedComponentError("score experiment: sample scores undefined");
                orient_to_reference(p, u_ref);
                z = p.scores;
            } else {
                z = true_scores(*spectrum, x, k - 1).z;
            }
            for (std::size_t j = 0; j < x.size(); ++j) {
                Vector coords(k - 1);
                for (std::size_t i = 0; i + 1 < k; ++i) coords[i] = z(i, j);
                rows.push_back({d, rep, j, labels[j], estimated, std::move(coords)});
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------

namespace {

/// Tracks files created by one run and deletes them unless committed.
class OutputGuard {
public:
    explicit OutputGuard(const std::string& dir) : dir_(dir) {
        if (dir_.empty()) throw InputError("output directory is empty");
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
    }
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;
    ~OutputGuard() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& f : out_.files) fs::remove(f, ec);
    }

    void text(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        out_.files.push_back(p);
        write_text_file(p, content);
    }
    void warn(std::string w) { out_.warnings.push_back(std::move(w)); }
    RunOutput commit() {
        committed_ = true;
        return std::move(out_);
    }

private:
    fs::path dir_;
    RunOutput out_;
    bool committed_ = false;
};

std::string stamp(const std::string& command, const RunConfig& cfg) {
    return "command=" + command + "\n" + echo(cfg);
}

std::string grid_name(std::size_t d) { return "d" + std::to_string(d); }

std::vector<std::size_t> default_counts(ToyKind kind) {
    switch (kind) {
        case ToyKind::two_class: return {5, 5};
        case ToyKind::three_class: return {10, 5, 5};
        case ToyKind::four_class: return {5, 5, 5, 5};
    }
    return {};
}

double median(Vector v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// u^_1 is orthogonal to 1_n; for n = 3 the plane spanned by r/||r|| and a unit
// vector orthogonal to 1_n and r contains it.
RunOutput experiment_fig1(RunConfig cfg) {
    if (cfg.d_grid.empty()) cfg.d_grid = {5, 50, 500, 2000};
    if (!cfg.replicates) cfg.replicates = 20;
    if (cfg.counts.empty()) cfg.counts = {1, 2};
    cfg.model = ToyKind::two_class;
    const auto rows = fig1_rows(cfg.d_grid, *cfg.replicates, cfg.seed, cfg.counts);
    const std::size_t n = cfg.counts[0] + cfg.counts[1];

    OutputGuard out(cfg.out);
    std::vector<std::string> header = {"d", "replicate", "angle"};
    for (std::size_t j = 0; j < n; ++j) header.push_back("u" + std::to_string(j + 1));
    CsvTable table(header);
    for (const auto& r : rows) {
        std::vector<std::string> f = {std::to_string(r.d), std::to_string(r.replicate + 1),
                                      format_double(r.angle)};
        for (double v : r.u) f.push_back(format_double(v));
        table.add_row(std::move(f));
    }
    out.text("fig1_angles.csv", table.str());

    const std::vector<std::size_t> labels = sequential_labels(cfg.counts);
    Vector e1 = two_class_r(labels);
    const double rn = norm(e1);
    for (double& v : e1) v /= rn;
    // Gram-Schmidt of the standard basis against 1_n and e1.
    Vector e2;
    for (std::size_t b = 0; b < n && e2.empty(); ++b) {
        Vector v(n, -1.0 / static_cast<double>(n));
        v[b] += 1.0;
        const double p = dot(v, e1);
        for (std::size_t j = 0; j < n; ++j) v[j] -= p * e1[j];
        const double vn = norm(v);
        if (vn > 1e-8) {
            for (double& x : v) x /= vn;
            e2 = std::move(v);
        }
    }
    for (std::size_t d : cfg.d_grid) {
        ScatterPlot plot;
        plot.title = "u1 and -u1 in the plane orthogonal to 1_n, d = " + std::to_string(d);
        plot.x_label = "along r/|r|";
        plot.y_label = "orthogonal to r and 1_n";
        plot.unit_circle = true;
        plot.equal_aspect = true;
        plot.overlay_segments.push_back({{-1.0, 0.0}, {1.0, 0.0}});
        ScatterSeries plus{"+u1", Glyph::circle, {}};
        ScatterSeries minus{"-u1", Glyph::triangle, {}};
        for (const auto& r : rows) {
            if (r.d != d) continue;
            const double a = dot(r.u, e1);
            const double b = e2.empty() ? 0.0 : dot(r.u, e2);
            plus.points.push_back({a, b});
            minus.points.push_back({-a, -b});
        }
        plot.series = {plus, minus};
        out.text("fig1_" + grid_name(d) + ".svg", render_svg(plot));
    }
    out.text("config.txt", stamp("experiment fig1", cfg));
    return out.commit();
}

RunOutput experiment_scores(RunConfig cfg, ToyKind kind, const std::string& name) {
    if (cfg.d_grid.empty()) cfg.d_grid = {100, 500, 2000};
    if (!cfg.replicates) cfg.replicates = 1;
    if (cfg.counts.empty()) cfg.counts = default_counts(kind);
    cfg.model = kind;
    const std::size_t k = toy_class_count(kind);
    const auto rows = score_rows(kind, cfg.d_grid, *cfg.replicates, cfg.seed, cfg.counts);

    OutputGuard out(cfg.out);
    std::vector<std::string> header = {"d", "replicate", "sample", "label", "kind"};
    for (std::size_t i = 1; i < k; ++i) header.push_back("z" + std::to_string(i));
    CsvTable table(header);
    for (const auto& r : rows) {
        std::vector<std::string> f = {std::to_string(r.d), std::to_string(r.replicate + 1),
                                      std::to_string(r.sample + 1), std::to_string(r.label + 1),
                                      r.estimated ? "zhat" : "z"};
        for (double v : r.coords) f.push_back(format_double(v));
        table.add_row(std::move(f));
    }
    out.text(name + "_scores.csv", table.str());

    // Vertices from the realized class fractions; for the default counts these
    // equal the mixing proportions.
    Vector eta;
    const double n = static_cast<double>(std::accumulate(cfg.counts.begin(), cfg.counts.end(),
                                                         std::size_t{0}));
    for (std::size_t c : cfg.counts) eta.push_back(static_cast<double>(c) / n);
    const ScoreLimits limits = score_limits(eta);

    std::vector<std::pair<std::size_t, std::size_t>> projections = {{0, 1}};
    if (k == 4) projections.push_back({0, 2});
    for (std::size_t d : cfg.d_grid) {
        for (const auto& [a, b] : projections) {
            ScatterPlot plot;
            const bool est = std::any_of(rows.begin(), rows.end(),
                                         [d](const ScoreRecord& r) { return r.d == d && r.estimated; });
            const std::string sym = est ? "zhat" : "z";
            plot.title = name + ": (" + sym + std::to_string(a + 1) + ", " + sym +
                         std::to_string(b + 1) + "), d = " + std::to_string(d);
            plot.x_label = sym + std::to_string(a + 1);
            plot.y_label = sym + std::to_string(b + 1);
            for (std::size_t g = 0; g < k; ++g) {
                ScatterSeries s{"class " + std::to_string(g + 1), glyph_for_class(g), {}};
                for (const auto& r : rows)
                    if (r.d == d && r.label == g) s.points.push_back({r.coords[a], r.coords[b]});
                plot.series.push_back(std::move(s));
            }
            if (k == 3) {
                for (std::size_t g = 0; g < k; ++g)
                    plot.overlay.push_back({limits.vertices(a, g), limits.vertices(b, g)});
            } else {
                for (std::size_t g = 0; g < k; ++g)
                    for (std::size_t h = g + 1; h < k; ++h)
                        plot.overlay_segments.push_back(
                            {{limits.vertices(a, g), limits.vertices(b, g)},
                             {limits.vertices(a, h), limits.vertices(b, h)}});
            }
            std::string file = name + "_" + grid_name(d);
            if (k == 4) file += "_z" + std::to_string(a + 1) + "z" + std::to_string(b + 1);
            out.text(file + ".svg", render_svg(plot));
        }
    }
    out.text("config.txt", stamp("experiment " + name, cfg));
    return out.commit();
}

CsvTable conditions_table(const RunConfig& cfg) {
    CsvTable table({"d", "ratio1", "ratio2", "ratio3", "ratio4", "ratio5_cos", "ratio5_delta",
                    "ratio6", "ratio21"});
    for (std::size_t d : cfg.d_grid) {
        const ConditionReport c = check_conditions(toy(*cfg.model, d, cfg.mix));
        table.add_row({std::to_string(d), format_double(c.ratio1), format_double(c.ratio2),
                       format_double(c.ratio3), format_double(c.ratio4),
                       format_double(c.ratio5_cos), format_double(c.ratio5_delta),
                       format_double(c.ratio6), format_double(c.ratio21)});
    }
    return table;
}

RunOutput experiment_conditions(RunConfig cfg, const std::string& command) {
    if (cfg.d_grid.empty()) cfg.d_grid = {50, 100, 200, 500};
    if (!cfg.model) cfg.model = ToyKind::two_class;
    const CsvTable table = conditions_table(cfg);
    OutputGuard out(cfg.out);
    out.text("conditions.csv", table.str());
    out.text("config.txt", stamp(command, cfg));
    return out.commit();
}

RunOutput experiment_theorem1(RunConfig cfg) {
    if (cfg.d_grid.empty()) cfg.d_grid = {50, 500, 2000};
    if (!cfg.replicates) cfg.replicates = 20;
    if (cfg.counts.empty()) cfg.counts = {1, 2};
    cfg.model = ToyKind::two_class;
    const auto rows = theorem1_rows(cfg.d_grid, *cfg.replicates, cfg.seed, cfg.counts);
    OutputGuard out(cfg.out);
    CsvTable table({"d", "replicate", "distance", "distance_eta"});
    for (const auto& r : rows)
        table.add_row({std::to_string(r.d), std::to_string(r.replicate + 1),
                       format_double(r.distance), format_double(r.distance_eta)});
    out.text("theorem1_distance.csv", table.str());
    CsvTable summary({"d", "median_distance", "median_distance_eta"});
    for (std::size_t d : cfg.d_grid) {
        Vector a, b;
        for (const auto& r : rows)
            if (r.d == d) {
                a.push_back(r.distance);
                b.push_back(r.distance_eta);
            }
        summary.add_row({std::to_string(d), format_double(median(a)), format_double(median(b))});
    }
    out.text("theorem1_summary.csv", summary.str());
    out.text("config.txt", stamp("experiment theorem1", cfg));
    return out.commit();
}

void check_model_args(const RunConfig& cfg) {
    if (!cfg.d_grid.empty() && cfg.dim)
        throw InputError("give either d or d-grid, not both");
}

}  // namespace

RunOutput run_experiment(const std::string& name, const RunConfig& cfg) {
    validate(cfg);
    if (name == "fig1") return experiment_fig1(cfg);
    if (name == "fig2") return experiment_scores(cfg, ToyKind::three_class, "fig2");
    if (name == "fig3") return experiment_scores(cfg, ToyKind::four_class, "fig3");
    if (name == "conditions") return experiment_conditions(cfg, "experiment conditions");
    if (name == "theorem1") return experiment_theorem1(cfg);
    throw InputError("unknown experiment '" + name +
                     "' (expected fig1, fig2, fig3, conditions or theorem1)");
}

RunOutput run_check_conditions(const RunConfig& cfg) {
    validate(cfg);
    check_model_args(cfg);
    RunConfig c = cfg;
    if (c.dim) c.d_grid = {*c.dim};
    c.dim.reset();
    return experiment_conditions(c, "check-conditions");
}

RunOutput run_simulate(const RunConfig& cfg) {
    validate(cfg);
    RunConfig c = cfg;
    if (!c.model) c.model = ToyKind::two_class;
    if (!c.dim) c.dim = 1000;
    if (c.counts.empty()) c.counts = default_counts(*c.model);
    if (!c.replicates) c.replicates = 1;
    const MixtureSampler sampler(toy(*c.model, *c.dim, c.mix));

    OutputGuard out(c.out);
    for (std::size_t rep = 0; rep < *c.replicates; ++rep) {
        const DataMatrix x = sampler.sample_fixed_counts(c.counts, {c.seed, rep});
        CsvTable t = data_table(x);
        std::vector<std::string> label_row;
        for (std::size_t l : x.labels()) label_row.push_back(std::to_string(l + 1));
        t.add_row(std::move(label_row));
        const std::string suffix = *c.replicates == 1 ? "" : "_rep" + std::to_string(rep + 1);
        out.text("data" + suffix + ".csv", t.str());
    }
    out.text("config.txt", stamp("simulate", c));
    return out.commit();
}

RunOutput run_cluster(const RunConfig& cfg) {
    validate(cfg);
    RunConfig c = cfg;
    DataMatrix x;
    if (!c.input.empty()) {
        x = ingest_csv(c.input, c.csv);
        if (!c.sign_reference) c.sign_reference = SignReference::largest_entry;
    } else {
        if (!c.model) c.model = ToyKind::two_class;
        if (!c.dim) c.dim = 1000;
        if (c.counts.empty()) c.counts = default_counts(*c.model);
        if (!c.sign_reference) c.sign_reference = SignReference::labels;
        x = sample_fixed_counts(toy(*c.model, *c.dim, c.mix), c.counts, {c.seed, 0});
    }
    if (!c.k) {
        if (!x.has_labels()) throw InputError("cluster: k is required for unlabeled input");
        c.k = x.class_count();
    }

    PipelineConfig pc;
    pc.method = c.method;
    pc.feature_dim = c.feature_dim;
    pc.sign_reference = *c.sign_reference;
    pc.kmeans.seed = c.seed;
    pc.kmeans.restarts = c.restarts;
    const PipelineResult res = pipeline(x, *c.k, pc);

    OutputGuard out(c.out);
    for (const auto& w : res.warnings) out.warn(w);
    const std::size_t m = res.pca.retained();
    const std::size_t n = x.size();

    std::vector<std::string> header = {"sample"};
    for (std::size_t i = 0; i < m; ++i) header.push_back("z" + std::to_string(i + 1));
    CsvTable scores(header);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::string> f = {std::to_string(j + 1)};
        for (std::size_t i = 0; i < m; ++i) f.push_back(format_double(res.pca.scores(i, j)));
        scores.add_row(std::move(f));
    }
    out.text("scores.csv", scores.str());

    std::vector<std::string> lh = {"sample", "label"};
    if (x.has_labels()) lh.push_back("truth");
    CsvTable labels(lh);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::string> f = {std::to_string(j + 1),
                                      std::to_string(res.clusters.labels[j] + 1)};
        if (x.has_labels()) f.push_back(std::to_string(x.labels()[j] + 1));
        labels.add_row(std::move(f));
    }
    out.text("labels.csv", labels.str());

    if (res.clusters.accuracy) {
        std::string perm;
        for (std::size_t p = 0; p < res.clusters.permutation.size(); ++p)
            perm += (p ? "," : "") + std::to_string(res.clusters.permutation[p] + 1);
        out.text("accuracy.txt", "method=" + to_string(res.clusters.method) +
                                     "\naccuracy=" + format_double(*res.clusters.accuracy) +
                                     "\npermutation=" + perm + "\n");
    }

    const std::size_t glyph_classes = x.has_labels() ? x.class_count() : *c.k;
    const auto& glyph_labels = x.has_labels() ? x.labels() : res.clusters.labels;
    std::vector<std::pair<std::size_t, std::size_t>> projections;
    if (m >= 2) projections.push_back({0, 1});
    if (m >= 3) projections.push_back({0, 2});
    if (m == 1) projections.push_back({0, 0});
    for (const auto& [a, b] : projections) {
        ScatterPlot plot;
        plot.x_label = "zhat" + std::to_string(a + 1);
        plot.y_label = a == b ? "" : "zhat" + std::to_string(b + 1);
        plot.title = "PC scores" + std::string(x.has_labels() ? " by true class" : " by cluster");
        for (std::size_t g = 0; g < glyph_classes; ++g) {
            ScatterSeries s{(x.has_labels() ? "class " : "cluster ") + std::to_string(g + 1),
                            glyph_for_class(g), {}};
            for (std::size_t j = 0; j < n; ++j)
                if (glyph_labels[j] == g)
                    s.points.push_back({res.pca.scores(a, j), a == b ? 0.0 : res.pca.scores(b, j)});
            plot.series.push_back(std::move(s));
        }
        const std::string file = a == b ? "scores_z1.svg"
                                        : "scores_z" + std::to_string(a + 1) + "z" +
                                              std::to_string(b + 1) + ".svg";
        out.text(file, render_svg(plot));
    }
    out.text("config.txt", stamp("cluster", c));
    return out.commit();
}

}  // namespace hdlss
