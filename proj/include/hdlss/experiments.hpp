#ifndef HDLSS_EXPERIMENTS_HPP
#define HDLSS_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hdlss/config.hpp"
#include "hdlss/data_matrix.hpp"
#include "hdlss/linalg.hpp"
#include "hdlss/mixture.hpp"

namespace hdlss {

/// Files written by a command plus the warnings it raised.
struct RunOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// fig1 | fig2 | fig3 | conditions | theorem1
const std::vector<std::string>& experiment_names();

/// Writes the experiment's CSV and SVG files and a config.txt stamp into
/// cfg.out. On failure every file this run created is removed.
RunOutput run_experiment(const std::string& name, const RunConfig& cfg);
RunOutput run_cluster(const RunConfig& cfg);
RunOutput run_simulate(const RunConfig& cfg);
RunOutput run_check_conditions(const RunConfig& cfg);

// Building blocks shared with the tests.

/// P_n = I_n - 1 1^T / n
SymMatrix centering_projector(std::size_t n);

/// r_j = eta_2 for class-1 samples and -eta_1 for class-2 samples.
Vector two_class_r(std::span<const std::size_t> labels);

/// c r r^T + weight P_n
SymMatrix two_class_limit(std::span<const std::size_t> labels, double c, double weight);

double frobenius_distance(const SymMatrix& a, const SymMatrix& b);

/// Angle in radians, in [0, pi].
double angle_between(std::span<const double> a, std::span<const double> b);

struct Fig1Row {
    std::size_t d = 0;
    std::size_t replicate = 0;
    double angle = 0.0;  ///< between u^_1 and r / ||r||, u^_1 oriented towards r
    Vector u;
};

std::vector<Fig1Row> fig1_rows(std::span<const std::size_t> grid, std::size_t replicates,
                               std::uint64_t seed, std::span<const std::size_t> counts);

struct Theorem1Row {
    std::size_t d = 0;
    std::size_t replicate = 0;
    double distance = 0.0;      ///< weight 1 - eps_1 eps_2 c on P_n
    double distance_eta = 0.0;  ///< weight 1 - eta_1 eta_2 c on P_n
};

/// Frobenius distance of (n-1) S_D / tr(Sigma) to its two-class limit with
/// c = Delta / tr(Sigma), for two_class(d) with the given mix.
std::vector<Theorem1Row> theorem1_rows(std::span<const std::size_t> grid, std::size_t replicates,
                                       std::uint64_t seed, std::span<const std::size_t> counts);

struct ScoreRecord {
    std::size_t d = 0;
    std::size_t replicate = 0;
    std::size_t sample = 0;
    std::size_t label = 0;   ///< 0-based true class
    bool estimated = false;  ///< z^ from the dual PCA instead of the true z
    Vector coords;
};

/// Leading k-1 normalized scores of toy samples. True scores when d is within
/// the eigen cap, label-oriented sample scores otherwise.
std::vector<ScoreRecord> score_rows(ToyKind kind, std::span<const std::size_t> grid,
                                    std::size_t replicates, std::uint64_t seed,
                                    std::span<const std::size_t> counts,
                                    const DenseLimits& limits = {});

}  // namespace hdlss

#endif  // HDLSS_EXPERIMENTS_HPP
