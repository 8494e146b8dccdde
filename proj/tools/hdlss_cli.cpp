// Command-line front end: simulate, cluster, check-conditions, experiment <name>.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hdlss/config.hpp"
#include "hdlss/errors.hpp"
#include "hdlss/experiments.hpp"

namespace {

struct FlagValue {
    std::string key;
    std::optional<std::string> value;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PCA-based clustering for high-dimension, low-sample-size data"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key=value configuration file");

    // Every override is kept as text and routed through apply_setting, so the
    // config file and the command line share one parser.
    std::vector<FlagValue> flags = {
        {"seed", {}},        {"d-grid", {}},     {"replicates", {}},  {"k", {}},
        {"method", {}},      {"feature-dim", {}}, {"orientation", {}}, {"out", {}},
        {"model", {}},       {"d", {}},          {"counts", {}},      {"mix", {}},
        {"input", {}},       {"labels", {}},     {"skip-leading", {}}, {"sign-reference", {}},
        {"restarts", {}},
    };
    const std::vector<std::pair<std::string, std::string>> help = {
        {"seed", "master seed"},
        {"d-grid", "comma-separated strictly increasing dimensions"},
        {"replicates", "replicates per grid point"},
        {"k", "number of classes"},
        {"method", "sign or kmeans"},
        {"feature-dim", "score components used by k-means"},
        {"orientation", "samples-as-columns (default) or samples-as-rows"},
        {"out", "output directory"},
        {"model", "two_class, three_class or four_class"},
        {"d", "dimension of a single simulated dataset"},
        {"counts", "comma-separated class sizes"},
        {"mix", "comma-separated mixing proportions"},
        {"input", "CSV data file"},
        {"labels", "label row/column in the CSV: none, first or last"},
        {"skip-leading", "fields to drop from the start of each CSV line"},
        {"sign-reference", "largest-entry or labels"},
        {"restarts", "k-means restarts"},
    };
    for (std::size_t i = 0; i < flags.size(); ++i)
        app.add_option("--" + flags[i].key, flags[i].value, help[i].second);
    bool header = false;
    app.add_flag("--header", header, "the CSV starts with a header row");

    auto* simulate = app.add_subcommand("simulate", "sample a toy mixture and write data CSV");
    auto* cluster = app.add_subcommand("cluster", "PCA scores and clustering of a dataset");
    auto* conditions =
        app.add_subcommand("check-conditions", "regularity-condition ratios over a d-grid");
    auto* experiment = app.add_subcommand("experiment", "run a named experiment");
    std::string experiment_name;
    experiment->add_option("name", experiment_name, "fig1, fig2, fig3, conditions or theorem1")
        ->required();
    for (auto* sub : {simulate, cluster, conditions, experiment}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        hdlss::RunConfig cfg;
        if (!config_path.empty()) hdlss::load_config_file(cfg, config_path);
        for (const auto& f : flags)
            if (f.value) hdlss::apply_setting(cfg, f.key, *f.value);
        if (header) cfg.csv.header = true;

        hdlss::RunOutput out;
        if (*simulate) out = hdlss::run_simulate(cfg);
        else if (*cluster) out = hdlss::run_cluster(cfg);
        else if (*conditions) out = hdlss::run_check_conditions(cfg);
        else out = hdlss::run_experiment(experiment_name, cfg);

        for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& f : out.files) std::cout << f.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
