#ifndef HDLSS_CONFIG_HPP
#define HDLSS_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdlss/clustering.hpp"
#include "hdlss/csv.hpp"
#include "hdlss/linalg.hpp"
#include "hdlss/mixture.hpp"

namespace hdlss {

/// Parameters of one CLI invocation. Unset optionals fall back to
/// per-command defaults.
struct RunConfig {
    std::optional<ToyKind> model;
    std::optional<std::size_t> dim;       ///< key d
    std::vector<std::size_t> d_grid;      ///< key d-grid
    std::vector<std::size_t> counts;
    std::optional<Vector> mix;
    std::optional<std::size_t> replicates;
    std::uint64_t seed = 1;
    std::optional<std::size_t> k;
    std::optional<ClusterMethod> method;
    std::size_t feature_dim = 3;
    std::optional<SignReference> sign_reference;
    int restarts = 10;

    std::string input;
    CsvOptions csv;  ///< keys orientation, header, labels, skip-leading
    std::string out = "out";
};

/// Every key accepted by apply_setting, in echo order.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value; unknown keys and malformed values throw
/// InputError. Keys match the long CLI flags without the dashes.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` lines; '#' starts a comment, blank lines are skipped.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in,
                                                                  const std::string& source);
void load_config_file(RunConfig& cfg, const std::string& path);

/// Throws InputError unless the d-grid is strictly increasing and replicates >= 1.
void validate(const RunConfig& cfg);

/// key=value text accepted back by load_config_file.
std::string echo(const RunConfig& cfg);

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& key);
Vector parse_double_list(const std::string& text, const std::string& key);

}  // namespace hdlss

#endif  // HDLSS_CONFIG_HPP
