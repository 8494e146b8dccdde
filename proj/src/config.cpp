#include "hdlss/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hdlss/errors.hpp"

namespace hdlss {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
    std::uint64_t v = 0;
    const auto t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw InputError(key + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

double parse_real(const std::string& text, const std::string& key) {
    double v = 0.0;
    const auto t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw InputError(key + ": expected a number, got '" + text + "'");
    return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw InputError(key + ": expected true or false, got '" + text + "'");
}

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& key) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) out.push_back(parse_u64(item, key));
    if (out.empty()) throw InputError(key + ": empty list");
    return out;
}

Vector parse_double_list(const std::string& text, const std::string& key) {
    Vector out;
    for (const auto& item : split_list(text)) out.push_back(parse_real(item, key));
    if (out.empty()) throw InputError(key + ": empty list");
    return out;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "model",   "d",           "d-grid",         "counts",   "mix",         "replicates",
        "seed",    "k",           "method",         "feature-dim", "sign-reference", "restarts",
        "input",   "orientation", "header",         "labels",   "skip-leading", "out"};
    return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "model") cfg.model = parse_toy_kind(v);
    else if (key == "d") cfg.dim = parse_u64(v, key);
    else if (key == "d-grid") cfg.d_grid = parse_size_list(v, key);
    else if (key == "counts") cfg.counts = parse_size_list(v, key);
    else if (key == "mix") cfg.mix = parse_double_list(v, key);
    else if (key == "replicates") cfg.replicates = parse_u64(v, key);
    else if (key == "seed") cfg.seed = parse_u64(v, key);
    else if (key == "k") cfg.k = parse_u64(v, key);
    else if (key == "method") cfg.method = parse_cluster_method(v);
    else if (key == "feature-dim") cfg.feature_dim = parse_u64(v, key);
    else if (key == "sign-reference") cfg.sign_reference = parse_sign_reference(v);
    else if (key == "restarts") cfg.restarts = static_cast<int>(parse_u64(v, key));
    else if (key == "input") cfg.input = v;
    else if (key == "orientation") cfg.csv.layout = parse_sample_layout(v);
    else if (key == "header") cfg.csv.header = parse_bool(v, key);
    else if (key == "labels") cfg.csv.labels = parse_label_position(v);
    else if (key == "skip-leading") cfg.csv.skip_leading = parse_u64(v, key);
    else if (key == "out") cfg.out = v;
    else throw InputError("unknown configuration key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in,
                                                                  const std::string& source) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(source + ": line " + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw InputError(source + ": line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return out;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    for (const auto& [key, value] : parse_key_values(in, path)) {
        try {
            apply_setting(cfg, key, value);
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }
}

void validate(const RunConfig& cfg) {
    for (std::size_t i = 1; i < cfg.d_grid.size(); ++i)
        if (cfg.d_grid[i] <= cfg.d_grid[i - 1])
            throw InputError("d-grid must be strictly increasing");
    if (cfg.replicates && *cfg.replicates < 1) throw InputError("replicates must be at least 1");
    if (cfg.feature_dim < 1) throw InputError("feature-dim must be at least 1");
    if (cfg.restarts < 1) throw InputError("restarts must be at least 1");
    if (cfg.k && *cfg.k < 2) throw InputError("k must be at least 2");
    if (cfg.mix) check_proportions(*cfg.mix, cfg.mix->size());
}

std::string echo(const RunConfig& cfg) {
    std::ostringstream out;
    auto line = [&out](const std::string& key, const std::string& value) {
        out << key << '=' << value << '\n';
    };
    if (cfg.model) line("model", to_string(*cfg.model));
    if (cfg.dim) line("d", std::to_string(*cfg.dim));
    if (!cfg.d_grid.empty()) line("d-grid", join(cfg.d_grid));
    if (!cfg.counts.empty()) line("counts", join(cfg.counts));
    if (cfg.mix) {
        std::string s;
        for (std::size_t i = 0; i < cfg.mix->size(); ++i)
            s += (i ? "," : "") + format_double((*cfg.mix)[i]);
        line("mix", s);
    }
    if (cfg.replicates) line("replicates", std::to_string(*cfg.replicates));
    line("seed", std::to_string(cfg.seed));
    if (cfg.k) line("k", std::to_string(*cfg.k));
    if (cfg.method) line("method", to_string(*cfg.method));
    line("feature-dim", std::to_string(cfg.feature_dim));
    if (cfg.sign_reference) line("sign-reference", to_string(*cfg.sign_reference));
    line("restarts", std::to_string(cfg.restarts));
    if (!cfg.input.empty()) {
        line("input", cfg.input);
        line("orientation", to_string(cfg.csv.layout));
        line("header", cfg.csv.header ? "true" : "false");
        line("labels", to_string(cfg.csv.labels));
        line("skip-leading", std::to_string(cfg.csv.skip_leading));
    }
    line("out", cfg.out);
    return out.str();
}

}  // namespace hdlss
