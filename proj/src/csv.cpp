#include "hdlss/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hdlss/errors.hpp"

namespace hdlss {

SampleLayout parse_sample_layout(const std::string& name) {
    if (name == "samples-as-columns") return SampleLayout::columns;
    if (name == "samples-as-rows") return SampleLayout::rows;
    throw InputError("unknown orientation '" + name +
                     "' (expected samples-as-columns or samples-as-rows)");
}

std::string to_string(SampleLayout layout) {
    return layout == SampleLayout::columns ? "samples-as-columns" : "samples-as-rows";
}

LabelPosition parse_label_position(const std::string& name) {
    if (name == "none") return LabelPosition::none;
    if (name == "first") return LabelPosition::first;
    if (name == "last") return LabelPosition::last;
    throw InputError("unknown label position '" + name + "' (expected none, first or last)");
}

std::string to_string(LabelPosition pos) {
    switch (pos) {
        case LabelPosition::none: return "none";
        case LabelPosition::first: return "first";
        case LabelPosition::last: return "last";
    }
    return "none";
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_number(const std::string& field, std::size_t line, const std::string& source) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (!field.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw InputError(source + ": line " + std::to_string(line) + ": non-numeric cell '" +
                         field + "'");
    }
    return v;
}

std::size_t parse_label(double v, std::size_t line, const std::string& source) {
    if (v < 1.0 || v != static_cast<double>(static_cast<long long>(v)))
        throw InputError(source + ": line " + std::to_string(line) +
                         ": class labels must be positive integers");
    return static_cast<std::size_t>(v) - 1;
}

}  // namespace

DataMatrix parse_csv(std::istream& in, const CsvOptions& options, const std::string& source) {
    std::vector<std::vector<double>> table;
    std::vector<std::size_t> line_of_row;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = options.header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() <= options.skip_leading)
            throw InputError(source + ": line " + std::to_string(line_no) + ": too few fields");
        std::vector<double> row;
        row.reserve(fields.size() - options.skip_leading);
        for (std::size_t f = options.skip_leading; f < fields.size(); ++f)
            row.push_back(parse_number(fields[f], line_no, source));
        if (!table.empty() && row.size() != table.front().size())
            throw InputError(source + ": line " + std::to_string(line_no) + ": ragged row with " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(table.front().size()));
        table.push_back(std::move(row));
        line_of_row.push_back(line_no);
    }
    if (table.empty()) throw InputError(source + ": empty file (no data rows)");

    const std::size_t rows = table.size();
    const std::size_t cols = table.front().size();
    const bool labeled = options.labels != LabelPosition::none;
    std::vector<std::size_t> labels;

    if (options.layout == SampleLayout::columns) {
        std::size_t first_row = 0;
        std::size_t last_row = rows;
        if (labeled) {
            const std::size_t lr = options.labels == LabelPosition::first ? 0 : rows - 1;
            for (double v : table[lr]) labels.push_back(parse_label(v, line_of_row[lr], source));
            if (options.labels == LabelPosition::first) first_row = 1;
            else last_row = rows - 1;
        }
        const std::size_t d = last_row - first_row;
        if (d == 0) throw InputError(source + ": no feature rows besides the label row");
        std::vector<double> values(d * cols);
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t r = 0; r < d; ++r) values[j * d + r] = table[first_row + r][j];
        if (!labeled) return DataMatrix(d, cols, std::move(values));
        std::size_t k = 0;
        for (std::size_t l : labels) k = std::max(k, l + 1);
        return DataMatrix(d, cols, std::move(values), std::move(labels), k);
    }

    std::size_t first_col = 0;
    std::size_t last_col = cols;
    if (labeled) {
        const std::size_t lc = options.labels == LabelPosition::first ? 0 : cols - 1;
        for (std::size_t r = 0; r < rows; ++r)
            labels.push_back(parse_label(table[r][lc], line_of_row[r], source));
        if (options.labels == LabelPosition::first) first_col = 1;
        else last_col = cols - 1;
    }
    const std::size_t d = last_col - first_col;
    if (d == 0) throw InputError(source + ": no feature columns besides the label column");
    std::vector<double> values;
    values.reserve(d * rows);
    for (std::size_t r = 0; r < rows; ++r)
        values.insert(values.end(), table[r].begin() + static_cast<std::ptrdiff_t>(first_col),
                      table[r].begin() + static_cast<std::ptrdiff_t>(last_col));
    if (!labeled) return DataMatrix(d, rows, std::move(values));
    std::size_t k = 0;
    for (std::size_t l : labels) k = std::max(k, l + 1);
    return DataMatrix(d, rows, std::move(values), std::move(labels), k);
}

DataMatrix ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return parse_csv(in, options, path.string());
}

std::string format_double(double value) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
    return std::string(buf, static_cast<std::size_t>(len));
}

CsvTable& CsvTable::add_row(std::vector<std::string> fields) {
    if (!header_.empty() && fields.size() != header_.size())
        throw InputError("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(header_.size()));
    rows_.push_back(std::move(fields));
    return *this;
}

std::string CsvTable::str() const {
    std::ostringstream out;
    auto emit = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << fields[i];
        }
        out << '\n';
    };
    if (!header_.empty()) emit(header_);
    for (const auto& r : rows_) emit(r);
    return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text_file(path, str()); }

CsvTable data_table(const DataMatrix& x) {
    std::vector<std::string> header;
    for (std::size_t j = 0; j < x.size(); ++j) header.push_back("x" + std::to_string(j + 1));
    CsvTable t(std::move(header));
    for (std::size_t r = 0; r < x.dim(); ++r) {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < x.size(); ++j) row.push_back(format_double(x(r, j)));
        t.add_row(std::move(row));
    }
    return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace hdlss
