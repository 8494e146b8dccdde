#ifndef HDLSS_CSV_HPP
#define HDLSS_CSV_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "hdlss/data_matrix.hpp"
#include "hdlss/linalg.hpp"

namespace hdlss {

/// How a table maps onto X. Gene-expression files put genes in rows and
/// samples in columns, which is the default.
enum class SampleLayout { columns, rows };
enum class LabelPosition { none, first, last };

SampleLayout parse_sample_layout(const std::string& name);
std::string to_string(SampleLayout layout);
LabelPosition parse_label_position(const std::string& name);
std::string to_string(LabelPosition pos);

struct CsvOptions {
    SampleLayout layout = SampleLayout::columns;
    bool header = false;
    /// A row (samples-as-columns) or column (samples-as-rows) of 1-based
    /// integer class labels.
    LabelPosition labels = LabelPosition::none;
    /// Fields dropped from the start of every line (e.g. a sample id column).
    std::size_t skip_leading = 0;
};

/// Comma-separated, '.' decimal, optional single header row. Errors name the
/// 1-based line of the offending input.
DataMatrix parse_csv(std::istream& in, const CsvOptions& options,
                     const std::string& source = "<input>");
DataMatrix ingest_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Shortest text with 17 significant digits; strtod reads it back bit-exactly.
std::string format_double(double value);

/// Accumulates rows and writes them with LF endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable& add_row(std::vector<std::string> fields);
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// d rows by n columns with header x1..xn (genes-as-rows layout).
CsvTable data_table(const DataMatrix& x);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hdlss

#endif  // HDLSS_CSV_HPP
