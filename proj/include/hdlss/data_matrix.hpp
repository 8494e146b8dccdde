#ifndef HDLSS_DATA_MATRIX_HPP
#define HDLSS_DATA_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hdlss {

/// A d x n observation matrix X = (x_1, ..., x_n), stored column-major so
/// each sample is contiguous. Optionally carries the true class of every
/// column (0-based) together with per-class counts n_i.
///
/// Immutable after construction; every entry is finite.
class DataMatrix {
public:
    DataMatrix() = default;

    /// `column_major` must hold d*n finite values; column j occupies
    /// [j*d, (j+1)*d).
    DataMatrix(std::size_t dim, std::size_t size, std::vector<double> column_major);

    /// Same as above, with labels in [0, class_count).
    DataMatrix(std::size_t dim, std::size_t size, std::vector<double> column_major,
               std::vector<std::size_t> labels, std::size_t class_count);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return size_; }

    double operator()(std::size_t row, std::size_t col) const { return values_[col * dim_ + row]; }
    std::span<const double> column(std::size_t j) const {
        return {values_.data() + j * dim_, dim_};
    }
    const std::vector<double>& values() const noexcept { return values_; }

    bool has_labels() const noexcept { return labels_.has_value(); }
    /// Throws InputError when the matrix is unlabeled.
    const std::vector<std::size_t>& labels() const;
    /// n_i per class; empty when unlabeled.
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    std::size_t class_count() const noexcept { return counts_.size(); }

    std::vector<double> column_mean() const;

    /// Columns in the given order; labels follow when present.
    DataMatrix select(std::span<const std::size_t> columns) const;
    /// Unlabeled matrix of the columns whose label equals `cls`.
    DataMatrix class_columns(std::size_t cls) const;
    DataMatrix without_labels() const;

private:
    std::size_t dim_ = 0;
    std::size_t size_ = 0;
    std::vector<double> values_;
    std::optional<std::vector<std::size_t>> labels_;
    std::vector<std::size_t> counts_;
};

}  // namespace hdlss

#endif  // HDLSS_DATA_MATRIX_HPP
