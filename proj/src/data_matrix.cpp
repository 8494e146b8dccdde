#include "hdlss/data_matrix.hpp"

#include <cmath>
#include <string>

#include "hdlss/errors.hpp"

namespace hdlss {

DataMatrix::DataMatrix(std::size_t dim, std::size_t size, std::vector<double> column_major)
    : dim_(dim), size_(size), values_(std::move(column_major)) {
    if (values_.size() != dim_ * size_) {
        throw InputError("data matrix: expected " + std::to_string(dim_ * size_) + " values, got " +
                         std::to_string(values_.size()));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw InputError("data matrix: non-finite entry at row " + std::to_string(k % dim_) +
                             ", column " + std::to_string(k / dim_));
        }
    }
}

DataMatrix::DataMatrix(std::size_t dim, std::size_t size, std::vector<double> column_major,
                       std::vector<std::size_t> labels, std::size_t class_count)
    : DataMatrix(dim, size, std::move(column_major)) {
    if (labels.size() != size_) {
        throw InputError("data matrix: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(size_) + " columns");
    }
    counts_.assign(class_count, 0);
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] >= class_count) {
            throw InputError("data matrix: label of column " + std::to_string(j) +
                             " outside [0, " + std::to_string(class_count) + ")");
        }
        ++counts_[labels[j]];
    }
    labels_ = std::move(labels);
}

const std::vector<std::size_t>& DataMatrix::labels() const {
    if (!labels_) throw InputError("data matrix has no labels");
    return *labels_;
}

std::vector<double> DataMatrix::column_mean() const {
    std::vector<double> mean(dim_, 0.0);
    if (size_ == 0) return mean;
    for (std::size_t j = 0; j < size_; ++j) {
        auto c = column(j);
        for (std::size_t r = 0; r < dim_; ++r) mean[r] += c[r];
    }
    for (double& m : mean) m /= static_cast<double>(size_);
    return mean;
}

DataMatrix DataMatrix::select(std::span<const std::size_t> columns) const {
    std::vector<double> out;
    out.reserve(columns.size() * dim_);
    for (std::size_t j : columns) {
        if (j >= size_) throw InputError("data matrix: column index out of range");
        auto c = column(j);
        out.insert(out.end(), c.begin(), c.end());
    }
    if (!labels_) return DataMatrix(dim_, columns.size(), std::move(out));
    std::vector<std::size_t> lab;
    lab.reserve(columns.size());
    for (std::size_t j : columns) lab.push_back((*labels_)[j]);
    return DataMatrix(dim_, columns.size(), std::move(out), std::move(lab), counts_.size());
}

DataMatrix DataMatrix::class_columns(std::size_t cls) const {
    const auto& lab = labels();
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < size_; ++j)
        if (lab[j] == cls) idx.push_back(j);
    return select(idx).without_labels();
}

DataMatrix DataMatrix::without_labels() const { return DataMatrix(dim_, size_, values_); }

}  // namespace hdlss
