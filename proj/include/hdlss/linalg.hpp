#ifndef HDLSS_LINALG_HPP
#define HDLSS_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hdlss/data_matrix.hpp"

namespace hdlss {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    Matrix transposed() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Square matrix whose (i,j) and (j,i) entries are always bit-identical.
class SymMatrix {
public:
    SymMatrix() = default;
    /// Zero matrix of the given order (order >= 1).
    explicit SymMatrix(std::size_t order);

    static SymMatrix identity(std::size_t order);
    /// Throws InputError unless `rows` is square and exactly symmetric.
    static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static SymMatrix from_dense(const Matrix& m);

    std::size_t order() const noexcept { return dense_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return dense_(i, j); }
    /// Writes both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double value);
    void add_to_diagonal(double value);

    const Matrix& dense() const noexcept { return dense_; }
    std::span<const double> row(std::size_t i) const { return dense_.row(i); }

    double trace() const;
    double frobenius_squared() const;
    double frobenius_norm() const;
    /// x^T A x
    double quadratic_form(std::span<const double> x) const;
    Vector multiply(std::span<const double> x) const;

    SymMatrix scaled(double factor) const;
    SymMatrix& operator+=(const SymMatrix& other);

private:
    Matrix dense_;
};

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);

/// Eigenpairs sorted by non-increasing eigenvalue; vectors[i] pairs with values[i].
struct EigenDecomposition {
    Vector values;
    std::vector<Vector> vectors;
    int sweeps = 0;
};

struct JacobiOptions {
    int max_sweeps = 100;
    /// Converged when max |a_ij| (i != j) < relative_tolerance * ||a||_F.
    double relative_tolerance = 1e-12;
};

/// Full symmetric eigendecomposition by cyclic Jacobi rotations with
/// threshold sweeps. Ties keep Jacobi output order.
///
/// Throws InputError on a non-finite entry and NumericalError when the
/// sweep budget runs out.
EigenDecomposition sym_eigen(const SymMatrix& a, const JacobiOptions& options = {});

/// Largest eigenvalue by power iteration from a fixed start vector; stops when
/// the Rayleigh quotient changes by less than `relative_tolerance`.
double top_eigenvalue(const SymMatrix& a, double relative_tolerance = 1e-8,
                      int max_iterations = 20000);

/// Diagonal shifts tried in order, each multiplied by trace/order.
struct JitterPolicy {
    std::vector<double> ladder{0.0, 1e-12, 1e-10, 1e-8};
};

struct CholeskyFactor {
    Matrix lower;
    /// The absolute shift eps with L L^T = a + eps I.
    double jitter = 0.0;
};

/// Lower-triangular factor of a PSD matrix. Pivots within round-off of zero
/// produce a zero column, so singular PSD input (including the zero matrix)
/// factors without jitter. Throws NotPositiveSemidefiniteError when every
/// rung of the ladder meets a clearly negative pivot.
CholeskyFactor cholesky(const SymMatrix& a, const JitterPolicy& policy = {});

/// Dual sample covariance (X - Xbar)^T (X - Xbar) / (n - 1), an n x n matrix.
SymMatrix centered_gram(const DataMatrix& x);

/// Sizes above which dense d x d work is refused with ResourceError.
struct DenseLimits {
    std::size_t cholesky_max = 4000;
    std::size_t eigen_max = 500;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace hdlss

#endif  // HDLSS_LINALG_HPP
