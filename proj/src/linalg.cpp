#include "hdlss/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "hdlss/errors.hpp"

namespace hdlss {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InputError("matrix product: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InputError("matrix-vector product: size mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------

SymMatrix::SymMatrix(std::size_t order) : dense_(order, order) {
    if (order == 0) throw InputError("symmetric matrix order must be at least 1");
}

SymMatrix SymMatrix::identity(std::size_t order) {
    SymMatrix m(order);
    m.add_to_diagonal(1.0);
    return m;
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != rows.size()) throw InputError("symmetric matrix: rows must be square");
        std::size_t j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return from_dense(m);
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("symmetric matrix: input is not square");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (!(m(i, j) == m(j, i)) && !(std::isnan(m(i, j)) && std::isnan(m(j, i)))) {
                throw InputError("symmetric matrix: entries (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") and its transpose differ");
            }
    SymMatrix s(m.rows());
    s.dense_ = m;
    return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
    dense_(i, j) = value;
    dense_(j, i) = value;
}

void SymMatrix::add_to_diagonal(double value) {
    for (std::size_t i = 0; i < order(); ++i) dense_(i, i) += value;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order(); ++i) t += dense_(i, i);
    return t;
}

double SymMatrix::frobenius_squared() const {
    double s = 0.0;
    for (double v : dense_.data()) s += v * v;
    return s;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(frobenius_squared()); }

double SymMatrix::quadratic_form(std::span<const double> x) const {
    if (x.size() != order()) throw InputError("quadratic form: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < order(); ++i) s += x[i] * dot(row(i), x);
    return s;
}

Vector SymMatrix::multiply(std::span<const double> x) const { return dense_ * x; }

SymMatrix SymMatrix::scaled(double factor) const {
    SymMatrix s = *this;
    for (std::size_t i = 0; i < order(); ++i)
        for (auto& v : s.dense_.row(i)) v *= factor;
    return s;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
    if (other.order() != order()) throw InputError("symmetric matrix sum: order mismatch");
    for (std::size_t i = 0; i < order(); ++i) {
        auto dst = dense_.row(i);
        auto src = other.row(i);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    return *this;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix c = a;
    c += b.scaled(-1.0);
    return c;
}

// ---------------------------------------------------------------------------

namespace {

double max_off_diagonal(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& input, const JacobiOptions& options) {
    const std::size_t n = input.order();
    for (double v : input.dense().data())
        if (!std::isfinite(v)) throw InputError("sym_eigen: non-finite matrix entry");

    Matrix a = input.dense();
    // Row p of vt is the current estimate of eigenvector p.
    Matrix vt = Matrix::identity(n);
    const double fro = input.frobenius_norm();
    const double target = options.relative_tolerance * fro;

    int sweep = 0;
    double residual = max_off_diagonal(a);
    while (residual >= target && residual > 0.0) {
        if (sweep == options.max_sweeps) {
            std::ostringstream msg;
            msg << "sym_eigen: no convergence after " << sweep
                << " sweeps; max off-diagonal residual " << residual << " (target " << target << ")";
            throw NumericalError(msg.str());
        }
        ++sweep;
        // Early sweeps only rotate the larger elements.
        double threshold = 0.0;
        if (sweep < 4) {
            double off = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) off += std::abs(a(i, j));
            threshold = 0.2 * off / static_cast<double>(n * n);
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0 || std::abs(apq) <= threshold) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    const double np = arp - s * (arq + tau * arp);
                    const double nq = arq + s * (arp - tau * arq);
                    a(r, p) = np;
                    a(p, r) = np;
                    a(r, q) = nq;
                    a(q, r) = nq;
                }
                auto vp = vt.row(p);
                auto vq = vt.row(q);
                for (std::size_t r = 0; r < n; ++r) {
                    const double xp = vp[r];
                    const double xq = vq[r];
                    vp[r] = xp - s * (xq + tau * xp);
                    vq[r] = xq + s * (xp - tau * xq);
                }
            }
        }
        residual = max_off_diagonal(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition out;
    out.sweeps = sweep;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t idx : order) {
        out.values.push_back(a(idx, idx));
        auto v = vt.row(idx);
        out.vectors.emplace_back(v.begin(), v.end());
    }
    return out;
}

double top_eigenvalue(const SymMatrix& a, double relative_tolerance, int max_iterations) {
    const std::size_t n = a.order();
    // Fixed, non-structured start so it is not orthogonal to a patterned top vector.
    Vector v(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    for (auto& x : v) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        x = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    double nv = norm(v);
    for (auto& x : v) x /= nv;

    double rayleigh = a.quadratic_form(v);
    for (int it = 0; it < max_iterations; ++it) {
        Vector w = a.multiply(v);
        const double nw = norm(w);
        if (nw == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        const double next = a.quadratic_form(v);
        if (std::abs(next - rayleigh) <= relative_tolerance * std::abs(next)) return next;
        rayleigh = next;
    }
    throw NumericalError("top_eigenvalue: power iteration did not converge");
}

CholeskyFactor cholesky(const SymMatrix& a, const JitterPolicy& policy) {
    const std::size_t n = a.order();
    for (double v : a.dense().data())
        if (!std::isfinite(v)) throw InputError("cholesky: non-finite matrix entry");

    const double scale = std::abs(a.trace()) / static_cast<double>(n);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));

    std::size_t failed_pivot = 0;
    double failed_value = 0.0;
    for (double rung : policy.ladder) {
        const double eps = rung * scale;
        const double zero_tol = 1e-13 * (max_diag + eps);
        Matrix l(n, n);
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            auto lj = l.row(j);
            const double pivot = a(j, j) + eps - dot(lj.first(j), lj.first(j));
            if (pivot > zero_tol) {
                const double root = std::sqrt(pivot);
                lj[j] = root;
                for (std::size_t i = j + 1; i < n; ++i) {
                    auto li = l.row(i);
                    li[j] = (a(i, j) - dot(li.first(j), lj.first(j))) / root;
                }
            } else if (pivot < -zero_tol) {
                ok = false;
                failed_pivot = j;
                failed_value = pivot;
            }
            // |pivot| within round-off: column j stays zero.
        }
        if (ok) return {std::move(l), eps};
    }
    throw NotPositiveSemidefiniteError(failed_pivot, failed_value);
}

SymMatrix centered_gram(const DataMatrix& x) {
    const std::size_t n = x.size();
    const std::size_t d = x.dim();
    if (n < 2) throw InputError("centered_gram: need at least 2 samples, got " + std::to_string(n));
    const Vector mean = x.column_mean();
    std::vector<double> centered(x.values());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < d; ++r) centered[j * d + r] -= mean[r];

    SymMatrix g(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        std::span<const double> cj(centered.data() + j * d, d);
        for (std::size_t l = j; l < n; ++l) {
            std::span<const double> cl(centered.data() + l * d, d);
            g.set(j, l, dot(cj, cl) / denom);
        }
    }
    return g;
}

}  // namespace hdlss
