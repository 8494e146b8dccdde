#ifndef HDLSS_TESTS_SUPPORT_HPP
#define HDLSS_TESTS_SUPPORT_HPP

// Generators and brute-force oracles shared by the unit tests. The oracles do
// not call the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hdlss/data_matrix.hpp"
#include "hdlss/linalg.hpp"

namespace testing {

using hdlss::Matrix;
using hdlss::SymMatrix;
using hdlss::Vector;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }

    SymMatrix symmetric(std::size_t n) {
        SymMatrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) a.set(i, j, normal());
        return a;
    }

    /// G G^T with G of size n x rank.
    SymMatrix psd(std::size_t n, std::size_t rank) {
        Matrix g(n, rank);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < rank; ++j) g(i, j) = normal();
        return SymMatrix::from_dense(symmetrize(g * g.transposed()));
    }

    hdlss::DataMatrix data(std::size_t d, std::size_t n, double scale = 1.0) {
        std::vector<double> v(d * n);
        for (double& x : v) x = scale * normal();
        return hdlss::DataMatrix(d, n, std::move(v));
    }

    static Matrix symmetrize(Matrix m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
        return m;
    }

private:
    std::mt19937_64 engine_;
};

/// Roots of det(A - t I) for a symmetric 3x3 A, descending, found by bisection
/// on the cubic between Gershgorin bounds.
inline Vector cubic_eigenvalues(const SymMatrix& a) {
    const double a00 = a(0, 0), a11 = a(1, 1), a22 = a(2, 2);
    const double a01 = a(0, 1), a02 = a(0, 2), a12 = a(1, 2);
    auto det = [&](double t) {
        const double b00 = a00 - t, b11 = a11 - t, b22 = a22 - t;
        return b00 * (b11 * b22 - a12 * a12) - a01 * (a01 * b22 - a12 * a02) +
               a02 * (a01 * a12 - b11 * a02);
    };
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < 3; ++j)
            if (j != i) r += std::abs(a(i, j));
        lo = std::min(lo, a(i, i) - r);
        hi = std::max(hi, a(i, i) + r);
    }
    lo -= 1.0;
    hi += 1.0;
    // det(A - tI) is a cubic with leading coefficient -1: scan for sign changes
    // on a fine grid, then bisect each bracket.
    const int steps = 20000;
    Vector roots;
    double prev_t = lo, prev_f = det(lo);
    for (int s = 1; s <= steps && roots.size() < 3; ++s) {
        const double t = lo + (hi - lo) * s / steps;
        const double f = det(t);
        if (f == 0.0) {
            roots.push_back(t);
        } else if ((prev_f < 0) != (f < 0) && prev_f != 0.0) {
            double x0 = prev_t, x1 = t, f0 = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (x0 + x1);
                const double fm = det(mid);
                if ((fm < 0) == (f0 < 0)) {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            roots.push_back(0.5 * (x0 + x1));
        }
        prev_t = t;
        prev_f = f;
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

/// d x d sample covariance of the columns, computed directly.
inline SymMatrix sample_covariance(const hdlss::DataMatrix& x) {
    const std::size_t d = x.dim(), n = x.size();
    const Vector mean = x.column_mean();
    Matrix s(d, d);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                s(a, b) += (x(a, j) - mean[a]) * (x(b, j) - mean[b]) / static_cast<double>(n - 1);
    return SymMatrix::from_dense(Gen::symmetrize(s));
}

inline double median(Vector v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double mean(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double stddev(const Vector& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace testing

#endif  // HDLSS_TESTS_SUPPORT_HPP
