#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "siegel/rational.hpp"

namespace siegel {

template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    T& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const T& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }
};

// Fraction-free (Bareiss) determinant.  Intermediates are minors of the input,
// held in __int128 and narrowed with overflow checks.
inline std::int64_t det_int(const Mat<std::int64_t>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    std::vector<__int128> w(m.a.begin(), m.a.end());
    auto at = [&](int r, int c) -> __int128& { return w[static_cast<size_t>(r) * n + c]; };
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                __int128 v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                at(i, j) = v / prev;  // exact by Bareiss identity
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    return narrow128(sign * at(n - 1, n - 1));
}

// Exact positive-semidefiniteness of a symmetric integer matrix: every
// principal minor (all index subsets, not just leading) must be nonnegative.
inline bool is_psd_int(const Mat<std::int64_t>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("psd test of non-square matrix");
    int n = m.rows;
    if (n > 20) throw std::invalid_argument("psd test limited to dim <= 20");
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        Mat<std::int64_t> sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
        for (size_t r = 0; r < idx.size(); ++r)
            for (size_t c = 0; c < idx.size(); ++c) sub.at(static_cast<int>(r), static_cast<int>(c)) = m.at(idx[r], idx[c]);
        if (det_int(sub) < 0) return false;
    }
    return true;
}

// Solve A x = b exactly over the rationals; nullopt when A is singular.
inline std::optional<std::vector<Rat64>> solve_rational(const Mat<std::int64_t>& a64,
                                                        const std::vector<std::int64_t>& b64) {
    if (a64.rows != a64.cols || a64.rows != static_cast<int>(b64.size()))
        throw std::invalid_argument("solve: shape mismatch");
    int n = a64.rows;
    Mat<Rat64> a(n, n + 1);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a.at(r, c) = Rat64(a64.at(r, c));
        a.at(r, n) = Rat64(b64[r]);
    }
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (!a.at(i, k).is_zero()) { p = i; break; }
        if (p < 0) return std::nullopt;
        if (p != k)
            for (int j = k; j <= n; ++j) std::swap(a.at(k, j), a.at(p, j));
        for (int i = k + 1; i < n; ++i) {
            if (a.at(i, k).is_zero()) continue;
            Rat64 f = a.at(i, k) / a.at(k, k);
            for (int j = k; j <= n; ++j) a.at(i, j) = a.at(i, j) - f * a.at(k, j);
        }
    }
    std::vector<Rat64> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Rat64 s = a.at(i, n);
        for (int j = i + 1; j < n; ++j) s = s - a.at(i, j) * x[j];
        x[i] = s / a.at(i, i);
    }
    return x;
}

inline Mat<Rat64> invert_rational(const Mat<Rat64>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
    int n = m.rows;
    Mat<Rat64> a(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a.at(r, c) = m.at(r, c);
        a.at(r, n + r) = Rat64(1);
    }
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (!a.at(i, k).is_zero()) { p = i; break; }
        if (p < 0) throw std::domain_error("singular matrix has no inverse");
        if (p != k)
            for (int j = 0; j < 2 * n; ++j) std::swap(a.at(k, j), a.at(p, j));
        Rat64 piv = a.at(k, k);
        for (int j = 0; j < 2 * n; ++j) a.at(k, j) = a.at(k, j) / piv;
        for (int i = 0; i < n; ++i) {
            if (i == k || a.at(i, k).is_zero()) continue;
            Rat64 f = a.at(i, k);
            for (int j = 0; j < 2 * n; ++j) a.at(i, j) = a.at(i, j) - f * a.at(k, j);
        }
    }
    Mat<Rat64> inv(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.at(r, c) = a.at(r, n + c);
    return inv;
}

inline Rat64 det_rational(const Mat<Rat64>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
    int n = m.rows;
    Mat<Rat64> a = m;
    Rat64 det(1);
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (!a.at(i, k).is_zero()) { p = i; break; }
        if (p < 0) return Rat64(0);
        if (p != k) {
            for (int j = k; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            det = -det;
        }
        det = det * a.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (a.at(i, k).is_zero()) continue;
            Rat64 f = a.at(i, k) / a.at(k, k);
            for (int j = k; j < n; ++j) a.at(i, j) = a.at(i, j) - f * a.at(k, j);
        }
    }
    return det;
}

inline Mat<double> mat_mul(const Mat<double>& x, const Mat<double>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat<double> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

inline Mat<double> invert_double(const Mat<double>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
    int n = m.rows;
    Mat<double> a(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a.at(r, c) = m.at(r, c);
        a.at(r, n + r) = 1.0;
    }
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a.at(i, k)) > std::abs(a.at(p, k))) p = i;
        if (a.at(p, k) == 0.0) throw std::domain_error("singular matrix has no inverse");
        if (p != k)
            for (int j = 0; j < 2 * n; ++j) std::swap(a.at(k, j), a.at(p, j));
        double piv = a.at(k, k);
        for (int j = 0; j < 2 * n; ++j) a.at(k, j) /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == k || a.at(i, k) == 0.0) continue;
            double f = a.at(i, k);
            for (int j = 0; j < 2 * n; ++j) a.at(i, j) -= f * a.at(k, j);
        }
    }
    Mat<double> inv(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.at(r, c) = a.at(r, n + c);
    return inv;
}

inline double det_double(const Mat<double>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
    int n = m.rows;
    Mat<double> a = m;
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a.at(i, k)) > std::abs(a.at(p, k))) p = i;
        if (a.at(p, k) == 0.0) return 0.0;
        if (p != k) {
            for (int j = k; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            det = -det;
        }
        det *= a.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            double f = a.at(i, k) / a.at(k, k);
            for (int j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
        }
    }
    return det;
}

}  // namespace siegel
