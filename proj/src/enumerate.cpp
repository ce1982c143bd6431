#include "siegel/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace siegel {

CholeskyFactor cholesky_upper(const Mat<double>& a) {
    if (a.rows != a.cols) throw std::invalid_argument("cholesky of non-square matrix");
    int n = a.rows;
    double trace = 0;
    for (int i = 0; i < n; ++i) trace += a.at(i, i);
    const double pivot_floor = 1e-12 * trace;
    CholeskyFactor f;
    f.dim = n;
    f.r.assign(static_cast<size_t>(n) * n, 0.0);
    auto r = [&](int i, int j) -> double& { return f.r[static_cast<size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = a.at(i, j);
            for (int k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
            if (i == j) {
                if (s <= pivot_floor)
                    throw NotPositiveDefinite(i, "matrix is not positive definite: pivot " +
                                                     std::to_string(i) + " = " + std::to_string(s));
                r(i, i) = std::sqrt(s);
            } else {
                r(i, j) = s / r(i, i);
            }
        }
    }
    return f;
}

const ShortVectorTable::Group* ShortVectorTable::group(std::int64_t norm4) const {
    auto it = std::lower_bound(groups.begin(), groups.end(), norm4,
                               [](const Group& g, std::int64_t v) { return g.norm4 < v; });
    if (it == groups.end() || it->norm4 != norm4) return nullptr;
    return &*it;
}

std::size_t ShortVectorTable::total() const {
    std::size_t t = 0;
    for (const auto& g : groups) t += g.count;
    return t;
}

std::string norm4_str(std::int64_t norm4) {
    return Rat64(norm4, 4).str();
}

void ShortVectorTable::dump(std::ostream& os) const {
    for (const auto& g : groups) {
        std::string norm = norm4_str(g.norm4);
        for (std::size_t v = 0; v < g.count; ++v) {
            os << norm << ':';
            for (int i = 0; i < dim; ++i) os << ' ' << g.ambient[v * dim + i];
            os << '\n';
        }
    }
}

double predict_vector_count(const LatticeBasis& l, double bound_natural) {
    if (bound_natural <= 0) return 1.0;
    int n = l.dim();
    Mat<double> g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = l.gram4(i, j) / 4.0;
    double covol = std::sqrt(std::max(det_double(g), 1e-300));
    // vol(ball_n(sqrt(B))) = pi^{n/2} B^{n/2} / Gamma(n/2+1)
    double log_vol = 0.5 * n * std::log(M_PI * bound_natural) - std::lgamma(0.5 * n + 1.0);
    return std::exp(log_vol - std::log(covol)) + 1.0;
}

void enumerate_vectors(const LatticeBasis& l, std::int64_t bound4, const RunConfig& cfg,
                       const VectorVisitor& visit) {
    if (bound4 < 0) throw std::invalid_argument("negative enumeration bound");
    const int n = l.dim();
    const double bound_nat = static_cast<double>(bound4) / 4.0;

    double predicted = predict_vector_count(l, bound_nat);
    if (predicted > static_cast<double>(cfg.cap))
        throw CapExceeded(predicted, "enumeration refused: predicted " + std::to_string(predicted) +
                                         " vectors exceeds cap " + std::to_string(cfg.cap));

    Mat<double> g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = l.gram4(i, j) / 4.0;
    CholeskyFactor R = cholesky_upper(g);
    std::vector<double> rdiag2(n), mu(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        rdiag2[i] = R.at(i, i) * R.at(i, i);
        for (int j = i + 1; j < n; ++j) mu[static_cast<size_t>(i) * n + j] = R.at(i, j) / R.at(i, i);
    }

    // Inflated bound: float rounding may only over-admit candidates; the exact
    // quarter-unit norm filters them below.
    const double budget = bound_nat * (1.0 + 1e-6) + 1e-9;

    std::vector<std::int64_t> x(n, 0);
    std::vector<std::int32_t> x32(n, 0);
    std::vector<double> center(n, 0.0), used(n + 1, 0.0);
    std::vector<std::int64_t> lo(n, 0), hi(n, 0);
    std::vector<std::int32_t> amb(n, 0);  // B * x incrementally, half units
    std::uint64_t emitted = 0;

    // levels n-1 .. 0; level i fixes coordinate x_i after all deeper ones
    int level = n - 1;
    bool descending = true;
    while (level <= n - 1) {
        if (descending) {
            double c = 0.0;
            for (int j = level + 1; j < n; ++j) c += mu[static_cast<size_t>(level) * n + j] * x[j];
            center[level] = c;
            double rem = budget - used[level + 1];
            if (rem < 0) rem = 0;
            double s = std::sqrt(rem / rdiag2[level]) + 1e-9;
            lo[level] = static_cast<std::int64_t>(std::ceil(-c - s));
            hi[level] = static_cast<std::int64_t>(std::floor(-c + s));
            x[level] = lo[level];
        } else {
            ++x[level];
        }
        if (x[level] > hi[level]) {
            ++level;
            descending = false;
            continue;
        }
        double off = x[level] + center[level];
        used[level] = used[level + 1] + rdiag2[level] * off * off;
        if (used[level] > budget) {
            // interval edges can overshoot because of the slack; try the next
            // candidate at this level rather than abandoning it
            descending = false;
            continue;
        }
        if (level == 0) {
            // exact verification in half units
            std::int64_t norm4 = 0;
            for (int r = 0; r < n; ++r) {
                std::int64_t s = 0;
                for (int c = 0; c < n; ++c) s += x[c] * l.b2(r, c);
                if (s < INT32_MIN || s > INT32_MAX) throw std::overflow_error("ambient coordinate overflow");
                amb[r] = static_cast<std::int32_t>(s);
                norm4 += s * s;
            }
            if (norm4 <= bound4) {
                if (++emitted > cfg.cap)
                    throw CapExceeded(static_cast<double>(emitted),
                                      "enumeration refused: vector count exceeds cap " + std::to_string(cfg.cap));
                for (int i = 0; i < n; ++i) x32[i] = static_cast<std::int32_t>(x[i]);
                visit(x32.data(), amb.data(), norm4);
            }
            descending = false;
        } else {
            --level;
            descending = true;
        }
    }
}

ShortVectorTable short_vectors(const LatticeBasis& l, std::int64_t bound_natural, const RunConfig& cfg) {
    if (bound_natural < 0) throw std::invalid_argument("negative enumeration bound");
    const int n = l.dim();
    struct Row {
        std::int64_t norm4;
        std::vector<std::int32_t> amb, coords;
    };
    std::vector<Row> rows;
    enumerate_vectors(l, bound_natural * 4, cfg, [&](const std::int32_t* x, const std::int32_t* a, std::int64_t q4) {
        Row r;
        r.norm4 = q4;
        r.amb.assign(a, a + n);
        r.coords.assign(x, x + n);
        rows.push_back(std::move(r));
    });
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.norm4 != b.norm4) return a.norm4 < b.norm4;
        return a.amb < b.amb;
    });
    ShortVectorTable t;
    t.dim = n;
    t.bound4 = bound_natural * 4;
    for (auto& r : rows) {
        if (t.groups.empty() || t.groups.back().norm4 != r.norm4) {
            t.groups.push_back({r.norm4, 0, {}, {}});
        }
        auto& g = t.groups.back();
        ++g.count;
        g.coords.insert(g.coords.end(), r.coords.begin(), r.coords.end());
        g.ambient.insert(g.ambient.end(), r.amb.begin(), r.amb.end());
    }
    return t;
}

std::map<std::int64_t, std::uint64_t> count_by_norm4(const LatticeBasis& l, std::int64_t bound4,
                                                     const RunConfig& cfg) {
    std::map<std::int64_t, std::uint64_t> counts;
    enumerate_vectors(l, bound4, cfg,
                      [&](const std::int32_t*, const std::int32_t*, std::int64_t q4) { ++counts[q4]; });
    return counts;
}

std::map<std::int64_t, std::uint64_t> count_by_norm(const LatticeBasis& l, std::int64_t bound_natural,
                                                    const RunConfig& cfg) {
    auto q = count_by_norm4(l, bound_natural * 4, cfg);
    std::map<std::int64_t, std::uint64_t> counts;
    for (auto& [norm4, c] : q) {
        if (norm4 % 4 != 0)
            throw std::domain_error("lattice " + l.label() + " has non-integer norm " + norm4_str(norm4) +
                                    "; use count_by_norm4");
        counts[norm4 / 4] = c;
    }
    return counts;
}

}  // namespace siegel
