#pragma once

// Reference implementations kept deliberately naive and independent of the
// engine's data structures: short vectors from an integer coordinate box with
// exact membership tests, and tuple counts from plain nested scans.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "siegel/lattice.hpp"
#include "siegel/smallmat.hpp"

namespace oracle {

using siegel::GramMatrix;
using siegel::LatticeBasis;
using siegel::Mat;
using siegel::Rat64;

inline std::int64_t isqrt(std::int64_t v) {
    std::int64_t s = 0;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
}

// Exact membership: v (half units) is in the lattice iff adj(B)·v is divisible
// by det(B), where B is the half-unit basis matrix.
struct MembershipTester {
    int n;
    std::int64_t det;
    Mat<std::int64_t> adj;

    explicit MembershipTester(const LatticeBasis& l) : n(l.dim()), adj(l.dim(), l.dim()) {
        Mat<std::int64_t> b(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) b.at(r, c) = l.b2(r, c);
        det = siegel::det_int(b);
        if (det == 0) throw std::invalid_argument("degenerate basis");
        Mat<Rat64> br(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) br.at(r, c) = Rat64(b.at(r, c));
        Mat<Rat64> inv = siegel::invert_rational(br);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                Rat64 e = Rat64(det) * inv.at(r, c);
                if (!e.is_integer()) throw std::logic_error("adjugate not integral");
                adj.at(r, c) = e.num();
            }
    }

    bool contains(const std::vector<std::int64_t>& v_half) const {
        for (int r = 0; r < n; ++r) {
            std::int64_t acc = 0;
            for (int c = 0; c < n; ++c) acc += adj.at(r, c) * v_half[c];
            if (acc % det != 0) return false;
        }
        return true;
    }
};

// All lattice vectors with natural norm <= bound, as half-unit coordinate
// vectors sorted lexicographically (includes the zero vector).
inline std::vector<std::vector<std::int64_t>> box_short_vectors(const LatticeBasis& l,
                                                                std::int64_t bound) {
    MembershipTester member(l);
    const int n = l.dim();
    const std::int64_t hmax = isqrt(4 * bound);  // per-coordinate bound in half units
    std::vector<std::vector<std::int64_t>> found;
    std::vector<std::int64_t> h(n, -hmax);
    while (true) {
        std::int64_t norm4 = 0;
        for (int i = 0; i < n; ++i) norm4 += h[i] * h[i];
        if (norm4 <= 4 * bound && member.contains(h)) found.push_back(h);
        int i = n - 1;
        while (i >= 0 && h[i] == hmax) h[i--] = -hmax;
        if (i < 0) break;
        ++h[i];
    }
    std::sort(found.begin(), found.end());
    return found;
}

// 4*<u,v> for half-unit coordinate vectors.
inline std::int64_t dot4(const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v) {
    std::int64_t acc = 0;
    for (size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc;
}

// Number of ordered d-tuples from `vectors` whose Gram matrix equals t,
// by depth-first scan with prefix checks.  `vectors` must contain every
// lattice vector with norm <= max diagonal of t.
inline std::uint64_t count_tuples(const std::vector<std::vector<std::int64_t>>& vectors,
                                  const GramMatrix& t) {
    const int d = t.dim();
    std::vector<const std::vector<std::int64_t>*> chosen(d);
    std::uint64_t total = 0;
    auto rec = [&](auto&& self, int k) -> void {
        for (const auto& v : vectors) {
            if (dot4(v, v) != 4 * t.at(k, k)) continue;
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                if (dot4(*chosen[i], v) != 4 * t.at(i, k)) ok = false;
            if (!ok) continue;
            if (k + 1 == d) {
                ++total;
            } else {
                chosen[k] = &v;
                self(self, k + 1);
            }
        }
    };
    if (d == 0) return 1;
    rec(rec, 0);
    return total;
}

// Full map from Gram matrix to tuple count over all d-tuples with per-slot
// norm <= bound, from plain nested iteration.
inline std::map<GramMatrix, std::uint64_t> tuple_table(
    const std::vector<std::vector<std::int64_t>>& vectors, int d, std::int64_t bound) {
    std::vector<const std::vector<std::int64_t>*> within;
    for (const auto& v : vectors)
        if (dot4(v, v) <= 4 * bound) within.push_back(&v);
    std::map<GramMatrix, std::uint64_t> out;
    std::vector<const std::vector<std::int64_t>*> chosen(d);
    auto rec = [&](auto&& self, int k) -> void {
        if (k == d) {
            GramMatrix g(d);
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) {
                    std::int64_t p4 = dot4(*chosen[i], *chosen[j]);
                    if (p4 % 4 != 0) throw std::logic_error("non-integral product");
                    g.set(i, j, p4 / 4);
                }
            ++out[g];
            return;
        }
        for (const auto* v : within) {
            chosen[k] = v;
            self(self, k + 1);
        }
    };
    if (d > 0) rec(rec, 0);
    return out;
}

}  // namespace oracle
