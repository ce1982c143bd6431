#include "siegel/theta.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <unordered_map>

#include "siegel/parallel.hpp"

namespace siegel {

namespace {

// 4 * <u,v> from half-unit coordinates; fixed-width unrolls for the hot dims.
template <int N>
inline std::int64_t dot_half2_fixed(const std::int32_t* a, const std::int32_t* b) {
    std::int64_t s = 0;
    for (int i = 0; i < N; ++i) s += static_cast<std::int64_t>(a[i]) * b[i];
    return s;
}

inline std::int64_t dot_half2(const std::int32_t* a, const std::int32_t* b, int n) {
    switch (n) {
        case 16: return dot_half2_fixed<16>(a, b);
        case 8: return dot_half2_fixed<8>(a, b);
        case 4: return dot_half2_fixed<4>(a, b);
        default: {
            std::int64_t s = 0;
            for (int i = 0; i < n; ++i) s += static_cast<std::int64_t>(a[i]) * b[i];
            return s;
        }
    }
}

constexpr std::size_t kSmallGroup = 4096;     // bitset masks up to this group size
constexpr std::size_t kRowCacheBits = 1u << 25;  // 4 MB per cached row matrix

inline std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

inline std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
    return c;
}

}  // namespace

std::uint64_t CoefficientTable::total() const {
    std::uint64_t t = 0;
    for (auto& [k, v] : entries) t += v;
    return t;
}

std::uint64_t CoefficientTable::at(const GramMatrix& t) const {
    auto it = entries.find(t);
    return it == entries.end() ? 0 : it->second;
}

ThetaEngine::ThetaEngine(LatticeBasis l, RunConfig cfg) : l_(std::move(l)), cfg_(std::move(cfg)) {
    table_.dim = l_.dim();
    table_.bound4 = -1;
}

void ThetaEngine::ensure_table(std::int64_t bound4) {
    if (table_.bound4 >= bound4) return;
    if (bound4 % 4 != 0) bound4 += 4 - bound4 % 4;
    table_ = short_vectors(l_, bound4 / 4, cfg_);
    rowcache_.clear();  // rows index into group arrays, which just changed
}

std::uint64_t ThetaEngine::count_norm_exact(std::int64_t norm4) {
    if (norm4 <= table_.bound4) {
        const auto* g = table_.group(norm4);
        return g ? g->count : 0;
    }
    std::uint64_t c = 0;
    enumerate_vectors(l_, norm4, cfg_, [&](const std::int32_t*, const std::int32_t*, std::int64_t q4) {
        if (q4 == norm4) ++c;
    });
    return c;
}

const ThetaEngine::BitRows* ThetaEngine::cached_rows(std::int64_t a_norm4, std::int64_t b_norm4,
                                                     std::int64_t value4) {
    std::array<std::int64_t, 3> key{a_norm4, b_norm4, value4};
    auto it = rowcache_.find(key);
    if (it != rowcache_.end()) return it->second.words == 0 ? nullptr : &it->second;
    const auto* ga = table_.group(a_norm4);
    const auto* gb = table_.group(b_norm4);
    BitRows rows;
    if (ga && gb && gb->count <= kSmallGroup && ga->count * gb->count <= kRowCacheBits) {
        const int n = l_.dim();
        rows.words = word_count(gb->count);
        rows.bits.assign(ga->count * rows.words, 0);
        for (std::size_t i = 0; i < ga->count; ++i) {
            const std::int32_t* u = ga->ambient.data() + i * n;
            std::uint64_t* row = rows.bits.data() + i * rows.words;
            for (std::size_t j = 0; j < gb->count; ++j)
                if (dot_half2(u, gb->ambient.data() + j * n, n) == value4) row[j / 64] |= 1ull << (j % 64);
        }
    }
    auto [pos, ok] = rowcache_.emplace(key, std::move(rows));
    (void)ok;
    return pos->second.words == 0 ? nullptr : &pos->second;
}

std::uint64_t ThetaEngine::representation_number(const GramMatrix& t) {
    const int d = t.dim();
    if (d < 1) throw std::invalid_argument("representation number needs degree >= 1");
    if (!t.is_psd()) return 0;
    if (l_.is_even())
        for (int i = 0; i < d; ++i)
            if (t.at(i, i) % 2 != 0) return 0;

    // zero-norm slots force the zero vector; psd already guarantees their rows vanish
    std::vector<int> slots;
    for (int i = 0; i < d; ++i)
        if (t.at(i, i) != 0) slots.push_back(i);
    const int m = static_cast<int>(slots.size());
    if (m == 0) return 1;
    std::sort(slots.begin(), slots.end(), [&](int a, int b) {
        if (t.at(a, a) != t.at(b, b)) return t.at(a, a) > t.at(b, b);
        return a < b;
    });

    std::vector<std::int64_t> norm4(m);
    std::vector<std::vector<std::int64_t>> want4(m, std::vector<std::int64_t>(m));
    for (int i = 0; i < m; ++i) {
        norm4[i] = 4 * t.at(slots[i], slots[i]);
        for (int j = 0; j < m; ++j) want4[i][j] = 4 * t.at(slots[i], slots[j]);
    }
    if (m == 1) return count_norm_exact(norm4[0]);

    std::int64_t store4 = 0;
    for (int i = 1; i < m; ++i) store4 = std::max(store4, norm4[i]);
    ensure_table(store4);

    const int n = l_.dim();
    std::vector<const ShortVectorTable::Group*> groups(m, nullptr);
    for (int i = 1; i < m; ++i) {
        groups[i] = table_.group(norm4[i]);
        if (!groups[i]) return 0;
    }
    std::vector<bool> small(m, false);
    std::vector<std::size_t> words(m, 0);
    for (int i = 1; i < m; ++i) {
        small[i] = groups[i]->count <= kSmallGroup;
        words[i] = word_count(groups[i]->count);
    }

    const bool stream_first = norm4[0] > table_.bound4;
    const ShortVectorTable::Group* g0 = stream_first ? nullptr : table_.group(norm4[0]);
    if (!stream_first && !g0) return 0;

    // Pre-build row caches usable from stored slots so workers only read them.
    for (int k = 0; k < m; ++k) {
        std::int64_t from = norm4[k];
        if (k == 0 && stream_first) continue;
        for (int j = std::max(k + 1, 1); j < m; ++j)
            if (small[j]) cached_rows(from, norm4[j], want4[k][j]);
    }

    struct Worker {
        ThetaEngine* eng;
        const std::vector<int64_t>* norm4;
        const std::vector<std::vector<std::int64_t>>* want4;
        const std::vector<const ShortVectorTable::Group*>* groups;
        const std::vector<bool>* small;
        const std::vector<std::size_t>* words;
        int m, n;
        std::uint64_t budget, visited = 0;
        // mask[k][j]: candidate bitset of slot j after choosing slots < k
        std::vector<std::vector<std::vector<std::uint64_t>>> mask;
        std::vector<std::vector<std::uint64_t>> scratch;  // per-slot scratch row
        std::vector<const std::int32_t*> chosen;

        void init() {
            mask.assign(m + 1, std::vector<std::vector<std::uint64_t>>(m));
            scratch.assign(m, {});
            for (int k = 0; k <= m; ++k)
                for (int j = 1; j < m; ++j)
                    if ((*small)[j]) mask[k][j].assign((*words)[j], 0);
            for (int j = 1; j < m; ++j)
                if ((*small)[j]) scratch[j].assign((*words)[j], 0);
            chosen.assign(m, nullptr);
        }

        void bump() {
            if (++visited > budget)
                throw CapExceeded(static_cast<double>(visited),
                                  "representation number refused: visited partial tuples exceed cap " +
                                      std::to_string(budget));
        }

        // row of candidate bits of slot j for prefix vector u (stored slot k or streamed)
        const std::uint64_t* row_for(int k, bool from_stream, std::size_t u_index, const std::int32_t* u,
                                     int j) {
            if (!from_stream) {
                const BitRows* cached =
                    eng->cached_rows((*norm4)[k], (*norm4)[j], (*want4)[k][j]);
                if (cached) return cached->row(u_index);
            }
            const auto* gj = (*groups)[j];
            std::uint64_t* out = scratch[j].data();
            std::fill(scratch[j].begin(), scratch[j].end(), 0);
            const std::int64_t target = (*want4)[k][j];
            for (std::size_t v = 0; v < gj->count; ++v)
                if (dot_half2(u, gj->ambient.data() + v * n, n) == target) out[v / 64] |= 1ull << (v % 64);
            return out;
        }

        std::uint64_t descend(int k) {
            const auto* gk = (*groups)[k];
            if (k == m - 1) {
                if ((*small)[k]) {
                    std::uint64_t c = 0;
                    for (std::size_t w = 0; w < (*words)[k]; ++w) c += std::popcount(mask[k][k][w]);
                    return c;
                }
                // big last slot: blocked scan against the whole prefix
                std::uint64_t c = 0;
                for (std::size_t v = 0; v < gk->count; ++v) {
                    const std::int32_t* y = gk->ambient.data() + v * n;
                    bool ok = true;
                    for (int i = 0; i < k; ++i)
                        if (dot_half2(chosen[i], y, n) != (*want4)[i][k]) { ok = false; break; }
                    c += ok;
                }
                return c;
            }
            std::uint64_t total = 0;
            auto step = [&](std::size_t idx, const std::int32_t* y) {
                bump();
                chosen[k] = y;
                for (int j = k + 1; j < m; ++j) {
                    if (!(*small)[j]) continue;
                    const std::uint64_t* r = row_for(k, false, idx, y, j);
                    for (std::size_t w = 0; w < (*words)[j]; ++w) mask[k + 1][j][w] = mask[k][j][w] & r[w];
                }
                total += descend(k + 1);
            };
            if ((*small)[k]) {
                for (std::size_t w = 0; w < (*words)[k]; ++w) {
                    std::uint64_t bits = mask[k][k][w];
                    while (bits) {
                        std::size_t v = w * 64 + std::countr_zero(bits);
                        bits &= bits - 1;
                        step(v, gk->ambient.data() + v * n);
                    }
                }
            } else {
                for (std::size_t v = 0; v < gk->count; ++v) {
                    const std::int32_t* y = gk->ambient.data() + v * n;
                    bool ok = true;
                    for (int i = 0; i < k; ++i)
                        if (dot_half2(chosen[i], y, n) != (*want4)[i][k]) { ok = false; break; }
                    if (ok) step(v, y);
                }
            }
            return total;
        }

        std::uint64_t top(std::size_t u_index, const std::int32_t* u, bool from_stream) {
            bump();
            chosen[0] = u;
            for (int j = 1; j < m; ++j) {
                if (!(*small)[j]) continue;
                const std::uint64_t* r = row_for(0, from_stream, u_index, u, j);
                std::copy(r, r + (*words)[j], mask[1][j].begin());
            }
            return descend(1);
        }
    };

    auto make_worker = [&]() {
        Worker w;
        w.eng = this;
        w.norm4 = &norm4;
        w.want4 = &want4;
        w.groups = &groups;
        w.small = &small;
        w.words = &words;
        w.m = m;
        w.n = n;
        w.budget = cfg_.cap;
        w.init();
        return w;
    };

    if (stream_first) {
        Worker w = make_worker();
        std::uint64_t total = 0;
        enumerate_vectors(l_, norm4[0], cfg_, [&](const std::int32_t*, const std::int32_t* amb, std::int64_t q4) {
            if (q4 != norm4[0]) return;
            total += w.top(0, amb, true);
        });
        return total;
    }

    const unsigned threads = cfg_.effective_threads();
    return parallel_sum(g0->count, threads, [&](std::size_t lo, std::size_t hi) {
        Worker w = make_worker();
        std::uint64_t total = 0;
        for (std::size_t u = lo; u < hi; ++u) total += w.top(u, g0->ambient.data() + u * n, false);
        return total;
    });
}

namespace {

struct UniverseView {
    int n = 0;
    std::size_t count = 0;
    std::vector<std::int32_t> amb;     // count * n
    std::vector<std::int64_t> norm;    // natural units
};

UniverseView flatten_universe(const ShortVectorTable& t) {
    UniverseView u;
    u.n = t.dim;
    for (const auto& g : t.groups) {
        if (g.norm4 % 4 != 0) throw std::domain_error("coefficient table needs an integral lattice");
        for (std::size_t v = 0; v < g.count; ++v) {
            u.amb.insert(u.amb.end(), g.ambient.begin() + v * t.dim, g.ambient.begin() + (v + 1) * t.dim);
            u.norm.push_back(g.norm4 / 4);
        }
        u.count += g.count;
    }
    return u;
}

}  // namespace

CoefficientTable ThetaEngine::coefficient_table(int degree, std::int64_t diag_bound) {
    if (degree < 1) throw std::invalid_argument("coefficient table needs degree >= 1");
    if (diag_bound < 0) throw std::invalid_argument("coefficient table needs a nonnegative bound");
    if (!l_.is_integral())
        throw std::domain_error("coefficient table needs an integral lattice, got " + l_.label());

    CoefficientTable out;
    out.lattice_label = l_.label();
    out.degree = degree;
    out.diag_bound = diag_bound;

    auto counts = count_by_norm(l_, diag_bound, cfg_);
    long double n_total = 0;
    for (auto& [q, c] : counts) n_total += c;
    long double tuples = 1;
    for (int i = 0; i < degree; ++i) tuples *= n_total;
    if (tuples > static_cast<long double>(cfg_.cap))
        throw CapExceeded(static_cast<double>(tuples),
                          "coefficient table refused: " + std::to_string(static_cast<double>(tuples)) +
                              " tuples exceed cap " + std::to_string(cfg_.cap));

    if (degree == 1) {
        for (auto& [q, c] : counts) {
            GramMatrix t(1);
            t.set(0, 0, q);
            out.entries[t] = c;
        }
        return out;
    }

    ensure_table(diag_bound * 4);
    UniverseView u = flatten_universe(table_);
    const int d = degree;
    const int n = u.n;
    const std::size_t N = u.count;
    if (N == 0) return out;

    const int pairs = d * (d - 1) / 2;
    const std::int64_t nd = diag_bound + 1;      // diagonal digits 0..B
    const std::int64_t np = 2 * diag_bound + 1;  // product digits -B..B

    long double bucket_est = 1;
    for (int i = 0; i < d; ++i) bucket_est *= nd;
    for (int i = 0; i < pairs; ++i) bucket_est *= np;

    auto pair_index = [&](int i, int j) {  // i < j
        return i * d - i * (i + 1) / 2 + (j - i - 1);
    };

    if (N <= 1024 && bucket_est <= (1 << 24)) {
        // dense product matrix + flat histogram; one pass over all tuples
        std::vector<std::int8_t> prod(N * N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i; j < N; ++j) {
                std::int64_t p4 = dot_half2(u.amb.data() + i * n, u.amb.data() + j * n, n);
                if (p4 % 4 != 0) throw std::domain_error("non-integral inner product in integral lattice");
                std::int64_t p = p4 / 4;
                prod[i * N + j] = static_cast<std::int8_t>(p);
                prod[j * N + i] = static_cast<std::int8_t>(p);
            }
        std::vector<std::int64_t> diag_stride(d), pair_stride(pairs);
        std::int64_t s = 1;
        for (int k = 0; k < d; ++k) { diag_stride[k] = s; s *= nd; }
        for (int k = 0; k < pairs; ++k) { pair_stride[k] = s; s *= np; }
        const std::int64_t buckets = s;
        std::vector<std::uint64_t> acc(static_cast<std::size_t>(buckets), 0);

        std::vector<std::size_t> x(d, 0);
        // recursive prefix walk, flattened histogram update at the last slot
        auto walk = [&](auto&& self, int k, std::int64_t base) -> void {
            if (k == d - 1) {
                const std::int64_t ds = diag_stride[k];
                std::vector<std::int64_t> ps(static_cast<std::size_t>(k));
                std::vector<const std::int8_t*> rows(static_cast<std::size_t>(k));
                for (int i = 0; i < k; ++i) {
                    ps[i] = pair_stride[pair_index(i, k)];
                    rows[i] = prod.data() + x[i] * N;
                }
                for (std::size_t v = 0; v < N; ++v) {
                    std::int64_t idx = base + ds * u.norm[v];
                    for (int i = 0; i < k; ++i) idx += ps[i] * (rows[i][v] + diag_bound);
                    ++acc[static_cast<std::size_t>(idx)];
                }
                return;
            }
            for (std::size_t v = 0; v < N; ++v) {
                x[k] = v;
                std::int64_t b = base + diag_stride[k] * u.norm[v];
                for (int i = 0; i < k; ++i)
                    b += pair_stride[pair_index(i, k)] * (prod[x[i] * N + v] + diag_bound);
                self(self, k + 1, b);
            }
        };
        walk(walk, 0, 0);

        for (std::int64_t idx = 0; idx < buckets; ++idx) {
            if (!acc[static_cast<std::size_t>(idx)]) continue;
            GramMatrix t(d);
            std::int64_t rest = idx;
            for (int k = 0; k < d; ++k) { t.set(k, k, rest % nd); rest /= nd; }
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) { t.set(i, j, rest % np - diag_bound); rest /= np; }
            out.entries[t] = acc[static_cast<std::size_t>(idx)];
        }
        return out;
    }

    if (d == 2 && bucket_est <= (1 << 26)) {
        // flat histogram over (q_u, q_v, <u,v>); one vectorizable double loop
        std::vector<std::uint64_t> acc(static_cast<std::size_t>(nd * nd * np), 0);
        for (std::size_t i = 0; i < N; ++i) {
            const std::int32_t* a = u.amb.data() + i * n;
            const std::int64_t base = u.norm[i] * nd * np;
            for (std::size_t j = 0; j < N; ++j) {
                std::int64_t p = dot_half2(a, u.amb.data() + j * n, n) / 4;
                ++acc[static_cast<std::size_t>(base + u.norm[j] * np + p + diag_bound)];
            }
        }
        for (std::int64_t qi = 0; qi <= diag_bound; ++qi)
            for (std::int64_t qj = 0; qj <= diag_bound; ++qj)
                for (std::int64_t p = -diag_bound; p <= diag_bound; ++p) {
                    std::uint64_t c = acc[static_cast<std::size_t>(qi * nd * np + qj * np + p + diag_bound)];
                    if (!c) continue;
                    GramMatrix t(2);
                    t.set(0, 0, qi);
                    t.set(1, 1, qj);
                    t.set(0, 1, p);
                    out.entries[t] = c;
                }
        return out;
    }

    // generic path: recursion over prefixes, packed-signature histogram
    if (diag_bound > 30000)
        throw std::invalid_argument("coefficient table bound too large for packed signatures");
    struct Key {
        std::array<std::int16_t, 16> v{};
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = 0xcbf29ce484222325ull;
            for (int i = 0; i < 4; ++i) {
                std::uint64_t a;
                std::memcpy(&a, k.v.data() + i * 4, 8);
                h = (h ^ a) * 0x100000001b3ull;
            }
            return static_cast<std::size_t>(h);
        }
    };
    if (static_cast<std::size_t>(d) + pairs > 16)
        throw std::invalid_argument("coefficient table degree too large for this lattice size");
    std::unordered_map<Key, std::uint64_t, KeyHash> buckets;
    std::vector<std::size_t> x(d, 0);
    Key key;
    auto walk = [&](auto&& self, int k) -> void {
        if (k == d - 1) {
            for (std::size_t v = 0; v < N; ++v) {
                key.v[k] = static_cast<std::int16_t>(u.norm[v]);
                for (int i = 0; i < k; ++i) {
                    std::int64_t p4 = dot_half2(u.amb.data() + x[i] * n, u.amb.data() + v * n, n);
                    key.v[d + pair_index(i, k)] = static_cast<std::int16_t>(p4 / 4);
                }
                ++buckets[key];
            }
            return;
        }
        for (std::size_t v = 0; v < N; ++v) {
            x[k] = v;
            key.v[k] = static_cast<std::int16_t>(u.norm[v]);
            for (int i = 0; i < k; ++i) {
                std::int64_t p4 = dot_half2(u.amb.data() + x[i] * n, u.amb.data() + v * n, n);
                key.v[d + pair_index(i, k)] = static_cast<std::int16_t>(p4 / 4);
            }
            self(self, k + 1);
        }
    };
    walk(walk, 0);
    for (auto& [k, c] : buckets) {
        GramMatrix t(d);
        for (int i = 0; i < d; ++i) t.set(i, i, k.v[i]);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) t.set(i, j, k.v[d + pair_index(i, j)]);
        out.entries[t] = c;
    }
    return out;
}

std::uint64_t representation_number(const LatticeBasis& l, const GramMatrix& t, const RunConfig& cfg) {
    ThetaEngine e(l, cfg);
    return e.representation_number(t);
}

CoefficientTable coefficient_table(const LatticeBasis& l, int degree, std::int64_t diag_bound,
                                   const RunConfig& cfg) {
    ThetaEngine e(l, cfg);
    return e.coefficient_table(degree, diag_bound);
}

std::vector<ThetaDifference> compare_theta(const LatticeBasis& a, const LatticeBasis& b, int degree,
                                           std::int64_t diag_bound, const RunConfig& cfg) {
    CoefficientTable ta = coefficient_table(a, degree, diag_bound, cfg);
    CoefficientTable tb = coefficient_table(b, degree, diag_bound, cfg);
    std::vector<ThetaDifference> diffs;
    auto ia = ta.entries.begin();
    auto ib = tb.entries.begin();
    while (ia != ta.entries.end() || ib != tb.entries.end()) {
        if (ib == tb.entries.end() || (ia != ta.entries.end() && ia->first < ib->first)) {
            diffs.push_back({ia->first, ia->second, 0});
            ++ia;
        } else if (ia == ta.entries.end() || ib->first < ia->first) {
            diffs.push_back({ib->first, 0, ib->second});
            ++ib;
        } else {
            if (ia->second != ib->second) diffs.push_back({ia->first, ia->second, ib->second});
            ++ia;
            ++ib;
        }
    }
    // map iteration is already (dim, trace, lex) ordered; keep it explicit
    std::sort(diffs.begin(), diffs.end(), [](const ThetaDifference& x, const ThetaDifference& y) {
        return x.t < y.t;
    });
    return diffs;
}

}  // namespace siegel
