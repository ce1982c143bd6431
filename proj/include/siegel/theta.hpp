#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "siegel/config.hpp"
#include "siegel/enumerate.hpp"
#include "siegel/lattice.hpp"

namespace siegel {

// r(T) for every T realized by tuples with all per-slot norms <= diag_bound.
struct CoefficientTable {
    std::string lattice_label;
    int degree = 0;
    std::int64_t diag_bound = 0;
    std::map<GramMatrix, std::uint64_t> entries;

    std::uint64_t total() const;
    std::uint64_t at(const GramMatrix& t) const;  // 0 when absent
};

// Counts ordered d-tuples (x_1,...,x_d) of lattice vectors with
// <x_i,x_j> = T_ij.  Caches the short-vector table and the orthogonality
// bit-rows across queries, so keep one engine per lattice when making many.
class ThetaEngine {
  public:
    explicit ThetaEngine(LatticeBasis l, RunConfig cfg = {});

    const LatticeBasis& lattice() const { return l_; }

    std::uint64_t representation_number(const GramMatrix& t);
    CoefficientTable coefficient_table(int degree, std::int64_t diag_bound);

  private:
    struct BitRows {
        std::size_t words = 0;
        std::vector<std::uint64_t> bits;
        const std::uint64_t* row(std::size_t i) const { return bits.data() + i * words; }
    };

    void ensure_table(std::int64_t bound4);
    std::uint64_t count_norm_exact(std::int64_t norm4);
    const BitRows* cached_rows(std::int64_t a_norm4, std::int64_t b_norm4, std::int64_t value4);

    LatticeBasis l_;
    RunConfig cfg_;
    ShortVectorTable table_;
    std::map<std::array<std::int64_t, 3>, BitRows> rowcache_;
};

std::uint64_t representation_number(const LatticeBasis& l, const GramMatrix& t, const RunConfig& cfg = {});
CoefficientTable coefficient_table(const LatticeBasis& l, int degree, std::int64_t diag_bound,
                                   const RunConfig& cfg = {});

struct ThetaDifference {
    GramMatrix t;
    std::uint64_t count_a = 0, count_b = 0;
};

// Entries of the two degree-d tables that disagree, sorted by (trace, lex);
// empty means the truncated theta series coincide.
std::vector<ThetaDifference> compare_theta(const LatticeBasis& a, const LatticeBasis& b, int degree,
                                           std::int64_t diag_bound, const RunConfig& cfg = {});

}  // namespace siegel
