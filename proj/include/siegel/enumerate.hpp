#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "siegel/config.hpp"
#include "siegel/lattice.hpp"
#include "siegel/smallmat.hpp"

namespace siegel {

struct NotPositiveDefinite : std::domain_error {
    int pivot;
    NotPositiveDefinite(int p, const std::string& what_arg) : std::domain_error(what_arg), pivot(p) {}
};

// Upper-triangular R with R^T R = A, positive diagonal.
struct CholeskyFactor {
    int dim = 0;
    std::vector<double> r;  // row-major, entries below the diagonal are zero
    double at(int i, int j) const { return r[static_cast<size_t>(i) * dim + j]; }
};

// Rejects pivots <= 1e-12 * trace(A); reconstruction R^T R stays within
// 1e-9 * (1 + |A_ij|) per entry at desk scale.
CholeskyFactor cholesky_upper(const Mat<double>& a);

// Vectors of norm <= bound4/4, grouped by exact norm (stored in quarter units
// so non-integral lattices keep exact keys).  Group entries are kept in flat
// arrays sorted by ambient half-unit coordinates.
struct ShortVectorTable {
    int dim = 0;
    std::int64_t bound4 = -1;
    struct Group {
        std::int64_t norm4;
        std::size_t count;
        std::vector<std::int32_t> coords;   // count * dim, basis coordinates
        std::vector<std::int32_t> ambient;  // count * dim, half units
    };
    std::vector<Group> groups;  // ascending norm4

    const Group* group(std::int64_t norm4) const;
    std::size_t total() const;
    // "norm: c1 c2 ... cn" per vector, norms as reduced rationals, coordinates
    // in half units, ordered by (norm, lex ambient); diffable across runs.
    void dump(std::ostream& os) const;
};

// Rough count of lattice points in the ball (ellipsoid volume), used for the
// cap refusal before any work happens.
double predict_vector_count(const LatticeBasis& l, double bound_natural);

// Calls visit(basis_coords, ambient_half, norm4) for every v with
// <v,v> <= bound4/4, zero vector included, in traversal order (not sorted).
// Throws CapExceeded if the prediction or the running count passes cfg.cap.
using VectorVisitor = std::function<void(const std::int32_t*, const std::int32_t*, std::int64_t)>;
void enumerate_vectors(const LatticeBasis& l, std::int64_t bound4, const RunConfig& cfg,
                       const VectorVisitor& visit);

ShortVectorTable short_vectors(const LatticeBasis& l, std::int64_t bound_natural, const RunConfig& cfg = {});

// Streaming: never materializes vectors.  Keys are quarter-unit norms.
std::map<std::int64_t, std::uint64_t> count_by_norm4(const LatticeBasis& l, std::int64_t bound4,
                                                     const RunConfig& cfg = {});
// Natural-unit convenience for integral lattices.
std::map<std::int64_t, std::uint64_t> count_by_norm(const LatticeBasis& l, std::int64_t bound_natural,
                                                    const RunConfig& cfg = {});

std::string norm4_str(std::int64_t norm4);  // exact reduced rational

}  // namespace siegel
