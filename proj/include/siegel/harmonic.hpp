#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siegel/config.hpp"
#include "siegel/lattice.hpp"
#include "siegel/piseries.hpp"
#include "siegel/smallmat.hpp"

namespace siegel {

// Flat source torus R^d / b·Z^d, carried as the dual Gram W = (b^t b)^{-1}.
// A homotopy class of harmonic maps into R^n/Lambda is an ordered d-tuple of
// lattice vectors; if S is its Gram matrix the energy is (1/2)·Tr(S·W)·det(b).
// Rational sources have exact W; the Milnor source has powers of 1/pi in the
// off-diagonal entries, so traces live in PiSeries either way.
struct SourceTorus {
    int d = 0;
    bool exact = false;      // trace parts are exact; otherwise use wf only
    Mat<PiSeries> w;         // dual Gram, symmetric (zero matrix when !exact)
    Mat<double> wf;          // float mirror of w
    double volume = 0.0;     // det(b)
    Mat<double> basis;       // upper-triangular b realizing w
    std::string provenance;  // "from_basis" | "from_dual_gram" | "milnor"
    std::string descriptor;  // display form, e.g. "gram:1,0;0,1"
};

// b must be square and invertible.  An exact Gram override must match b^t b
// entrywise to about 1e-6; it makes the source exact.
SourceTorus source_from_basis(const Mat<double>& b,
                              const std::optional<Mat<Rat64>>& exact_gram = std::nullopt,
                              const std::string& descriptor = "");

// Exact source given its dual Gram directly (must be symmetric positive definite).
SourceTorus source_from_dual_gram(const Mat<Rat64>& w, const std::string& descriptor = "");

// The 4-dimensional distinguishing source: W has unit diagonal and
// pi^{-1}..pi^{-6} above it, in row-major order.
SourceTorus milnor_source();

// "milnor" or "gram:<rational matrix literal>" (source Gram b^t b, row-major,
// rows ';'-separated, entries ','-separated, rationals as "p/q").
SourceTorus parse_source_spec(const std::string& spec);

// sum_{i,j} S_ij W_ij, exact.  Requires src.exact and matching dimensions.
PiSeries trace_part(const GramMatrix& s, const SourceTorus& src);

struct EnergyClass {
    PiSeries trace;                // common value of trace_part (exact sources)
    double energy = 0.0;           // (1/2)·trace·volume, display value
    std::uint64_t multiplicity = 0;
    std::vector<std::pair<GramMatrix, std::uint64_t>> members;
};

struct Spectrum {
    std::string source_descriptor;
    std::string target_label;
    int d = 0;
    std::int64_t bound = 0;  // per-slot norm bound
    bool exact = false;
    double volume = 0.0;
    std::vector<EnergyClass> classes;  // sorted by (energy, trace)
};

// All homotopy classes whose tuples have every |v_i|^2 <= bound, grouped by
// exact trace_part (or by float energy within 1e-9 relative, when !src.exact).
Spectrum energy_spectrum(const SourceTorus& src, const LatticeBasis& target,
                         std::int64_t bound, const RunConfig& cfg = {});

struct SpectrumDifference {
    PiSeries trace;
    double energy = 0.0;
    std::uint64_t mult_a = 0, mult_b = 0;
};

// Classes whose multiplicities differ, aligned by exact trace (absent class =
// multiplicity 0).  Both spectra must be exact and share source and bound.
std::vector<SpectrumDifference> compare_spectra(const Spectrum& a, const Spectrum& b);

struct MilnorPattern {
    std::array<std::int64_t, 4> diag{};  // descending diagonal representative
    std::uint64_t arrangements = 0;      // ordered diagonals with this multiset
    std::uint64_t count_a = 0, count_b = 0;
};

struct MilnorDemo {
    std::string lattice_a, lattice_b;
    PiSeries trace;   // the distinguishing class: constant 8
    double energy = 0.0;
    std::vector<MilnorPattern> patterns;
    std::uint64_t multiplicity_a = 0, multiplicity_b = 0;
    std::uint64_t candidates_checked = 0;
    bool only_diagonal_members = false;  // trace-8 class has no off-diagonal S
    bool padded_patterns_equal = false;  // patterns with a zero slot agree
    bool distinguishes = false;
};

// Runs the degree-4 separation: maps from the milnor_source torus into
// R^16/(E8+E8) vs R^16/GAMMA16 at per-slot norm 8.  Trace 8 forces S diagonal
// with even entries summing to 8; the five diagonal patterns are counted per
// lattice and weighted by their arrangement counts.
MilnorDemo milnor_demo(const RunConfig& cfg = {});

}  // namespace siegel
