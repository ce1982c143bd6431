#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siegel/rational.hpp"
#include "siegel/smallmat.hpp"

namespace siegel {

// Symmetric integer matrix in natural units.  Doubles as the Gram matrix of a
// lattice basis and as the target matrix T of a degree-d representation count.
class GramMatrix {
  public:
    GramMatrix() = default;
    explicit GramMatrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim, 0) {}
    GramMatrix(int dim, std::vector<std::int64_t> entries);

    static GramMatrix parse(const std::string& text);   // "2,0;0,2"
    static GramMatrix diagonal(const std::vector<std::int64_t>& d);

    int dim() const { return dim_; }
    std::int64_t at(int r, int c) const { return e_[static_cast<size_t>(r) * dim_ + c]; }
    void set(int r, int c, std::int64_t v);              // keeps symmetry

    std::int64_t trace() const;
    bool is_even() const;                                // even diagonal
    bool is_diagonal() const;
    bool is_psd() const;                                 // exact
    std::string str() const;                             // canonical row-major
    const std::vector<std::int64_t>& entries() const { return e_; }

    friend bool operator==(const GramMatrix& a, const GramMatrix& b) = default;
    // Order for map keys and report sorting: (dim, trace, entries lex).
    friend std::strong_ordering operator<=>(const GramMatrix& a, const GramMatrix& b);

  private:
    int dim_ = 0;
    std::vector<std::int64_t> e_;
};

// Full-rank lattice in R^n given by n basis columns with coordinates in units
// of 1/2 (exact int32 storage; every inner product is an exact integer in
// quarter units).
class LatticeBasis {
  public:
    LatticeBasis(int dim, std::vector<std::int32_t> columns_half, std::string label);

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    // entry r of basis column c, in half units
    std::int32_t b2(int r, int c) const { return b2_[static_cast<size_t>(c) * dim_ + r]; }
    const std::int32_t* column(int c) const { return b2_.data() + static_cast<size_t>(c) * dim_; }

    // 4 * <b_i, b_j>, always exact
    std::int64_t gram4(int i, int j) const { return gram4_.at(i, j); }
    bool is_integral() const { return integral_; }
    bool is_even() const { return even_; }

    GramMatrix gram() const;           // integral lattices only
    std::int64_t discriminant() const; // exact Gram determinant, any lattice

    // Exact membership: integer coordinates of v in this basis, or nullopt.
    // v is given in half units.
    std::optional<std::vector<std::int64_t>> member_coordinates(const std::vector<std::int64_t>& v_half) const;

  private:
    int dim_;
    std::vector<std::int32_t> b2_;  // column-major, half units
    std::string label_;
    Mat<std::int64_t> gram4_;
    bool integral_, even_;
};

LatticeBasis construct_zn(int n);
LatticeBasis construct_dn(int n);       // n >= 2: integer vectors with even coordinate sum
LatticeBasis construct_dn_plus(int n);  // even n >= 2: construct_dn(n) extended by (1/2,...,1/2)
LatticeBasis construct_e8();            // = construct_dn_plus(8), labelled E8
LatticeBasis construct_gamma16();       // = construct_dn_plus(16), labelled GAMMA16
LatticeBasis direct_sum(const LatticeBasis& a, const LatticeBasis& b);

// Grammar: term ("+" term)*, term = "Z:n" | "D:n" | "D+:n" | "E8" | "GAMMA16".
LatticeBasis parse_lattice_spec(const std::string& text);

}  // namespace siegel
