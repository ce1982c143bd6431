#include "siegel/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace siegel {

GramMatrix::GramMatrix(int dim, std::vector<std::int64_t> entries) : dim_(dim), e_(std::move(entries)) {
    if (e_.size() != static_cast<size_t>(dim_) * dim_)
        throw std::invalid_argument("gram matrix entry count does not match dimension");
    for (int r = 0; r < dim_; ++r)
        for (int c = r + 1; c < dim_; ++c)
            if (at(r, c) != at(c, r))
                throw std::invalid_argument("gram matrix is not symmetric at (" + std::to_string(r) +
                                            "," + std::to_string(c) + ")");
}

GramMatrix GramMatrix::parse(const std::string& text) {
    std::vector<std::vector<std::int64_t>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<std::int64_t> vals;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            try {
                size_t pos = 0;
                vals.push_back(std::stoll(cell, &pos));
                while (pos < cell.size() && isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
                if (pos != cell.size()) throw std::invalid_argument("");
            } catch (const std::logic_error&) {
                throw std::invalid_argument("bad matrix entry '" + cell + "'");
            }
        }
        if (vals.empty()) throw std::invalid_argument("empty matrix row");
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::invalid_argument("empty matrix literal");
    int n = static_cast<int>(rows.size());
    std::vector<std::int64_t> e;
    for (auto& r : rows) {
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("matrix literal is not square");
        e.insert(e.end(), r.begin(), r.end());
    }
    return GramMatrix(n, std::move(e));
}

GramMatrix GramMatrix::diagonal(const std::vector<std::int64_t>& d) {
    GramMatrix g(static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) g.set(static_cast<int>(i), static_cast<int>(i), d[i]);
    return g;
}

void GramMatrix::set(int r, int c, std::int64_t v) {
    e_[static_cast<size_t>(r) * dim_ + c] = v;
    e_[static_cast<size_t>(c) * dim_ + r] = v;
}

std::int64_t GramMatrix::trace() const {
    std::int64_t t = 0;
    for (int i = 0; i < dim_; ++i) t = checked_add(t, at(i, i));
    return t;
}

bool GramMatrix::is_even() const {
    for (int i = 0; i < dim_; ++i)
        if (at(i, i) % 2 != 0) return false;
    return true;
}

bool GramMatrix::is_diagonal() const {
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            if (r != c && at(r, c) != 0) return false;
    return true;
}

bool GramMatrix::is_psd() const {
    Mat<std::int64_t> m(dim_, dim_);
    m.a = e_;
    return is_psd_int(m);
}

std::string GramMatrix::str() const {
    std::string s;
    for (int r = 0; r < dim_; ++r) {
        if (r) s += ';';
        for (int c = 0; c < dim_; ++c) {
            if (c) s += ',';
            s += std::to_string(at(r, c));
        }
    }
    return s;
}

std::strong_ordering operator<=>(const GramMatrix& a, const GramMatrix& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    if (auto c = a.trace() <=> b.trace(); c != 0) return c;
    return a.e_ <=> b.e_;
}

LatticeBasis::LatticeBasis(int dim, std::vector<std::int32_t> columns_half, std::string label)
    : dim_(dim), b2_(std::move(columns_half)), label_(std::move(label)), gram4_(dim, dim) {
    if (dim_ <= 0) throw std::invalid_argument("lattice dimension must be positive");
    if (b2_.size() != static_cast<size_t>(dim_) * dim_)
        throw std::invalid_argument("basis column data does not match dimension");
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            std::int64_t s = 0;
            const std::int32_t* ci = column(i);
            const std::int32_t* cj = column(j);
            for (int r = 0; r < dim_; ++r) s += static_cast<std::int64_t>(ci[r]) * cj[r];
            gram4_.at(i, j) = s;
            gram4_.at(j, i) = s;
        }
    // full rank is an invariant of every construction path; rational Gaussian
    // elimination keeps intermediates small where Bareiss minors of the
    // quarter-unit Gram could overflow for direct sums of many factors
    Mat<Rat64> g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) g.at(i, j) = Rat64(gram4_.at(i, j), 4);
    if (det_rational(g).is_zero()) throw std::invalid_argument("basis is singular");
    integral_ = true;
    even_ = true;
    for (int i = 0; i < dim_ && integral_; ++i)
        for (int j = i; j < dim_; ++j)
            if (gram4_.at(i, j) % 4 != 0) { integral_ = false; even_ = false; break; }
    if (integral_)
        for (int i = 0; i < dim_; ++i)
            if (gram4_.at(i, i) % 8 != 0) { even_ = false; break; }
}

GramMatrix LatticeBasis::gram() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            if (gram4_.at(i, j) % 4 != 0)
                throw std::domain_error("lattice " + label_ + " is not integral: <b" + std::to_string(i) +
                                        ",b" + std::to_string(j) + "> = " + Rat64(gram4_.at(i, j), 4).str());
    GramMatrix g(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) g.set(i, j, gram4_.at(i, j) / 4);
    return g;
}

std::int64_t LatticeBasis::discriminant() const {
    // Rational determinant of the natural Gram so non-integral lattices (whose
    // Gram has quarter-unit entries) still get their exact discriminant.
    Mat<Rat64> g(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) g.at(r, c) = Rat64(gram4_.at(r, c), 4);
    Rat64 d = det_rational(g);
    if (!d.is_integer())
        throw std::domain_error("discriminant of " + label_ + " is not an integer");
    return d.num();
}

std::optional<std::vector<std::int64_t>> LatticeBasis::member_coordinates(
    const std::vector<std::int64_t>& v_half) const {
    if (static_cast<int>(v_half.size()) != dim_)
        throw std::invalid_argument("vector dimension mismatch");
    Mat<std::int64_t> a(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) a.at(r, c) = b2(r, c);
    auto x = solve_rational(a, v_half);
    if (!x) return std::nullopt;  // unreachable for full-rank bases
    std::vector<std::int64_t> coords(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (!(*x)[i].is_integer()) return std::nullopt;
        coords[i] = (*x)[i].num();
    }
    // substitute back: guards against any arithmetic slip
    for (int r = 0; r < dim_; ++r) {
        std::int64_t s = 0;
        for (int c = 0; c < dim_; ++c) s = checked_add(s, checked_mul(coords[c], b2(r, c)));
        if (s != v_half[r]) throw std::logic_error("member_coordinates verification failed");
    }
    return coords;
}

LatticeBasis construct_zn(int n) {
    if (n < 1) throw std::invalid_argument("Z:n needs n >= 1");
    std::vector<std::int32_t> cols(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) cols[static_cast<size_t>(i) * n + i] = 2;
    return LatticeBasis(n, std::move(cols), "Z" + std::to_string(n));
}

LatticeBasis construct_dn(int n) {
    if (n < 2) throw std::invalid_argument("D:n needs n >= 2");
    std::vector<std::int32_t> cols(static_cast<size_t>(n) * n, 0);
    // column 0: e1+e2; column i (1 <= i < n): e_i - e_{i+1}
    cols[0] = 2;
    cols[1] = 2;
    for (int i = 1; i < n; ++i) {
        cols[static_cast<size_t>(i) * n + (i - 1)] = 2;
        cols[static_cast<size_t>(i) * n + i] = -2;
    }
    return LatticeBasis(n, std::move(cols), "D" + std::to_string(n));
}

LatticeBasis construct_dn_plus(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("D+:n needs even n >= 2: the glue vector (1,...,1) lies in D:n only then");
    LatticeBasis dn = construct_dn(n);
    std::vector<std::int32_t> cols(dn.column(0), dn.column(0) + static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r) cols[static_cast<size_t>(n - 1) * n + r] = 1;  // (1/2,...,1/2)
    return LatticeBasis(n, std::move(cols), "D" + std::to_string(n) + "+");
}

LatticeBasis construct_e8() {
    LatticeBasis l = construct_dn_plus(8);
    return LatticeBasis(8, std::vector<std::int32_t>(l.column(0), l.column(0) + 64), "E8");
}

LatticeBasis construct_gamma16() {
    LatticeBasis l = construct_dn_plus(16);
    return LatticeBasis(16, std::vector<std::int32_t>(l.column(0), l.column(0) + 256), "GAMMA16");
}

LatticeBasis direct_sum(const LatticeBasis& a, const LatticeBasis& b) {
    int n = a.dim() + b.dim();
    std::vector<std::int32_t> cols(static_cast<size_t>(n) * n, 0);
    for (int c = 0; c < a.dim(); ++c)
        for (int r = 0; r < a.dim(); ++r) cols[static_cast<size_t>(c) * n + r] = a.b2(r, c);
    for (int c = 0; c < b.dim(); ++c)
        for (int r = 0; r < b.dim(); ++r)
            cols[static_cast<size_t>(a.dim() + c) * n + (a.dim() + r)] = b.b2(r, c);
    return LatticeBasis(n, std::move(cols), a.label() + "+" + b.label());
}

namespace {

LatticeBasis parse_term(const std::string& text, size_t& pos) {
    auto starts = [&](const char* t) { return text.compare(pos, strlen(t), t) == 0; };
    auto read_int = [&](size_t at) -> std::pair<int, size_t> {
        size_t end = at;
        while (end < text.size() && isdigit(static_cast<unsigned char>(text[end]))) ++end;
        if (end == at)
            throw std::invalid_argument("lattice spec: expected a dimension at position " +
                                        std::to_string(at) + " in '" + text + "'");
        return {std::stoi(text.substr(at, end - at)), end};
    };
    if (starts("GAMMA16")) { pos += 7; return construct_gamma16(); }
    if (starts("E8")) { pos += 2; return construct_e8(); }
    if (starts("D+:")) {
        auto [n, end] = read_int(pos + 3);
        pos = end;
        return construct_dn_plus(n);
    }
    if (starts("D:")) {
        auto [n, end] = read_int(pos + 2);
        pos = end;
        return construct_dn(n);
    }
    if (starts("Z:")) {
        auto [n, end] = read_int(pos + 2);
        pos = end;
        return construct_zn(n);
    }
    throw std::invalid_argument("lattice spec: unknown term at position " + std::to_string(pos) +
                                " in '" + text + "'");
}

}  // namespace

LatticeBasis parse_lattice_spec(const std::string& text) {
    size_t pos = 0;
    LatticeBasis acc = parse_term(text, pos);
    while (pos < text.size()) {
        if (text[pos] != '+')
            throw std::invalid_argument("lattice spec: expected '+' at position " + std::to_string(pos) +
                                        " in '" + text + "'");
        ++pos;
        LatticeBasis next = parse_term(text, pos);
        acc = direct_sum(acc, next);
    }
    return acc;
}

}  // namespace siegel
