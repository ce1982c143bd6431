#include "siegel/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <tuple>

#include "siegel/enumerate.hpp"
#include "siegel/theta.hpp"

namespace siegel {

namespace {

Mat<double> transpose(const Mat<double>& m) {
    Mat<double> t(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
    return t;
}

Mat<Rat64> parse_rational_matrix(const std::string& text) {
    std::vector<std::vector<Rat64>> rows;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t semi = text.find(';', pos);
        std::string row = text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        std::vector<Rat64> entries;
        size_t p = 0;
        while (p <= row.size()) {
            size_t comma = row.find(',', p);
            std::string cell = row.substr(p, comma == std::string::npos ? std::string::npos : comma - p);
            try {
                entries.push_back(Rat64::parse(cell));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad matrix entry '" + cell + "'");
            }
            if (comma == std::string::npos) break;
            p = comma + 1;
        }
        rows.push_back(std::move(entries));
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    Mat<Rat64> m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw std::invalid_argument("ragged matrix literal");
        for (size_t c = 0; c < rows[r].size(); ++c)
            m.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
    return m;
}

Mat<double> upper_of(const CholeskyFactor& r) {
    Mat<double> b(r.dim, r.dim);
    for (int i = 0; i < r.dim; ++i)
        for (int j = i; j < r.dim; ++j) b.at(i, j) = r.at(i, j);
    return b;
}

double diag_product(const CholeskyFactor& r) {
    double p = 1.0;
    for (int i = 0; i < r.dim; ++i) p *= r.at(i, i);
    return p;
}

std::int64_t isqrt64(std::int64_t v) {
    std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (s > 0 && s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
}

}  // namespace

SourceTorus source_from_basis(const Mat<double>& b,
                              const std::optional<Mat<Rat64>>& exact_gram,
                              const std::string& descriptor) {
    if (b.rows != b.cols || b.rows == 0)
        throw std::invalid_argument("source basis must be square and non-empty");
    const int d = b.rows;
    SourceTorus src;
    src.d = d;
    src.basis = b;
    src.provenance = "from_basis";
    src.descriptor = descriptor.empty() ? "from_basis" : descriptor;
    src.volume = std::fabs(det_double(b));
    if (!(src.volume > 0.0) || !std::isfinite(src.volume))
        throw std::invalid_argument("source basis is singular");

    Mat<double> gf = mat_mul(transpose(b), b);
    if (exact_gram) {
        const Mat<Rat64>& g = *exact_gram;
        if (g.rows != d || g.cols != d)
            throw std::invalid_argument("exact Gram has wrong dimensions");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (!(g.at(i, j) == g.at(j, i)))
                    throw std::invalid_argument("exact Gram is not symmetric");
                double gij = g.at(i, j).to_double();
                if (std::fabs(gij - gf.at(i, j)) > 1e-6 * (1.0 + std::fabs(gij)))
                    throw std::invalid_argument("exact Gram does not match b^t b");
            }
        Mat<Rat64> w = invert_rational(g);
        src.exact = true;
        src.w = Mat<PiSeries>(d, d);
        src.wf = Mat<double>(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                src.w.at(i, j) = PiSeries(w.at(i, j));
                src.wf.at(i, j) = w.at(i, j).to_double();
            }
    } else {
        src.exact = false;
        src.w = Mat<PiSeries>(d, d);
        src.wf = invert_double(gf);
    }
    return src;
}

SourceTorus source_from_dual_gram(const Mat<Rat64>& w, const std::string& descriptor) {
    if (w.rows != w.cols || w.rows == 0)
        throw std::invalid_argument("dual Gram must be square and non-empty");
    const int d = w.rows;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (!(w.at(i, j) == w.at(j, i)))
                throw std::invalid_argument("dual Gram is not symmetric");
    Mat<Rat64> g = invert_rational(w);  // b^t b
    Mat<double> gf(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gf.at(i, j) = g.at(i, j).to_double();
    CholeskyFactor r = cholesky_upper(gf);  // rejects non-positive-definite W

    SourceTorus src;
    src.d = d;
    src.exact = true;
    src.provenance = "from_dual_gram";
    src.descriptor = descriptor.empty() ? "from_dual_gram" : descriptor;
    src.basis = upper_of(r);
    src.volume = diag_product(r);
    src.w = Mat<PiSeries>(d, d);
    src.wf = Mat<double>(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            src.w.at(i, j) = PiSeries(w.at(i, j));
            src.wf.at(i, j) = w.at(i, j).to_double();
        }
    return src;
}

SourceTorus milnor_source() {
    const int d = 4;
    SourceTorus src;
    src.d = d;
    src.exact = true;
    src.provenance = "milnor";
    src.descriptor = "milnor";
    src.w = Mat<PiSeries>(d, d);
    src.wf = Mat<double>(d, d);
    int k = 0;
    for (int i = 0; i < d; ++i) {
        src.w.at(i, i) = PiSeries(Rat64(1));
        for (int j = i + 1; j < d; ++j) {
            ++k;  // (0,1)->1, (0,2)->2, (0,3)->3, (1,2)->4, (1,3)->5, (2,3)->6
            src.w.at(i, j) = src.w.at(j, i) = PiSeries::pi_power(k, Rat64(1));
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) src.wf.at(i, j) = src.w.at(i, j).value();
    CholeskyFactor r = cholesky_upper(invert_double(src.wf));
    src.basis = upper_of(r);
    src.volume = diag_product(r);
    return src;
}

SourceTorus parse_source_spec(const std::string& spec) {
    if (spec == "milnor") return milnor_source();
    if (spec.rfind("gram:", 0) == 0) {
        Mat<Rat64> g = parse_rational_matrix(spec.substr(5));
        if (g.rows != g.cols) throw std::invalid_argument("source Gram must be square");
        for (int i = 0; i < g.rows; ++i)
            for (int j = i + 1; j < g.cols; ++j)
                if (!(g.at(i, j) == g.at(j, i)))
                    throw std::invalid_argument("source Gram is not symmetric");
        Mat<double> gf(g.rows, g.cols);
        for (int i = 0; i < g.rows; ++i)
            for (int j = 0; j < g.cols; ++j) gf.at(i, j) = g.at(i, j).to_double();
        CholeskyFactor r = cholesky_upper(gf);  // rejects non-positive-definite
        return source_from_basis(upper_of(r), g, spec);
    }
    throw std::invalid_argument("source spec must be 'milnor' or 'gram:<matrix>'");
}

PiSeries trace_part(const GramMatrix& s, const SourceTorus& src) {
    if (!src.exact) throw std::logic_error("trace_part requires an exact source");
    if (s.dim() != src.d) throw std::invalid_argument("trace_part dimension mismatch");
    PiSeries acc;
    for (int i = 0; i < src.d; ++i) {
        acc += Rat64(s.at(i, i)) * src.w.at(i, i);
        for (int j = i + 1; j < src.d; ++j) acc += Rat64(2 * s.at(i, j)) * src.w.at(i, j);
    }
    return acc;
}

Spectrum energy_spectrum(const SourceTorus& src, const LatticeBasis& target,
                         std::int64_t bound, const RunConfig& cfg) {
    if (bound < 0) throw std::invalid_argument("spectrum bound must be >= 0");
    Spectrum sp;
    sp.source_descriptor = src.descriptor;
    sp.target_label = target.label();
    sp.d = src.d;
    sp.bound = bound;
    sp.exact = src.exact;
    sp.volume = src.volume;

    CoefficientTable table = coefficient_table(target, src.d, bound, cfg);

    if (src.exact) {
        std::map<PiSeries, EnergyClass> acc;
        for (const auto& [s, c] : table.entries) {
            PiSeries tr = trace_part(s, src);
            EnergyClass& ec = acc[tr];
            if (ec.members.empty()) {
                ec.trace = tr;
                ec.energy = 0.5 * tr.value() * src.volume;
            }
            ec.multiplicity += c;
            ec.members.emplace_back(s, c);
        }
        sp.classes.reserve(acc.size());
        for (auto& [tr, ec] : acc) sp.classes.push_back(std::move(ec));
    } else {
        std::vector<std::tuple<double, GramMatrix, std::uint64_t>> rows;
        rows.reserve(table.entries.size());
        for (const auto& [s, c] : table.entries) {
            double tv = 0.0;
            for (int i = 0; i < src.d; ++i) {
                tv += static_cast<double>(s.at(i, i)) * src.wf.at(i, i);
                for (int j = i + 1; j < src.d; ++j)
                    tv += 2.0 * static_cast<double>(s.at(i, j)) * src.wf.at(i, j);
            }
            rows.emplace_back(tv, s, c);
        }
        std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
            if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
            return std::get<1>(x) < std::get<1>(y);
        });
        for (const auto& [tv, s, c] : rows) {
            bool fresh = sp.classes.empty();
            if (!fresh) {
                double ref = sp.classes.back().energy / (0.5 * src.volume);
                fresh = std::fabs(tv - ref) >
                        1e-9 * std::max({1.0, std::fabs(tv), std::fabs(ref)});
            }
            if (fresh) {
                EnergyClass ec;
                ec.energy = 0.5 * tv * src.volume;
                sp.classes.push_back(std::move(ec));
            }
            sp.classes.back().multiplicity += c;
            sp.classes.back().members.emplace_back(s, c);
        }
        return sp;
    }

    std::stable_sort(sp.classes.begin(), sp.classes.end(),
                     [](const EnergyClass& x, const EnergyClass& y) { return x.energy < y.energy; });
    return sp;
}

std::vector<SpectrumDifference> compare_spectra(const Spectrum& a, const Spectrum& b) {
    if (!a.exact || !b.exact)
        throw std::invalid_argument("compare_spectra needs exact spectra");
    if (a.d != b.d || a.bound != b.bound || a.source_descriptor != b.source_descriptor)
        throw std::invalid_argument("spectra differ in source or bound; not comparable");

    struct Cell {
        double energy = 0.0;
        std::uint64_t mult_a = 0, mult_b = 0;
    };
    std::map<PiSeries, Cell> merged;
    for (const EnergyClass& ec : a.classes) {
        Cell& cell = merged[ec.trace];
        cell.energy = ec.energy;
        cell.mult_a = ec.multiplicity;
    }
    for (const EnergyClass& ec : b.classes) {
        Cell& cell = merged[ec.trace];
        cell.energy = ec.energy;
        cell.mult_b = ec.multiplicity;
    }
    std::vector<SpectrumDifference> diffs;
    for (const auto& [tr, cell] : merged)
        if (cell.mult_a != cell.mult_b)
            diffs.push_back({tr, cell.energy, cell.mult_a, cell.mult_b});
    std::stable_sort(diffs.begin(), diffs.end(),
                     [](const SpectrumDifference& x, const SpectrumDifference& y) {
                         return x.energy < y.energy;
                     });
    return diffs;
}

MilnorDemo milnor_demo(const RunConfig& cfg) {
    SourceTorus src = milnor_source();
    LatticeBasis la = parse_lattice_spec("E8+E8");
    LatticeBasis lb = parse_lattice_spec("GAMMA16");
    ThetaEngine ea(la, cfg), eb(lb, cfg);

    MilnorDemo demo;
    demo.lattice_a = la.label();
    demo.lattice_b = lb.label();
    demo.trace = PiSeries(Rat64(8));
    demo.energy = 0.5 * 8.0 * src.volume;

    // Diagonal patterns with even entries summing to 8, descending, and the
    // number of ordered diagonals realizing each multiset.
    const std::array<std::array<std::int64_t, 4>, 5> pats = {
        {{8, 0, 0, 0}, {6, 2, 0, 0}, {4, 4, 0, 0}, {4, 2, 2, 0}, {2, 2, 2, 2}}};
    const std::array<std::uint64_t, 5> arrangements = {4, 12, 6, 12, 1};

    demo.padded_patterns_equal = true;
    for (size_t p = 0; p < pats.size(); ++p) {
        GramMatrix t = GramMatrix::diagonal({pats[p].begin(), pats[p].end()});
        MilnorPattern mp;
        mp.diag = pats[p];
        mp.arrangements = arrangements[p];
        mp.count_a = ea.representation_number(t);
        mp.count_b = eb.representation_number(t);
        demo.multiplicity_a += mp.arrangements * mp.count_a;
        demo.multiplicity_b += mp.arrangements * mp.count_b;
        bool has_zero_slot = pats[p][3] == 0;
        if (has_zero_slot && mp.count_a != mp.count_b) demo.padded_patterns_equal = false;
        demo.patterns.push_back(mp);
    }

    // Trace 8 forces S diagonal: scan every symmetric integer matrix that the
    // Cauchy-Schwarz bounds allow over these diagonals and confirm that the
    // trace part equals the constant 8 exactly when all off-diagonals vanish.
    const PiSeries eight(Rat64(8));
    demo.only_diagonal_members = true;
    demo.candidates_checked = 0;
    for (std::int64_t d0 = 0; d0 <= 8; d0 += 2)
        for (std::int64_t d1 = 0; d0 + d1 <= 8; d1 += 2)
            for (std::int64_t d2 = 0; d0 + d1 + d2 <= 8; d2 += 2) {
                std::int64_t d3 = 8 - d0 - d1 - d2;
                const std::array<std::int64_t, 4> dg = {d0, d1, d2, d3};
                std::array<std::array<std::int64_t, 4>, 4> m{};
                for (int i = 0; i < 4; ++i)
                    for (int j = i + 1; j < 4; ++j) m[i][j] = isqrt64(dg[i] * dg[j]);
                for (std::int64_t s01 = -m[0][1]; s01 <= m[0][1]; ++s01)
                    for (std::int64_t s02 = -m[0][2]; s02 <= m[0][2]; ++s02)
                        for (std::int64_t s03 = -m[0][3]; s03 <= m[0][3]; ++s03)
                            for (std::int64_t s12 = -m[1][2]; s12 <= m[1][2]; ++s12)
                                for (std::int64_t s13 = -m[1][3]; s13 <= m[1][3]; ++s13)
                                    for (std::int64_t s23 = -m[2][3]; s23 <= m[2][3]; ++s23) {
                                        GramMatrix s(4);
                                        for (int i = 0; i < 4; ++i) s.set(i, i, dg[i]);
                                        s.set(0, 1, s01);
                                        s.set(0, 2, s02);
                                        s.set(0, 3, s03);
                                        s.set(1, 2, s12);
                                        s.set(1, 3, s13);
                                        s.set(2, 3, s23);
                                        bool is_diag = s01 == 0 && s02 == 0 && s03 == 0 &&
                                                       s12 == 0 && s13 == 0 && s23 == 0;
                                        if ((trace_part(s, src) == eight) != is_diag)
                                            demo.only_diagonal_members = false;
                                        ++demo.candidates_checked;
                                    }
            }

    demo.distinguishes =
        demo.padded_patterns_equal && demo.multiplicity_a != demo.multiplicity_b;
    return demo;
}

}  // namespace siegel
