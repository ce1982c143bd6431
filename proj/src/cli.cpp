#include "siegel/cli.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "siegel/config.hpp"
#include "siegel/enumerate.hpp"
#include "siegel/harmonic.hpp"
#include "siegel/lattice.hpp"
#include "siegel/theta.hpp"

namespace siegel {

namespace {

using nlohmann::json;

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json pis_json(const PiSeries& p) {
    json j = json::object();
    for (const auto& [k, c] : p.coeffs()) j[std::to_string(k)] = c.str();
    return j;
}

json source_json(const SourceTorus& src) {
    json w = json::object();
    for (int i = 0; i < src.d; ++i)
        for (int j = i; j < src.d; ++j)
            w[std::to_string(i) + "," + std::to_string(j)] = pis_json(src.w.at(i, j));
    return {{"d", src.d},
            {"W", std::move(w)},
            {"volume", src.volume},
            {"exact", src.exact},
            {"provenance", src.provenance},
            {"descriptor", src.descriptor}};
}

json gram_strings(const LatticeBasis& l) {
    json rows = json::array();
    for (int r = 0; r < l.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < l.dim(); ++c) row.push_back(Rat64(l.gram4(r, c), 4).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

json classes_json(const Spectrum& sp) {
    json arr = json::array();
    for (const EnergyClass& ec : sp.classes) {
        json members = json::array();
        for (const auto& [s, c] : ec.members) members.push_back({{"S", s.str()}, {"count", c}});
        arr.push_back({{"trace_part", pis_json(ec.trace)},
                       {"energy_float", ec.energy},
                       {"multiplicity", ec.multiplicity},
                       {"members", std::move(members)}});
    }
    return arr;
}

std::string table_spectrum(const Spectrum& sp) {
    std::ostringstream os;
    os << "spectrum of maps from " << sp.source_descriptor << " into " << sp.target_label
       << " (per-slot norm <= " << sp.bound << ")\n";
    if (!sp.exact) os << "energies approximate (merged at 1e-9 relative)\n";
    os << std::left << std::setw(16) << "energy" << std::setw(14) << "multiplicity"
       << "trace\n";
    for (const EnergyClass& ec : sp.classes)
        os << std::left << std::setw(16) << ec.energy << std::setw(14) << ec.multiplicity
           << (sp.exact ? ec.trace.str() : std::string("-")) << "\n";
    return os.str();
}

struct Args {
    std::string spec1, spec2, source;
    int degree = 1;
    std::int64_t bound = 0;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"integral lattices, Siegel theta coefficients, harmonic-map energy spectra"};
    app.name("siegel");

    RunConfig cfg;
    std::string out_path;
    app.add_option("--cap", cfg.cap,
                   "budget in enumerated lattice points before refusing (default 1e8)")
        ->envname("SIEGEL_CAP")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", cfg.threads, "worker threads (default: all cores)")
        ->envname("SIEGEL_THREADS")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "json or table")
        ->envname("SIEGEL_FORMAT")
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("--out", out_path, "write the report to this file (atomic rename)");
    app.add_flag("--no-timestamp", cfg.no_timestamp, "omit generated_at from JSON output");
    app.require_subcommand(1);

    Args a;
    CLI::App* info = app.add_subcommand("lattice-info", "dimension, Gram, discriminant of a lattice");
    info->add_option("spec", a.spec1, "lattice spec, e.g. E8, Z:3, D:4, D+:16, E8+E8")->required();

    CLI::App* theta = app.add_subcommand("theta", "coefficient table of the degree-d theta series");
    theta->add_option("spec", a.spec1, "lattice spec")->required();
    theta->add_option("degree", a.degree, "tuple length d >= 1")->required()->check(CLI::PositiveNumber);
    theta->add_option("bound", a.bound, "max diagonal entry")->required()->check(CLI::NonNegativeNumber);

    CLI::App* tcmp = app.add_subcommand("theta-compare", "compare coefficient tables of two lattices");
    tcmp->add_option("spec1", a.spec1, "first lattice")->required();
    tcmp->add_option("spec2", a.spec2, "second lattice")->required();
    tcmp->add_option("degree", a.degree, "tuple length d >= 1")->required()->check(CLI::PositiveNumber);
    tcmp->add_option("bound", a.bound, "max diagonal entry")->required()->check(CLI::NonNegativeNumber);

    CLI::App* spec = app.add_subcommand("spectrum", "energy spectrum of harmonic maps into a torus");
    spec->add_option("source", a.source, "'milnor' or 'gram:<rational matrix>'")->required();
    spec->add_option("target", a.spec1, "target lattice spec")->required();
    spec->add_option("bound", a.bound, "per-slot norm bound")->required()->check(CLI::NonNegativeNumber);

    CLI::App* scmp = app.add_subcommand("spectrum-compare", "compare spectra into two targets");
    scmp->add_option("source", a.source, "'milnor' or 'gram:<rational matrix>'")->required();
    scmp->add_option("target1", a.spec1, "first target lattice")->required();
    scmp->add_option("target2", a.spec2, "second target lattice")->required();
    scmp->add_option("bound", a.bound, "per-slot norm bound")->required()->check(CLI::NonNegativeNumber);

    app.add_subcommand("milnor-demo", "degree-4 separation of E8+E8 from GAMMA16");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    json j;
    j["schema"] = 1;
    j["command"] = command;
    if (!cfg.no_timestamp) j["generated_at"] = iso_now();
    std::string table;
    int code = 0;

    auto emit = [&]() -> bool {
        std::string text = cfg.format == "json" ? j.dump(2) + "\n" : table;
        if (out_path.empty()) {
            out << text;
            return true;
        }
        std::string tmp = out_path + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f || !(f << text) || !f.flush()) {
                err << "error: cannot write " << tmp << "\n";
                return false;
            }
        }
        if (std::rename(tmp.c_str(), out_path.c_str()) != 0) {
            err << "error: cannot rename " << tmp << " to " << out_path << "\n";
            return false;
        }
        return true;
    };

    try {
        if (command == "lattice-info") {
            LatticeBasis l = parse_lattice_spec(a.spec1);
            j["lattice"] = l.label();
            j["dim"] = l.dim();
            j["is_integral"] = l.is_integral();
            j["is_even"] = l.is_even();
            j["discriminant"] = l.discriminant();
            j["gram"] = gram_strings(l);
            std::ostringstream os;
            os << "lattice " << l.label() << "\n"
               << "dim " << l.dim() << "\n"
               << "integral " << (l.is_integral() ? "yes" : "no") << "\n"
               << "even " << (l.is_even() ? "yes" : "no") << "\n"
               << "discriminant " << l.discriminant() << "\n"
               << "gram\n";
            for (int r = 0; r < l.dim(); ++r) {
                for (int c = 0; c < l.dim(); ++c)
                    os << (c ? " " : "  ") << Rat64(l.gram4(r, c), 4).str();
                os << "\n";
            }
            table = os.str();
        } else if (command == "theta") {
            LatticeBasis l = parse_lattice_spec(a.spec1);
            CoefficientTable t = coefficient_table(l, a.degree, a.bound, cfg);
            j["lattice"] = l.label();
            j["degree"] = a.degree;
            j["bound"] = a.bound;
            j["tuples"] = t.total();
            json entries = json::array();
            for (const auto& [s, c] : t.entries) entries.push_back({{"t", s.str()}, {"count", c}});
            j["entries"] = std::move(entries);
            std::ostringstream os;
            os << "theta coefficients: " << l.label() << ", degree " << a.degree
               << ", diagonal bound " << a.bound << "\n";
            for (const auto& [s, c] : t.entries)
                os << "  " << std::left << std::setw(24) << s.str() << c << "\n";
            os << "total tuples " << t.total() << "\n";
            table = os.str();
        } else if (command == "theta-compare") {
            LatticeBasis l1 = parse_lattice_spec(a.spec1);
            LatticeBasis l2 = parse_lattice_spec(a.spec2);
            auto diffs = compare_theta(l1, l2, a.degree, a.bound, cfg);
            j["lattice_a"] = l1.label();
            j["lattice_b"] = l2.label();
            j["degree"] = a.degree;
            j["bound"] = a.bound;
            j["equal"] = diffs.empty();
            json darr = json::array();
            for (const auto& d : diffs)
                darr.push_back(
                    {{"t", d.t.str()}, {"count_a", d.count_a}, {"count_b", d.count_b}});
            j["differences"] = std::move(darr);
            std::ostringstream os;
            os << "theta tables of " << l1.label() << " and " << l2.label() << " at degree "
               << a.degree << ", bound " << a.bound << ": "
               << (diffs.empty() ? "equal" : "DIFFER") << "\n";
            for (const auto& d : diffs)
                os << "  " << std::left << std::setw(24) << d.t.str() << d.count_a
                   << " vs " << d.count_b << "\n";
            table = os.str();
            code = diffs.empty() ? 0 : 1;
        } else if (command == "spectrum") {
            SourceTorus src = parse_source_spec(a.source);
            LatticeBasis l = parse_lattice_spec(a.spec1);
            Spectrum sp = energy_spectrum(src, l, a.bound, cfg);
            j["source"] = source_json(src);
            j["target"] = sp.target_label;
            j["bound"] = sp.bound;
            j["approximate"] = !sp.exact;
            j["classes"] = classes_json(sp);
            table = table_spectrum(sp);
        } else if (command == "spectrum-compare") {
            SourceTorus src = parse_source_spec(a.source);
            LatticeBasis l1 = parse_lattice_spec(a.spec1);
            LatticeBasis l2 = parse_lattice_spec(a.spec2);
            Spectrum sa = energy_spectrum(src, l1, a.bound, cfg);
            Spectrum sb = energy_spectrum(src, l2, a.bound, cfg);
            auto diffs = compare_spectra(sa, sb);
            j["source"] = source_json(src);
            j["target_a"] = sa.target_label;
            j["target_b"] = sb.target_label;
            j["bound"] = a.bound;
            j["equal"] = diffs.empty();
            json darr = json::array();
            for (const auto& d : diffs)
                darr.push_back({{"trace_part", pis_json(d.trace)},
                                {"energy_float", d.energy},
                                {"multiplicity_a", d.mult_a},
                                {"multiplicity_b", d.mult_b}});
            j["differences"] = std::move(darr);
            std::ostringstream os;
            os << "spectra from " << src.descriptor << " into " << sa.target_label << " and "
               << sb.target_label << " at bound " << a.bound << ": "
               << (diffs.empty() ? "equal" : "DIFFER") << "\n";
            for (const auto& d : diffs)
                os << "  energy " << d.energy << " (trace " << d.trace.str() << "): "
                   << d.mult_a << " vs " << d.mult_b << "\n";
            table = os.str();
            code = diffs.empty() ? 0 : 1;
        } else {  // milnor-demo
            MilnorDemo demo = milnor_demo(cfg);
            SourceTorus src = milnor_source();
            j["source"] = source_json(src);
            j["lattice_a"] = demo.lattice_a;
            j["lattice_b"] = demo.lattice_b;
            j["trace_part"] = pis_json(demo.trace);
            j["energy_float"] = demo.energy;
            json parr = json::array();
            for (const MilnorPattern& p : demo.patterns)
                parr.push_back({{"diag", p.diag},
                                {"arrangements", p.arrangements},
                                {"count_a", p.count_a},
                                {"count_b", p.count_b}});
            j["patterns"] = std::move(parr);
            j["multiplicity_a"] = demo.multiplicity_a;
            j["multiplicity_b"] = demo.multiplicity_b;
            std::uint64_t diff = demo.multiplicity_a > demo.multiplicity_b
                                     ? demo.multiplicity_a - demo.multiplicity_b
                                     : demo.multiplicity_b - demo.multiplicity_a;
            j["difference"] = diff;
            j["checks"] = {{"padded_patterns_equal", demo.padded_patterns_equal},
                           {"only_diagonal_members", demo.only_diagonal_members},
                           {"candidates_checked", demo.candidates_checked},
                           {"distinguishes", demo.distinguishes}};
            std::ostringstream os;
            os << "harmonic maps from the milnor 4-torus, energy class with trace 8\n"
               << "energy " << demo.energy << " = 4 * det(b)\n"
               << std::left << std::setw(12) << "pattern" << std::setw(14) << "arrangements"
               << std::setw(14) << demo.lattice_a << demo.lattice_b << "\n";
            for (const MilnorPattern& p : demo.patterns) {
                std::ostringstream pd;
                pd << p.diag[0] << "," << p.diag[1] << "," << p.diag[2] << "," << p.diag[3];
                os << std::left << std::setw(12) << pd.str() << std::setw(14) << p.arrangements
                   << std::setw(14) << p.count_a << p.count_b << "\n";
            }
            os << "class multiplicity " << demo.multiplicity_a << " vs " << demo.multiplicity_b
               << " (difference " << diff << ")\n"
               << "padded patterns equal: " << (demo.padded_patterns_equal ? "yes" : "no")
               << "\n"
               << "only diagonal members: " << (demo.only_diagonal_members ? "yes" : "no")
               << " (" << demo.candidates_checked << " candidate matrices checked)\n"
               << "verdict: "
               << (demo.distinguishes ? "energy spectra differ" : "no difference found")
               << "\n";
            table = os.str();
            code = demo.distinguishes ? 0 : 1;
        }
    } catch (const CapExceeded& e) {
        j["refused"] = true;
        j["estimate"] = e.estimate;
        j["cap"] = cfg.cap;
        j["message"] = e.what();
        std::ostringstream os;
        os << "refused: " << e.what() << " (estimate " << e.estimate << ", cap " << cfg.cap
           << ")\n";
        table = os.str();
        if (!emit()) return 2;
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (!emit()) return 2;
    return code;
}

}  // namespace siegel
