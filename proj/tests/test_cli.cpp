#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "siegel/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"siegel"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    int code = siegel::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json parse(const Run& r) { return json::parse(r.out); }

}  // namespace

TEST_CASE("lattice-info reports structure") {
    Run r = cli({"--no-timestamp", "lattice-info", "E8"});
    REQUIRE(r.code == 0);
    json j = parse(r);
    CHECK(j["schema"] == 1);
    CHECK(j["command"] == "lattice-info");
    CHECK(j["dim"] == 8);
    CHECK(j["discriminant"] == 1);
    CHECK(j["is_even"] == true);
    CHECK(j["is_integral"] == true);
    CHECK(j.count("generated_at") == 0);

    json ee = parse(cli({"--no-timestamp", "lattice-info", "E8+E8"}));
    CHECK(ee["dim"] == 16);
    CHECK(ee["discriminant"] == 1);

    json d3 = parse(cli({"--no-timestamp", "lattice-info", "D:3"}));
    CHECK(d3["discriminant"] == 4);
    CHECK(d3["is_even"] == true);
    CHECK(d3["gram"][0][0] == "2");

    json d10p = parse(cli({"--no-timestamp", "lattice-info", "D+:10"}));
    CHECK(d10p["is_integral"] == false);
    CHECK(d10p["gram"][9][9] == "5/2");
}

TEST_CASE("usage errors exit 2") {
    CHECK(cli({"lattice-info", "E9"}).code == 2);
    CHECK(cli({"lattice-info", "E9"}).err.find("position") != std::string::npos);
    CHECK(cli({"lattice-info"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"--bogus", "lattice-info", "E8"}).code == 2);
    CHECK(cli({"theta", "E8", "0", "2"}).code == 2);
    CHECK(cli({"theta", "E8", "1", "-1"}).code == 2);
    CHECK(cli({"spectrum", "nope:1", "Z:1", "2"}).code == 2);
    CHECK(cli({"--cap", "0", "theta", "E8", "1", "2"}).code == 2);
    CHECK(cli({"theta-compare", "D+:10", "Z:10", "1", "2"}).code == 2);  // non-integral
}

TEST_CASE("help exits 0") {
    Run r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("milnor-demo") != std::string::npos);
}

TEST_CASE("theta tables as JSON") {
    json z = parse(cli({"--no-timestamp", "theta", "Z:1", "1", "4"}));
    REQUIRE(z["entries"].size() == 3);  // norms 0, 1, 4
    CHECK(z["entries"][0]["t"] == "0");
    CHECK(z["entries"][0]["count"] == 1);
    CHECK(z["tuples"] == 5);

    json e8 = parse(cli({"--no-timestamp", "theta", "E8", "1", "2"}));
    REQUIRE(e8["entries"].size() == 2);
    CHECK(e8["entries"][1]["t"] == "2");
    CHECK(e8["entries"][1]["count"] == 240);

    json g16 = parse(cli({"--no-timestamp", "theta", "GAMMA16", "1", "2"}));
    CHECK(g16["entries"][1]["count"] == 480);
}

TEST_CASE("theta-compare exit codes distinguish equal from differing") {
    Run same = cli({"--no-timestamp", "theta-compare", "E8", "E8", "2", "2"});
    CHECK(same.code == 0);
    CHECK(parse(same)["equal"] == true);

    Run d1 = cli({"--no-timestamp", "theta-compare", "E8+E8", "GAMMA16", "1", "6"});
    CHECK(d1.code == 0);

    Run z_vs_d = cli({"--no-timestamp", "theta-compare", "Z:2", "D:2", "1", "2"});
    CHECK(z_vs_d.code == 1);
    json j = parse(z_vs_d);
    CHECK(j["equal"] == false);
    REQUIRE(j["differences"].size() == 1);
    CHECK(j["differences"][0]["t"] == "1");
    CHECK(j["differences"][0]["count_a"] == 4);
    CHECK(j["differences"][0]["count_b"] == 0);
}

TEST_CASE("oversized requests refuse with exit 3 and an estimate") {
    Run r = cli({"--no-timestamp", "theta", "E8", "2", "8"});
    CHECK(r.code == 3);
    json j = parse(r);
    CHECK(j["refused"] == true);
    CHECK(j["cap"] == 100000000);
    CHECK(j["estimate"].get<double>() > 1e8);

    // an explicit higher cap admits the degree-3 bound-2 comparison
    Run ok = cli({"--no-timestamp", "--cap", "200000000", "theta-compare", "E8+E8",
                  "GAMMA16", "3", "2"});
    CHECK(ok.code == 0);
}

TEST_CASE("spectrum reports classes") {
    Run r = cli({"--no-timestamp", "spectrum", "gram:1", "Z:1", "9"});
    REQUIRE(r.code == 0);
    json j = parse(r);
    CHECK(j["approximate"] == false);
    REQUIRE(j["classes"].size() == 4);
    CHECK(j["classes"][0]["energy_float"] == 0.0);
    CHECK(j["classes"][0]["multiplicity"] == 1);
    CHECK(j["classes"][1]["energy_float"] == 0.5);
    CHECK(j["classes"][1]["trace_part"]["0"] == "1");
    CHECK(j["classes"][3]["multiplicity"] == 2);
    CHECK(j["source"]["d"] == 1);
    CHECK(j["source"]["W"]["0,0"]["0"] == "1");

    json zero = parse(cli({"--no-timestamp", "spectrum", "gram:1,0;0,1", "D:4", "0"}));
    REQUIRE(zero["classes"].size() == 1);
    CHECK(zero["classes"][0]["multiplicity"] == 1);
}

TEST_CASE("spectrum-compare exit codes") {
    Run eq = cli({"--no-timestamp", "spectrum-compare", "gram:1,0;0,1", "E8+E8", "GAMMA16",
                  "2"});
    CHECK(eq.code == 0);
    CHECK(parse(eq)["equal"] == true);

    Run ne = cli({"--no-timestamp", "spectrum-compare", "gram:1", "Z:2", "D:2", "2"});
    CHECK(ne.code == 1);
    json j = parse(ne);
    REQUIRE(j["differences"].size() == 1);
    CHECK(j["differences"][0]["energy_float"] == 0.5);
    CHECK(j["differences"][0]["multiplicity_a"] == 4);
    CHECK(j["differences"][0]["multiplicity_b"] == 0);
}

TEST_CASE("json output is deterministic") {
    Run a = cli({"--no-timestamp", "spectrum", "gram:1,1/2;1/2,1", "D:3", "2"});
    Run b = cli({"--no-timestamp", "spectrum", "gram:1,1/2;1/2,1", "D:3", "2"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("table format renders text") {
    Run r = cli({"--format", "table", "lattice-info", "D:4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("discriminant 4") != std::string::npos);
    CHECK(r.out.find("{") == std::string::npos);

    Run t = cli({"--format", "table", "theta", "E8", "1", "2"});
    CHECK(t.out.find("240") != std::string::npos);
}

TEST_CASE("environment variables override defaults") {
    setenv("SIEGEL_FORMAT", "table", 1);
    Run r = cli({"lattice-info", "Z:2"});
    unsetenv("SIEGEL_FORMAT");
    CHECK(r.code == 0);
    CHECK(r.out.find("lattice Z2") != std::string::npos);

    setenv("SIEGEL_CAP", "10", 1);
    Run refused = cli({"--no-timestamp", "theta", "E8", "1", "2"});
    unsetenv("SIEGEL_CAP");
    CHECK(refused.code == 3);
}

TEST_CASE("--out writes the report to a file") {
    std::string path = "cli_out_test.json";
    std::remove(path.c_str());
    Run r = cli({"--no-timestamp", "--out", path.c_str(), "lattice-info", "Z:3"});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    json j = json::parse(f);
    CHECK(j["dim"] == 3);
    std::remove(path.c_str());

    Run bad = cli({"--out", "no/such/dir/x.json", "lattice-info", "Z:3"});
    CHECK(bad.code == 2);
}

#ifdef TEST_SIEGEL_BIN
TEST_CASE("installed binary round-trips through a shell") {
    std::string path = "cli_bin_test.json";
    std::remove(path.c_str());
    std::string cmd = std::string(TEST_SIEGEL_BIN) +
                      " --no-timestamp --out " + path + " lattice-info GAMMA16";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    CHECK(WEXITSTATUS(rc) == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    json j = json::parse(f);
    CHECK(j["dim"] == 16);
    CHECK(j["discriminant"] == 1);
    std::remove(path.c_str());

    int rc2 = std::system((std::string(TEST_SIEGEL_BIN) +
                           " --no-timestamp theta-compare Z:2 D:2 1 2 > /dev/null")
                              .c_str());
    REQUIRE(rc2 != -1);
    CHECK(WEXITSTATUS(rc2) == 1);
}
#endif
