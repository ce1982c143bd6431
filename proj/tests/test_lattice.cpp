#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "siegel/lattice.hpp"

using namespace siegel;

TEST_CASE("gram matrix parse, print, order") {
    GramMatrix g = GramMatrix::parse("2,0;0,2");
    CHECK(g.dim() == 2);
    CHECK(g.at(0, 0) == 2);
    CHECK(g.at(0, 1) == 0);
    CHECK(g.str() == "2,0;0,2");
    CHECK(g.trace() == 4);
    CHECK(g.is_even());
    CHECK(g.is_diagonal());
    CHECK(g.is_psd());

    CHECK_THROWS(GramMatrix::parse("2,1;0,2"));  // asymmetric
    CHECK_THROWS(GramMatrix::parse("2,0;0"));    // ragged
    CHECK_THROWS(GramMatrix::parse(""));

    GramMatrix notpsd = GramMatrix::parse("2,3;3,2");
    CHECK_FALSE(notpsd.is_psd());
    CHECK_FALSE(GramMatrix::parse("1,0;0,1").is_even());

    GramMatrix d = GramMatrix::diagonal({2, 4});
    CHECK(d.str() == "2,0;0,4");

    // order: dim, then trace, then entries
    CHECK(GramMatrix::parse("2") < GramMatrix::parse("1,0;0,1"));
    CHECK(GramMatrix::parse("1,0;0,1") < GramMatrix::parse("2,0;0,2"));
    CHECK(GramMatrix::parse("0,1;1,4") < GramMatrix::parse("2,0;0,2"));
}

TEST_CASE("Z^n construction") {
    LatticeBasis z3 = construct_zn(3);
    CHECK(z3.label() == "Z3");
    CHECK(z3.dim() == 3);
    CHECK(z3.is_integral());
    CHECK_FALSE(z3.is_even());
    CHECK(z3.discriminant() == 1);
    GramMatrix g = z3.gram();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(g.at(r, c) == (r == c ? 1 : 0));
}

TEST_CASE("D_n construction") {
    LatticeBasis d2 = construct_dn(2);
    GramMatrix g2 = d2.gram();
    CHECK(g2.at(0, 0) == 2);
    CHECK(g2.at(1, 1) == 2);
    CHECK(g2.at(0, 1) == 0);

    LatticeBasis d3 = construct_dn(3);
    CHECK(d3.is_integral());
    CHECK(d3.is_even());
    CHECK(d3.discriminant() == 4);

    LatticeBasis d8 = construct_dn(8);
    CHECK(d8.discriminant() == 4);
    CHECK(d8.is_even());

    CHECK_THROWS(construct_dn(1));
}

TEST_CASE("D_n^+ construction") {
    LatticeBasis e8 = construct_e8();
    CHECK(e8.label() == "E8");
    CHECK(e8.dim() == 8);
    CHECK(e8.is_integral());
    CHECK(e8.is_even());
    CHECK(e8.discriminant() == 1);

    LatticeBasis g16 = construct_gamma16();
    CHECK(g16.label() == "GAMMA16");
    CHECK(g16.dim() == 16);
    CHECK(g16.is_integral());
    CHECK(g16.is_even());
    CHECK(g16.discriminant() == 1);

    // glue vector norm n/4: integral only when 4 | n, even only when 8 | n
    LatticeBasis d4p = construct_dn_plus(4);
    CHECK(d4p.is_integral());
    CHECK_FALSE(d4p.is_even());
    CHECK(d4p.discriminant() == 1);

    LatticeBasis d12p = construct_dn_plus(12);
    CHECK(d12p.is_integral());
    CHECK_FALSE(d12p.is_even());
    CHECK(d12p.discriminant() == 1);

    LatticeBasis d10p = construct_dn_plus(10);
    CHECK_FALSE(d10p.is_integral());
    CHECK(d10p.discriminant() == 1);
    CHECK_THROWS_WITH_AS(d10p.gram(), doctest::Contains("D10+"), std::domain_error);

    CHECK_THROWS_WITH_AS(construct_dn_plus(7), doctest::Contains("glue"),
                         std::invalid_argument);
}

TEST_CASE("direct sums") {
    LatticeBasis s = direct_sum(construct_zn(2), construct_dn(3));
    CHECK(s.label() == "Z2+D3");
    CHECK(s.dim() == 5);
    CHECK(s.discriminant() == 4);
    GramMatrix g = s.gram();
    for (int r = 0; r < 2; ++r)
        for (int c = 2; c < 5; ++c) CHECK(g.at(r, c) == 0);
    CHECK(g.at(0, 0) == 1);
    CHECK(g.at(2, 2) == 2);

    LatticeBasis ee = parse_lattice_spec("E8+E8");
    CHECK(ee.label() == "E8+E8");
    CHECK(ee.dim() == 16);
    CHECK(ee.discriminant() == 1);
    CHECK(ee.is_even());
}

TEST_CASE("spec parser errors carry position") {
    CHECK(parse_lattice_spec("Z:3").label() == "Z3");
    CHECK(parse_lattice_spec("D+:16").label() == "D16+");
    CHECK_THROWS_WITH_AS(parse_lattice_spec("E9"), doctest::Contains("position"),
                         std::invalid_argument);
    CHECK_THROWS(parse_lattice_spec(""));
    CHECK_THROWS(parse_lattice_spec("Z:0"));
    CHECK_THROWS(parse_lattice_spec("Z:2+"));
    CHECK_THROWS(parse_lattice_spec("Q:3"));
    CHECK_THROWS(parse_lattice_spec("Z:x"));
}

TEST_CASE("membership coordinates are exact") {
    LatticeBasis z2 = construct_zn(2);
    auto c = z2.member_coordinates({2, 0});  // (1,0) in half units
    REQUIRE(c.has_value());
    CHECK((*c)[0] == 1);
    CHECK((*c)[1] == 0);
    CHECK_FALSE(z2.member_coordinates({1, 0}).has_value());  // (1/2, 0)

    LatticeBasis d3 = construct_dn(3);
    CHECK(d3.member_coordinates({2, 2, 0}).has_value());       // (1,1,0)
    CHECK_FALSE(d3.member_coordinates({2, 0, 0}).has_value()); // (1,0,0): odd sum

    LatticeBasis e8 = construct_e8();
    std::vector<std::int64_t> glue(8, 1);  // (1/2,...,1/2)
    CHECK(e8.member_coordinates(glue).has_value());
    std::vector<std::int64_t> half(8, 0);
    half[0] = 1;
    CHECK_FALSE(e8.member_coordinates(half).has_value());

    // verification substitutes back: wrong dimension throws
    CHECK_THROWS(z2.member_coordinates({1, 0, 0}));
}
