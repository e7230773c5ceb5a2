#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "qgal/finite_group.hpp"

using namespace qgal;

TEST_CASE("presets satisfy the group axioms") {
    for (const char* name : {"Z1", "Z2", "Z3", "Z4", "Z5", "Z2xZ2", "Z3xZ3", "Z2xZ2xZ2", "S3", "D4", "Q8"}) {
        FiniteGroup g = group_preset(name); // constructor validates the table
        CHECK(g.identity() == 0);
        for (int x = 0; x < g.order(); ++x) CHECK(g.mul(x, g.inv(x)) == 0);
    }
    CHECK_THROWS_AS(group_preset("Z6?"), ConfigError);
}

TEST_CASE("orders and abelianness") {
    CHECK(group_preset("S3").abelian() == false);
    CHECK(group_preset("D4").abelian() == false);
    CHECK(group_preset("Q8").abelian() == false);
    CHECK(group_preset("Z2xZ2").abelian() == true);
    CHECK(group_preset("Z4").exponent() == 4);
    CHECK(group_preset("Z2xZ2").exponent() == 2);

    FiniteGroup s3 = symmetric_group_3();
    std::multiset<int> orders;
    for (int x = 0; x < 6; ++x) orders.insert(s3.element_order(x));
    CHECK(orders == std::multiset<int>{1, 2, 2, 2, 3, 3});
}

TEST_CASE("subgroup enumeration") {
    CHECK(group_preset("Z5").subgroups().size() == 2);
    CHECK(group_preset("S3").subgroups().size() == 6);   // e, three Z2, Z3, S3
    CHECK(group_preset("Z2xZ2").subgroups().size() == 5); // e, three Z2, all
    // 2-dimensional subspaces of F_2^3: 7 Klein subgroups
    auto subs = group_preset("Z2xZ2xZ2").subgroups();
    int klein = 0;
    for (const auto& h : subs)
        if (h.size() == 4) ++klein;
    CHECK(klein == 7);
}

TEST_CASE("subgroup conjugacy in D4") {
    FiniteGroup d4 = dihedral_group_4();
    std::vector<std::vector<int>> kleins;
    for (const auto& h : d4.subgroups()) {
        if (h.size() != 4) continue;
        // Klein iff every element squares to e
        bool klein = true;
        for (int x : h)
            if (d4.mul(x, x) != 0) klein = false;
        if (klein) kleins.push_back(h);
    }
    REQUIRE(kleins.size() == 2);
    CHECK_FALSE(d4.subgroups_conjugate(kleins[0], kleins[1]));
    CHECK(d4.subgroups_conjugate(kleins[0], kleins[0]));
}

TEST_CASE("right cosets with identity-respecting section") {
    FiniteGroup g = group_preset("Z2xZ2xZ2");
    auto subs = g.subgroups();
    for (const auto& h : subs) {
        auto cd = right_cosets(g, h);
        CHECK(cd.cosets.size() * h.size() == static_cast<std::size_t>(g.order()));
        CHECK(cd.section[0] == 0);
        std::set<int> all;
        for (const auto& c : cd.cosets) all.insert(c.begin(), c.end());
        CHECK(all.size() == static_cast<std::size_t>(g.order()));
    }
}

TEST_CASE("character tables are exact and orthogonal") {
    for (const char* name : {"Z1", "Z2", "Z3", "Z4", "Z5", "Z2xZ2", "Z3xZ3", "Z2xZ2xZ2"}) {
        FiniteGroup g = group_preset(name);
        CharacterTable ct(g);
        const int n = g.order();
        REQUIRE(ct.count() == n);

        // multiplicativity, exactly in turn arithmetic
        for (int c = 0; c < n; ++c)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    CHECK((ct.turn(c, x) + ct.turn(c, y)) % ct.den() == ct.turn(c, g.mul(x, y)) % ct.den());

        // orthogonality sum_g chi(g) conj(chi'(g)) = n delta
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 < n; ++c2) {
                cplx s = 0.0;
                for (int x = 0; x < n; ++x) s += ct.value(c1, x) * std::conj(ct.value(c2, x));
                CHECK(std::abs(s - (c1 == c2 ? cplx(n) : cplx(0.0))) <= 1e-10 * n);
            }

        // dual group is a valid group of the same order
        FiniteGroup dual = dual_group(g, ct);
        CHECK(dual.order() == n);
    }
    CHECK_THROWS_AS(CharacterTable(group_preset("S3")), NotAbelian);
}

TEST_CASE("S3 table round trip") {
    FiniteGroup s3 = symmetric_group_3();
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            int p = s3.mul(g, h);
            CHECK(s3.mul(p, s3.inv(h)) == g);
        }
}
