#include <catch2/catch_amalgamated.hpp>

#include "flagval/core.hpp"
#include "flagval/padic.hpp"

#include <random>

using namespace flagval;

TEST_CASE("hnf is canonical and idempotent") {
    Lattice L{Domain::integers(), 3};
    std::mt19937 rng(7);
    std::uniform_int_distribution<Int> d(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        Mat m(3, Vec(3));
        for (auto& row : m)
            for (auto& x : row) x = d(rng);
        Subgroup s = Subgroup::span(L, m);
        // normalizing twice is bit-identical
        CHECK(Subgroup::span(L, s.gens).gens == s.gens);
        // row-shuffled and row-combined generators normalize identically
        Mat m2 = m;
        std::swap(m2[0], m2[2]);
        m2[1] = vec_add(m2[1], vec_scale(3, m2[0]));
        CHECK(Subgroup::span(L, m2).gens == s.gens);
        // every generator is a member
        for (const auto& row : m) CHECK(s.contains(row));
    }
}

TEST_CASE("hnf membership and index") {
    Lattice L{Domain::integers(), 2};
    Subgroup s = Subgroup::span(L, {{2, 0}, {0, 3}});
    CHECK(s.contains(Vec{2, 3}));
    CHECK(!s.contains(Vec{1, 0}));
    CHECK(s.index_in_parent() == 6);
    Subgroup t = Subgroup::span(L, {{1, 5}});
    CHECK(t.rank() == 1);
    CHECK(t.index_in_parent() == -1);
    CHECK(t.proper_in(s) == false);
    CHECK(t.proper_in(Subgroup::full(L)));
}

TEST_CASE("rref over F_q is canonical") {
    Lattice L{Domain::prime_field(3), 3};
    Subgroup s = Subgroup::span(L, {{1, 2, 0}, {1, 1, 0}});
    Subgroup t = Subgroup::span(L, {{0, 1, 0}, {2, 0, 0}});
    CHECK(s.gens == t.gens);
    CHECK(s.rank() == 2);
    CHECK(s.index_in_parent() == 3);
    CHECK(s.contains(Vec{2, 2, 0}));
    CHECK(!s.contains(Vec{0, 0, 1}));
}

TEST_CASE("elementary divisors") {
    CHECK(elementary_divisors({{2, 0}, {0, 1}}) == std::vector<Int>{1, 2});
    CHECK(elementary_divisors({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == std::vector<Int>{1, 1, 1});
    CHECK(elementary_divisors({{2, 0}, {0, 4}}) == std::vector<Int>{2, 4});
    CHECK(elementary_divisors({{1, 2, 3}}) == std::vector<Int>{1});
}

TEST_CASE("coordinates round-trip") {
    Lattice L{Domain::integers(), 3};
    Subgroup s = Subgroup::span(L, {{1, 2, 0}, {0, 4, 2}});
    Vec a = vec_add(s.gens[0], vec_scale(-3, s.gens[1]));
    auto c = s.coordinates(a);
    REQUIRE(c.has_value());
    CHECK(s.embed(*c) == a);
}

TEST_CASE("padic arithmetic is exact mod p^N") {
    PadicInt a(2, 8, 77), b(2, 8, 200);
    CHECK((a + b).residue() == imod(277, 256));
    CHECK((a * b).residue() == imod(77 * 200, 256));
    CHECK((a - b).residue() == imod(-123, 256));
    CHECK(a.is_unit());
    CHECK((a * a.inv()).residue() == 1);
    CHECK(PadicInt(2, 8, 12).val() == 2);
    CHECK(PadicInt(2, 8, 0).val() == 8);
    auto d = PadicInt(3, 5, 17).digits();
    CHECK(d == "22100"); // 17 = 2 + 2*3 + 1*9
    CHECK(PadicInt::from_digits(3, d).residue() == 17);
}
