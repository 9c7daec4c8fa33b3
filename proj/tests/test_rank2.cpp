#include <catch2/catch_amalgamated.hpp>

#include "flagval/patterns.hpp"
#include "flagval/rank2.hpp"

#include <random>

using namespace flagval;

TEST_CASE("classify: constant on F_5^2") {
    auto f = InvariantFunction::constant(Lattice{Domain::prime_field(5), 2}, ValueSet::labels(), 3);
    auto r = classify_rank2(f);
    REQUIRE(r.kind == Rank2Result::Kind::Classified);
    CHECK(r.cls.kind == Rank2Class::Kind::Constant);
    CHECK(r.cls.generic_value == 3);
}

TEST_CASE("classify: one-off-point on P^1(F_3)") {
    Lattice L{Domain::prime_field(3), 2};
    // value 1 at (0:1), 0 at the other three points
    auto f = InvariantFunction::from_projective(L, ValueSet::residue(2), {1, 0, 0, 0});
    auto r = classify_rank2(f);
    REQUIRE(r.kind == Rank2Result::Kind::Classified);
    CHECK(r.cls.kind == Rank2Class::Kind::OffSubgroup);
    CHECK(r.cls.direction == Vec{0, 1});
    CHECK(r.cls.inner_value == 1);
    CHECK(r.cls.generic_value == 0);
}

TEST_CASE("classify: 2-2 split on P^1(F_3) is not AF") {
    Lattice L{Domain::prime_field(3), 2};
    auto f = InvariantFunction::from_projective(L, ValueSet::residue(2), {1, 1, 0, 0});
    auto r = classify_rank2(f);
    REQUIRE(r.kind == Rank2Result::Kind::NotAF);
    CHECK(validate_witness(f, r.witness));
}

TEST_CASE("classify: basic staircase") {
    auto f = staircase_fn(2, 1);
    auto r = classify_rank2(f);
    REQUIRE(r.kind == Rank2Result::Kind::Classified);
    CHECK(r.cls.kind == Rank2Class::Kind::Typical);
    CHECK(r.cls.prime == 2);
    CHECK(r.cls.conductor == 0);
    CHECK(r.cls.phase == 0);
    CHECK(validate_filtration(f, r.filtration));
    // first chain subgroup is Z(1,0) + 2Z(0,1)
    CHECK(r.filtration.layers[1].group.gens == Mat{{1, 0}, {0, 2}});
}

TEST_CASE("classify: staircase restricted to an index-2 subgroup shifts phase") {
    auto f = staircase_fn(2, 1);
    Subgroup B = Subgroup::span(f.dom, {{2, 0}, {0, 1}});
    auto g = restrict_to(f, B);
    auto r = classify_rank2(g);
    REQUIRE(r.kind == Rank2Result::Kind::Classified);
    CHECK(r.cls.kind == Rank2Class::Kind::Typical);
    CHECK(r.cls.prime == 2);
    CHECK(r.cls.conductor == 1);
    CHECK(r.cls.phase == 1);
}

TEST_CASE("classify: staircase at p=3") {
    auto f = staircase_fn(3, 1, 5, 6);
    auto r = classify_rank2(f);
    REQUIRE(r.kind == Rank2Result::Kind::Classified);
    CHECK(r.cls.kind == Rank2Class::Kind::Typical);
    CHECK(r.cls.prime == 3);
    CHECK(r.cls.generic_value == 5);
}

TEST_CASE("classify: window oracle constant off a cyclic direction") {
    Lattice L{Domain::integers(), 2};
    auto f = InvariantFunction::window_oracle(
        L, ValueSet::residue(2), Window{8, 1}, 2, 1,
        [](const Vec& a) -> Val { return a[1] == 0 ? 1 : 0; });
    auto r = classify_rank2(f);
    REQUIRE(r.kind == Rank2Result::Kind::Classified);
    CHECK(r.cls.kind == Rank2Class::Kind::OffSubgroup);
    CHECK(r.cls.direction == Vec{1, 0});
    CHECK(r.cls.prime == 0); // p(A) = 0
}

TEST_CASE("two-value law: three attained values never classify") {
    Lattice L{Domain::integers(), 2};
    std::mt19937 rng(11);
    auto reps = enumerate_primitive_classes(L, 4);
    int tried = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<Val> vals(reps.size());
        for (auto& v : vals) v = rng() % 3;
        std::set<Val> distinct(vals.begin(), vals.end());
        if (distinct.size() < 3) continue;
        ++tried;
        auto f = InvariantFunction::depth_k(L, ValueSet::labels(), 2, 2, vals);
        auto r = classify_rank2(f);
        CHECK(r.kind == Rank2Result::Kind::NotAF);
        CHECK(validate_witness(f, r.witness));
    }
    CHECK(tried > 50);
}

TEST_CASE("coprime descent on certified staircases") {
    for (Int p : {2, 3}) {
        auto f = staircase_fn(p, 1);
        auto r = classify_rank2(f);
        REQUIRE(r.kind == Rank2Result::Kind::Classified);
        const Subgroup& A1 = r.filtration.layers[1].group;
        for (Int x = -4; x <= 4; ++x)
            for (Int y = -4; y <= 4; ++y) {
                if (x == 0 && y == 0) continue;
                for (Int n = 1; n <= 4; ++n) {
                    if (igcd(n, p) != 1) continue;
                    Vec a{x, y};
                    if (A1.contains(vec_scale(n, a))) CHECK(A1.contains(a));
                }
            }
    }
}

TEST_CASE("functional equation: staircase and parity hold") {
    auto f = staircase_fn(2, 1);
    // f((0,1)) = generic, f((1,0)) = layer-1 value, f((1,1)) = generic
    auto r = check_functional_equation(f, Vec{0, 1}, Vec{1, 0});
    CHECK(r.holds);

    // parity of the second coordinate (on primitive vectors) is the same
    // staircase; certified with first subgroup Z(1,0) + 2Z(0,1)
    auto c = classify_rank2(f);
    CHECK(c.filtration.layers[1].group.gens == Mat{{1, 0}, {0, 2}});
}

TEST_CASE("functional equation: depth-2 flip violates") {
    Lattice L{Domain::integers(), 2};
    auto reps = enumerate_primitive_classes(L, 4);
    std::vector<Val> vals;
    for (const auto& r : reps) {
        Val parity = imod(r[1], 2);
        if (r == Vec{1, 1}) parity = 0; // flip one mod-4 orbit
        vals.push_back(parity);
    }
    auto f = InvariantFunction::depth_k(L, ValueSet::residue(2), 2, 2, vals);
    CHECK(f.eval_any(Vec{1, 1}) == 0);
    CHECK(f.eval_any(Vec{1, 3}) == 1);
    auto fe = check_functional_equation(f, Vec{1, 0}, Vec{0, 1});
    CHECK(!fe.holds);
    auto r = classify_rank2(f);
    CHECK(r.kind == Rank2Result::Kind::NotAF);

    // bad basis precondition
    CHECK_THROWS_AS(check_functional_equation(f, Vec{0, 1}, Vec{1, 0}), BasisConditionFailure);
}
