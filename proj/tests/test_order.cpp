#include <catch2/catch_amalgamated.hpp>

#include "flagval/order.hpp"
#include "flagval/patterns.hpp"

using namespace flagval;

TEST_CASE("build_order: constant function has a single stratum") {
    auto f = InvariantFunction::constant(Lattice{Domain::prime_field(3), 2}, ValueSet::labels(), 1);
    auto out = build_order(f);
    REQUIRE(out.kind == OrderOutcome::Kind::Order);
    CHECK(out.order.strata.size() == 1);
    CHECK(out.order.strata[0].size() == out.order.elems.size());
}

TEST_CASE("build_order: staircase strata match the peel filtration") {
    auto f = staircase_fn(2, 1);
    auto out = build_order(f, f.win.box);
    REQUIRE(out.kind == OrderOutcome::Kind::Order);
    const auto& ord = out.order;

    // the generic element sits above the odd-layer element
    int l01 = ord.level[ord.index_of(Vec{0, 1})];
    int l10 = ord.level[ord.index_of(Vec{1, 0})];
    int l02 = ord.level[ord.index_of(Vec{0, 2})];
    CHECK(l01 == 0);
    CHECK(l10 == 1);
    CHECK(l02 == 2);

    // assembled chain agrees with the peeled certificate on every layer up to
    // the last, where the window runs out and the two constructions pad the
    // boundary differently
    auto peeled = peel(f);
    REQUIRE(peeled.kind == PeelOutcome::Kind::Certified);
    auto chain = filtration_from_order(f, ord);
    REQUIRE(chain.size() == peeled.filtration.layers.size());
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        CHECK(chain[i] == peeled.filtration.layers[i].group);

    // separators recorded for the same-value comparisons, and they re-check
    CHECK(!ord.separators.empty());
    for (const auto& s : ord.separators) {
        Val vu = f.eval_any(s.upper), vs = f.eval_any(s.separator), vl = f.eval_any(s.lower);
        CHECK(vu != vs);
        CHECK(vl != vs);
        CHECK(f.eval_any(vec_add(s.upper, s.separator)) == vu);
        CHECK(f.eval_any(vec_add(s.separator, s.lower)) == vs);
    }
    CHECK(!ord.unhandled);
}

TEST_CASE("build_order: delta on P^2(F_3) strata agree with peeling") {
    Lattice L{Domain::prime_field(3), 3};
    auto f = delta_fn(L, Vec{0, 1, 2});
    auto out = build_order(f);
    REQUIRE(out.kind == OrderOutcome::Kind::Order);
    REQUIRE(out.order.strata.size() == 2);
    CHECK(out.order.strata[0].size() == 24); // 12 generic points, 2 vectors each
    CHECK(out.order.strata[1].size() == 2);
    auto chain = filtration_from_order(f, out.order);
    auto peeled = peel(f);
    REQUIRE(peeled.kind == PeelOutcome::Kind::Certified);
    REQUIRE(chain.size() == peeled.filtration.layers.size());
    for (size_t i = 0; i < chain.size(); ++i)
        CHECK(chain[i] == peeled.filtration.layers[i].group);
}

TEST_CASE("build_order: seven-point pattern lifted to Z^3 yields a cycle") {
    auto f = fano_fn_z3();
    auto out = build_order(f, 2);
    REQUIRE(out.kind == OrderOutcome::Kind::Contradiction);
    CHECK(out.cycle.elems.size() >= 4);
    CHECK(validate_witness(f, out.cycle));
}

TEST_CASE("build_order: rank-2 failure is reported") {
    Lattice L{Domain::prime_field(3), 2};
    auto f = InvariantFunction::from_projective(L, ValueSet::labels(), {0, 1, 2, 2});
    CHECK_THROWS_AS(build_order(f), Rank2Failure);
}
