#include <catch2/catch_amalgamated.hpp>

#include "flagval/order.hpp"
#include "flagval/patterns.hpp"
#include "flagval/reduce.hpp"
#include "oracle.hpp"

#include <random>

using namespace flagval;

TEST_CASE("check_af: constant certifies with a one-layer chain") {
    auto f = InvariantFunction::constant(Lattice{Domain::integers(), 2}, ValueSet::labels(), 5);
    auto v = check_af(f);
    REQUIRE(v.kind == AFVerdict::Kind::Certified);
    CHECK(v.filtration.layers.size() == 1);
    CHECK(validate_filtration(f, v.filtration));
}

TEST_CASE("check_af: seven-point pattern on (Z/2)^3 is exceptional") {
    auto f = fano_fn_f2();
    // every rank-2 restriction is AF
    auto sweep = sweep_rank2(f);
    CHECK(sweep.all_af);
    // the oracle agrees the function itself is not AF
    oracle::FqSpace sp(2, 3);
    std::map<oracle::I, int> of;
    for (oracle::I e = 1; e < sp.size; ++e)
        of[e] = static_cast<int>(f.eval_any(fq_decode(e, 2, 3)));
    CHECK(!oracle::is_af(sp, of));

    auto v = check_af(f);
    REQUIRE(v.kind == AFVerdict::Kind::Exceptional);
    CHECK(v.exceptional == ExceptionalKind::Fano);
    // the normalizing basis reproduces the pattern exactly
    REQUIRE(v.basis.size() == 3);
    auto at = [&](Int c1, Int c2, Int c3) {
        Vec x(3, 0);
        Vec c{c1, c2, c3};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) x[j] = imod(x[j] + c[i] * v.basis[i][j], 2);
        return f.eval_any(x);
    };
    Val zero_val = at(1, 0, 1);
    CHECK(at(0, 1, 1) == zero_val);
    CHECK(at(1, 1, 1) == zero_val);
    for (auto [c1, c2, c3] : {std::array<Int, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}})
        CHECK(at(c1, c2, c3) != zero_val);
}

TEST_CASE("check_af: delta function on P^2(F_3) certifies with a 2-step chain") {
    Lattice L{Domain::prime_field(3), 3};
    auto f = delta_fn(L, Vec{1, 2, 0});
    // brute-force oracle confirms
    oracle::FqSpace sp(3, 3);
    std::map<oracle::I, int> of;
    for (oracle::I e = 1; e < sp.size; ++e)
        of[e] = static_cast<int>(f.eval_any(fq_decode(e, 3, 3)));
    CHECK(oracle::is_af(sp, of));

    auto v = check_af(f);
    REQUIRE(v.kind == AFVerdict::Kind::Certified);
    REQUIRE(v.filtration.layers.size() == 2);
    CHECK(v.filtration.layers[0].value == 0);
    CHECK(v.filtration.layers[1].value == 1);
    CHECK(v.filtration.layers[1].group.rank() == 1);
    CHECK(validate_filtration(f, v.filtration));
}

TEST_CASE("rank3_reduce: mod-4 pattern is exceptional with a faithful basis") {
    auto f = mod4_fn_z3(Window{16, 3});
    auto v = rank3_reduce(f);
    REQUIRE(v.kind == AFVerdict::Kind::Exceptional);
    CHECK(v.exceptional == ExceptionalKind::Mod4);
    REQUIRE(v.basis.size() == 3);
    // value pattern in the reported basis matches the canonical template
    auto reps = enumerate_primitive_classes(Lattice{Domain::integers(), 3}, 4);
    for (const auto& n : reps) {
        Vec x(3, 0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) x[j] += n[i] * v.basis[i][j];
        CHECK(f.eval_any(x) == mod4_template(n));
    }
}

TEST_CASE("rank3_reduce: seven-point pattern lifted to Z^3") {
    auto f = fano_fn_z3();
    auto v = rank3_reduce(f);
    REQUIRE(v.kind == AFVerdict::Kind::Exceptional);
    CHECK(v.exceptional == ExceptionalKind::Fano);
}

TEST_CASE("rank3_reduce: certified when the nongeneric classes span a proper subgroup") {
    // value 1 exactly on the (0,0,1) residue class: the chain starts at the
    // preimage of the b1-line mod 2
    Lattice L{Domain::integers(), 3};
    auto reps = enumerate_primitive_classes(L, 2);
    std::vector<Val> vals;
    for (const auto& r : reps) vals.push_back(r == Vec{0, 0, 1} ? 1 : 0);
    auto f = InvariantFunction::depth_k(L, ValueSet::residue(2), 2, 1, vals);
    auto v = rank3_reduce(f);
    REQUIRE(v.kind == AFVerdict::Kind::Certified);
    CHECK(v.filtration.layers[1].group ==
          Subgroup::span(L, {{2, 0, 0}, {0, 2, 0}, {0, 0, 1}}));
    CHECK(validate_filtration(f, v.filtration));
}

TEST_CASE("detect_special_basis") {
    Lattice L{Domain::integers(), 3};
    // constant: no b1 with a different value exists
    auto c = InvariantFunction::constant(L, ValueSet::residue(2), 0);
    CHECK(!detect_special_basis(c).has_value());

    // value 1 exactly on odd multiples of e3
    auto reps = enumerate_primitive_classes(L, 2);
    std::vector<Val> vals;
    for (const auto& r : reps) vals.push_back(r == Vec{0, 0, 1} ? 1 : 0);
    auto f = InvariantFunction::depth_k(L, ValueSet::residue(2), 2, 1, vals);
    auto basis = detect_special_basis(f);
    REQUIRE(basis.has_value());
    const Mat& b = *basis;
    CHECK((detail::det3(b) == 1 || detail::det3(b) == -1));
    Val va = f.eval_any(b[0]);
    CHECK(f.eval_any(b[1]) == va);
    CHECK(f.eval_any(vec_add(b[0], b[2])) == va);
    CHECK(f.eval_any(vec_add(b[1], b[2])) == va);
    CHECK(f.eval_any(b[2]) != va);

    // the exceptional patterns have no special basis
    CHECK(!detect_special_basis(fano_fn_z3()).has_value());
    CHECK(!detect_special_basis(mod4_fn_z3()).has_value());
}

TEST_CASE("finite-index lifting: certified restriction lifts to the parent window") {
    auto f = staircase_fn(2, 1);
    Subgroup B = Subgroup::span(f.dom, {{1, 0}, {0, 2}});
    auto fB = restrict_to(f, B);
    auto vB = check_af(fB);
    CHECK(vB.kind == AFVerdict::Kind::Certified);
    auto v = check_af(f);
    CHECK(v.kind == AFVerdict::Kind::Certified);
    CHECK(v.window.box == f.win.box);
}

TEST_CASE("postcompose preserves certification") {
    // three-valued layered function on F_3^3: 0 generically, 1 on a plane
    // minus a line, 2 on the line
    Lattice L{Domain::prime_field(3), 3};
    Subgroup plane = Subgroup::span(L, {{1, 0, 0}, {0, 1, 0}});
    Subgroup line = Subgroup::span(L, {{1, 0, 0}});
    Int count = ipow(3, 3) - 1;
    std::vector<Val> vals(count);
    for (Int e = 1; e <= count; ++e) {
        Vec a = fq_decode(e, 3, 3);
        vals[e - 1] = line.contains(a) ? 2 : (plane.contains(a) ? 1 : 0);
    }
    auto f = InvariantFunction::full_table(L, ValueSet::labels(), vals);
    auto v = check_af(f);
    REQUIRE(v.kind == AFVerdict::Kind::Certified);
    CHECK(v.filtration.layers.size() == 3);

    std::map<Val, Val> h{{0, 7}, {1, 8}, {2, 8}};
    auto g = postcompose(h, ValueSet::labels(), f);
    auto vg = check_af(g);
    CHECK(vg.kind == AFVerdict::Kind::Certified);
}

TEST_CASE("reduce_value_set: AF three-valued function passes all reductions") {
    Lattice L{Domain::prime_field(3), 2};
    // 0 off a point, 2 at the point: two values but labeled in a 3-label set
    auto f = InvariantFunction::from_projective(L, ValueSet::labels(), {2, 0, 0, 0});
    auto r = reduce_value_set(f);
    CHECK(r.kind == ReduceOutcome::Kind::AllReductionsAF);
    CHECK(check_af(f).kind == AFVerdict::Kind::Certified);
}

TEST_CASE("reduce_value_set: relabeled seven-point pattern fails a Z/2 reduction") {
    auto f = fano_fn_f2();
    std::map<Val, Val> relabel{{0, 77}, {1, 99}};
    auto g = postcompose(relabel, ValueSet::labels(), f);
    auto r = reduce_value_set(g);
    REQUIRE(r.kind == ReduceOutcome::Kind::Counterexample);
    CHECK(r.target == 2);
    auto reduced = postcompose(r.h, ValueSet::residue(2), g);
    CHECK(validate_witness(reduced, r.witness));
}

TEST_CASE("Z/4 separation of a pairwise-distinct triple") {
    // rank-2 table attaining three values with a, b, a+b pairwise distinct
    Lattice L{Domain::integers(), 2};
    auto reps = enumerate_primitive_classes(L, 2); // (0,1),(1,0),(1,1)
    auto f = InvariantFunction::depth_k(L, ValueSet::labels(), 2, 1, {10, 20, 30});
    // the stated assignment h(f(a)) = 0, h(f(b)) = 1, h(f(a+b)) = 2
    std::map<Val, Val> h{{20, 0}, {10, 1}, {30, 2}};
    auto g = postcompose(h, ValueSet::residue(4), f);
    auto v = check_af(g);
    REQUIRE(v.kind == AFVerdict::Kind::Refuted);
    REQUIRE(v.witness.has_value());
    CHECK(validate_witness(g, *v.witness));
    CHECK(std::holds_alternative<DistinctTriple>(*v.witness));

    auto r = reduce_value_set(f);
    REQUIRE(r.kind == ReduceOutcome::Kind::Counterexample);
}

TEST_CASE("reduce_value_set agrees with check_af on random functions") {
    std::mt19937 rng(23);
    // prime-field side
    Lattice L3{Domain::prime_field(3), 2};
    for (int t = 0; t < 40; ++t) {
        std::vector<Val> vals(4);
        for (auto& v : vals) v = rng() % 3;
        auto f = InvariantFunction::from_projective(L3, ValueSet::labels(), vals);
        bool af = check_af(f).kind == AFVerdict::Kind::Certified;
        bool all = reduce_value_set(f).kind == ReduceOutcome::Kind::AllReductionsAF;
        CHECK(af == all);
    }
    // lattice side
    Lattice LZ{Domain::integers(), 2};
    auto reps = enumerate_primitive_classes(LZ, 4);
    for (int t = 0; t < 30; ++t) {
        std::vector<Val> vals(reps.size());
        for (auto& v : vals) v = rng() % 3;
        auto f = InvariantFunction::depth_k(LZ, ValueSet::labels(), 2, 2, vals);
        bool af = check_af(f).kind == AFVerdict::Kind::Certified;
        bool all = reduce_value_set(f).kind == ReduceOutcome::Kind::AllReductionsAF;
        CHECK(af == all);
    }
}

TEST_CASE("engine matches the oracle on every Z/2 function over P^1(F_3) and P^2(F_2)") {
    for (auto [q, n] : {std::pair<Int, int>{3, 2}, {2, 3}}) {
        Lattice L{Domain::prime_field(q), n};
        auto reps = enumerate_primitive_classes(L, q);
        oracle::FqSpace sp(q, n);
        for (Int mask = 0; mask < (Int{1} << reps.size()); ++mask) {
            std::vector<Val> vals(reps.size());
            for (size_t i = 0; i < reps.size(); ++i) vals[i] = (mask >> i) & 1;
            auto f = InvariantFunction::from_projective(L, ValueSet::residue(2), vals);
            std::map<oracle::I, int> of;
            for (oracle::I e = 1; e < sp.size; ++e)
                of[e] = static_cast<int>(f.eval_any(fq_decode(e, q, n)));
            bool expected = oracle::is_af(sp, of);
            bool got = check_af(f).kind == AFVerdict::Kind::Certified;
            CHECK(got == expected);
        }
    }
}
