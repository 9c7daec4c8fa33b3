#include <catch2/catch_amalgamated.hpp>

#include "flagval/patterns.hpp"
#include "flagval/reduction.hpp"
#include "flagval/verify.hpp"

using namespace flagval;

TEST_CASE("incidence sanity of P^2(F_3)") {
    auto s = ProjectiveSpace::make(3, 2);
    CHECK(s.points.size() == 13);
    CHECK(s.lines.size() == 13);
    for (const auto& line : s.lines) CHECK(line.size() == 4);
    for (const auto& pl : s.point_lines) CHECK(pl.size() == 4);
    // every two distinct points lie on exactly one line
    for (size_t i = 0; i < s.points.size(); ++i)
        for (size_t j = i + 1; j < s.points.size(); ++j) {
            int count = 0;
            for (const auto& line : s.lines)
                if (std::binary_search(line.begin(), line.end(), static_cast<int>(i)) &&
                    std::binary_search(line.begin(), line.end(), static_cast<int>(j)))
                    ++count;
            CHECK(count == 1);
        }
}

TEST_CASE("phi_image: equal and constant pairs") {
    Lattice L{Domain::prime_field(3), 3};
    auto f = delta_fn(L, Vec{1, 0, 0});
    auto pm = phi_image(f, f);
    for (const auto& [x, y] : pm.image) CHECK(x == y); // diagonal

    auto zero = InvariantFunction::constant(L, ValueSet::residue(2), 0);
    auto pm2 = phi_image(zero, f);
    for (const auto& [x, y] : pm2.image) CHECK(x.is_zero()); // inside x = 0
}

TEST_CASE("phi_image: a delta pair hits the three points") {
    Lattice L{Domain::prime_field(3), 3};
    auto f1 = delta_fn(L, Vec{1, 0, 0});
    auto f2 = delta_fn(L, Vec{0, 1, 0});
    auto pm = phi_image(f1, f2);
    CHECK(pm.fibers.size() == 3);
    std::set<std::pair<Int, Int>> seen;
    for (const auto& [v, fib] : pm.fibers) seen.insert({v.first.num(), v.second.num()});
    CHECK(seen == std::set<std::pair<Int, Int>>{{0, 0}, {1, 0}, {0, 1}});
}

TEST_CASE("image_shape: constant pair is a degenerate point-and-line") {
    Lattice L{Domain::prime_field(3), 3};
    auto c1 = InvariantFunction::constant(L, ValueSet::residue(2), 1);
    auto c2 = InvariantFunction::constant(L, ValueSet::residue(2), 0);
    auto shape = image_shape(phi_image(c1, c2));
    CHECK(shape.kind == ImageShape::Kind::PointAndLine);
    CHECK(shape.line.contains({RVal::fp(2, 1), RVal::fp(2, 0)}));
}

TEST_CASE("image_shape: the three-point image is covered") {
    Lattice L{Domain::prime_field(3), 3};
    auto shape = image_shape(phi_image(delta_fn(L, Vec{1, 0, 0}), delta_fn(L, Vec{0, 1, 0})));
    CHECK(shape.kind == ImageShape::Kind::PointAndLine);
    // every image point is on the line or equals the point
    auto pm = phi_image(delta_fn(L, Vec{1, 0, 0}), delta_fn(L, Vec{0, 1, 0}));
    for (const auto& [v, fib] : pm.fibers)
        CHECK((shape.line.contains(v) || v == shape.point));
}

TEST_CASE("image_shape: five rational points in general position violate") {
    // raw table pair over Q on P^2(F_3): five spread points, the rest repeats
    ProjectiveSpace space = ProjectiveSpace::make(3, 2);
    std::vector<std::pair<Int, Int>> spread{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 3}};
    PhiMap pm;
    pm.space = space;
    for (size_t i = 0; i < space.points.size(); ++i) {
        auto [a, b] = spread[i % spread.size()];
        auto v = std::pair(RVal::rat(a), RVal::rat(b));
        pm.fibers[v].push_back(static_cast<int>(i));
        pm.image.push_back(v);
    }
    auto shape = image_shape(pm);
    REQUIRE(shape.kind == ImageShape::Kind::Violation);
    REQUIRE(shape.violation.size() == 4);
    // re-check: no three of the four are collinear
    for (int skip = 0; skip < 4; ++skip) {
        std::vector<std::pair<RVal, RVal>> tri;
        for (int t = 0; t < 4; ++t)
            if (t != skip) tri.push_back(shape.violation[t]);
        AffLine l = line_through_pair(tri[0], tri[1]);
        CHECK(!l.contains(tri[2]));
    }
}

TEST_CASE("image_shape over padic values") {
    ProjectiveSpace space = ProjectiveSpace::make(3, 2);
    PhiMap pm;
    pm.space = space;
    auto pd = [](Int v) { return RVal::padic(PadicInt(2, 8, v)); };
    for (size_t i = 0; i < space.points.size(); ++i) {
        auto v = i == 0 ? std::pair(pd(3), pd(5)) : std::pair(pd(static_cast<Int>(i)), pd(0));
        pm.fibers[v].push_back(static_cast<int>(i));
        pm.image.push_back(v);
    }
    auto shape = image_shape(pm);
    CHECK(shape.kind == ImageShape::Kind::PointAndLine);
    CHECK(shape.point == std::pair(pd(3), pd(5)));
}

TEST_CASE("three_point_analysis: empty class makes the sum constant") {
    // no (0,0) points: f3 = f1 + f2 is constant 1
    Lattice L{Domain::prime_field(3), 3};
    auto f1 = delta_fn(L, Vec{1, 0, 0});
    std::vector<Val> v2(13, 1);
    v2[0] = 0; // the point (0,0,1)... keep image within the three points:
    // f2 = 1 - f1 off one point; simplest: f2 complementary to f1
    auto pts = enumerate_primitive_classes(L, 3);
    for (size_t i = 0; i < pts.size(); ++i) v2[i] = f1.eval_any(pts[i]) == 1 ? 0 : 1;
    auto f2 = InvariantFunction::from_projective(L, ValueSet::residue(2), v2);
    auto inst = three_point_instance(f1, f2);
    auto which = three_point_analysis(inst);
    CHECK(which.count(3) == 1); // f1 + f2 = 1 everywhere
}

TEST_CASE("three_point_analysis: delta instance certifies everything") {
    Lattice L{Domain::prime_field(3), 3};
    auto f1 = delta_fn(L, Vec{1, 0, 0});
    auto f2 = InvariantFunction::constant(L, ValueSet::residue(2), 0);
    auto inst = three_point_instance(f1, f2);
    auto which = three_point_analysis(inst);
    CHECK(which == std::set<int>{1, 2, 3});
}

TEST_CASE("three_point_analysis: hypothesis failure is reported") {
    // labels spread so that some line carries all three points
    Lattice L{Domain::prime_field(3), 3};
    auto pts = enumerate_primitive_classes(L, 3);
    std::vector<Val> v1(pts.size(), 0), v2(pts.size(), 0);
    v1[0] = 1;
    v2[1] = 1;
    auto f1 = InvariantFunction::from_projective(L, ValueSet::residue(2), v1);
    auto f2 = InvariantFunction::from_projective(L, ValueSet::residue(2), v2);
    auto inst = three_point_instance(f1, f2);
    CHECK_THROWS_AS(three_point_analysis(inst), HypothesisFailure);
}

TEST_CASE("find_three_point_reduction: an AF span element ends the search") {
    Lattice L{Domain::prime_field(3), 3};
    auto f1 = delta_fn(L, Vec{1, 0, 0});
    auto f2 = InvariantFunction::constant(L, ValueSet::residue(2), 0);
    auto r = find_three_point_reduction(f1, f2);
    CHECK(r.kind == ReductionOutcome::Kind::NoReduction);
    REQUIRE(r.af_element.has_value());
    CHECK(*r.af_element == std::pair<Int, Int>{1, 0});
}

TEST_CASE("find_three_point_reduction: non-c-pair lines are rejected") {
    // two crossed deltas produce a rank-3 value matrix on the line through
    // their support points
    Lattice L{Domain::prime_field(3), 3};
    auto pts = enumerate_primitive_classes(L, 3);
    std::vector<Val> v1(pts.size(), 0), v2(pts.size(), 0);
    v1[0] = 1;
    v1[1] = 2;
    v2[1] = 1;
    auto f1 = InvariantFunction::from_projective(L, ValueSet::residue(3), v1);
    auto f2 = InvariantFunction::from_projective(L, ValueSet::residue(3), v2);
    CHECK_THROWS_AS(find_three_point_reduction(f1, f2), NotACPairLine);
}

TEST_CASE("find_three_point_reduction: the h-search finds a refuted triple") {
    // a hand-built pair already in the point-plus-axis shape: f2 indicates
    // two points (a 2-2 split on their line: not AF), f1 indicates two other
    // points; the mod-2 sum indicates four spread points. All three
    // reductions are refuted, which is exactly the triple the search returns.
    // The genuine per-line c-pair condition fails for such tables (as the
    // theory demands at q > 2), so enforcement is off here: this exercises
    // the normalization and search machinery in isolation.
    Lattice L{Domain::prime_field(3), 3};
    auto pts = enumerate_primitive_classes(L, 3);
    std::vector<Val> v1(pts.size(), 0), v2(pts.size(), 0);
    v2[0] = v2[1] = 1; // f2 = 1 on (0,0,1), (0,1,0)
    v1[3] = v1[7] = 1; // f1 = 1 on two points off that support
    auto f1 = InvariantFunction::from_projective(L, ValueSet::residue(2), v1);
    auto f2 = InvariantFunction::from_projective(L, ValueSet::residue(2), v2);
    REQUIRE(check_af(f1).kind != AFVerdict::Kind::Certified);
    REQUIRE(check_af(f2).kind != AFVerdict::Kind::Certified);

    ReductionOptions opt;
    opt.enforce_cpair = false;
    opt.span_sweep = false;
    auto r = find_three_point_reduction(f1, f2, opt);
    REQUIRE(r.kind == ReductionOutcome::Kind::Reduced);
    REQUIRE(!r.h.empty());
    // re-evaluate the reduced triple: all three refuted
    auto at = [&](const std::array<RVal, 3>& c, const Vec& pt) {
        RVal a = rval_of(f1, f1.eval_any(pt));
        RVal b = rval_of(f2, f2.eval_any(pt));
        return c[0] * a + c[1] * b + c[2];
    };
    std::vector<Val> g1, g2, g3;
    for (const auto& pt : pts) {
        Val a = r.h.at(at(r.c1, pt).key());
        Val b = r.h.at(at(r.c2, pt).key());
        g1.push_back(a);
        g2.push_back(b);
        g3.push_back((a + b) % 2);
    }
    for (const auto& tab : {g1, g2, g3}) {
        auto g = InvariantFunction::from_projective(L, ValueSet::residue(2), tab);
        CHECK(check_af(g).kind != AFVerdict::Kind::Certified);
    }
}

TEST_CASE("verify_proposition: small harness smoke") {
    auto z = verify_z2p(3, 1);
    CHECK(z.instances == 16);
    CHECK(z.violations.empty());
    auto f = verify_fano(2, 1);
    CHECK(f.violations.empty());
    CHECK_THROWS_AS(verify_red2p(7, 1), BudgetExceeded);
}
