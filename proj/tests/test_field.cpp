#include <catch2/catch_amalgamated.hpp>

#include "flagval/field.hpp"
#include "flagval/logfield.hpp"

using namespace flagval;

namespace {
RatFunc rf(const Poly& n, const Poly& d) { return RatFunc::of(n, d); }
Poly T() { return Poly::t(3); }
Poly one3() { return Poly::one(3); }
} // namespace

TEST_CASE("rational function normalization") {
    // (t^2 + 2) / (t + 1) reduces: t^2 + 2 = (t+1)(t+2) over F_3
    RatFunc f = rf(Poly::from_coeffs(3, {2, 0, 1}), T() + one3());
    CHECK(f.num == T() + Poly::constant(3, 2));
    CHECK(f.den == one3());
    // denominators are monic
    RatFunc g = rf(one3(), Poly::from_coeffs(3, {0, 2})); // 1 / 2t
    CHECK(g.den == T());
    CHECK(g.num == Poly::constant(3, 2)); // 1/(2t) = 2/t
}

TEST_CASE("place orders") {
    Place pt = Place::finite(T());
    Place p1 = Place::finite(T() + one3());
    Place pinf = Place::infinity(3);
    RatFunc f = rf(T() * T(), T() + one3()); // t^2 / (t+1)
    CHECK(place_ord(pt, f) == 2);
    CHECK(place_ord(p1, f) == -1);
    CHECK(place_ord(pinf, f) == -1); // deg 1 - deg 2
    Poly cube = (T() + one3()) * (T() + one3()) * (T() + one3());
    CHECK(place_ord(p1, rf(cube, one3())) == 3);
    CHECK_THROWS(Place::finite(Poly::from_coeffs(3, {2, 0, 1}))); // reducible
}

TEST_CASE("monomial valuations") {
    MonomialVal lex{MonomialVal::Kind::LexYX};
    BiFrac x2y = BiFrac::of(BiPoly::monomial(3, 2, 1, 1));
    CHECK(lex.of(x2y) == ScaleVal{1, 2, true}); // (y-part, x-part)
    MonomialVal w{MonomialVal::Kind::Weighted, 1, 2};
    CHECK(w.of(x2y) == ScaleVal{4, 0, false});
    // the minimum over monomials: x + y has value (0,1) under lex (x is smaller)
    BiFrac xy = BiFrac::of(BiPoly::monomial(3, 1, 0, 1) + BiPoly::monomial(3, 0, 1, 1));
    CHECK(lex.of(xy) == ScaleVal{0, 1, true});
}

TEST_CASE("valuation axioms hold on the element pools") {
    auto uni = element_pool({FieldModel::Kind::Univariate, 3}, 1);
    spot_check_valuation(Valuation::of_place(3, Place::finite(T())), uni);
    spot_check_valuation(Valuation::of_place(3, Place::infinity(3)), uni);
    auto bi = element_pool({FieldModel::Kind::Bivariate, 3}, 2);
    spot_check_valuation(Valuation::monomial(3, {MonomialVal::Kind::LexYX}), bi);
    spot_check_valuation(Valuation::monomial(3, {MonomialVal::Kind::LexXY}), bi);
    spot_check_valuation(Valuation::monomial(3, {MonomialVal::Kind::Weighted, 1, 2}), bi);
}

TEST_CASE("eval_log on places") {
    auto f = LogFunction::place_weights(3, 2, 8, {{Place::finite(T()), 1}});
    FieldElem k = FieldElem::uni(3, rf(T() * T(), T() + one3()));
    CHECK(eval_log(f, k).residue() == 2);
    auto g = LogFunction::place_weights(3, 2, 8, {{Place::finite(T() + one3()), 1}});
    Poly cube = (T() + one3()) * (T() + one3()) * (T() + one3());
    CHECK(eval_log(g, FieldElem::uni(3, rf(cube, one3()))).residue() == 3);
    CHECK_THROWS_AS(eval_log(f, FieldElem::constant(f.model, 0)), ZeroElement);
}

TEST_CASE("eval_log on a lex character") {
    // chi(x^i y^j) = i + 5 j; x^2 y evaluates to 7
    auto f = LogFunction::character(3, 2, 8, {MonomialVal::Kind::LexYX}, 1, 5);
    FieldElem k = FieldElem::bi(3, BiFrac::of(BiPoly::monomial(3, 2, 1, 1)));
    CHECK(eval_log(f, k).residue() == 7);
    // and on a non-monomial element the minimal monomial decides
    FieldElem s = FieldElem::bi(
        3, BiFrac::of(BiPoly::monomial(3, 1, 0, 1) + BiPoly::monomial(3, 0, 1, 1)));
    CHECK(eval_log(f, s).residue() == 1); // x is lex-minimal in x + y
}

TEST_CASE("weighted characters must factor through the scale") {
    CHECK_THROWS(LogFunction::character(3, 2, 8, {MonomialVal::Kind::Weighted, 1, 2}, 1, 5));
    auto f = LogFunction::character(3, 2, 8, {MonomialVal::Kind::Weighted, 1, 2}, 3, 6);
    FieldElem k = FieldElem::bi(3, BiFrac::of(BiPoly::monomial(3, 2, 1, 1)));
    CHECK(eval_log(f, k).residue() == 12); // 3 * (2*1 + 1*2)
}

TEST_CASE("logarithmic law on sampled pairs") {
    auto f = LogFunction::place_weights(
        3, 2, 8, {{Place::finite(T()), 1}, {Place::finite(T() + one3()), -2}, {Place::infinity(3), 3}});
    auto pool = element_pool(f.model, 2);
    Int mod = 256;
    long long pairs = 0;
    for (size_t i = 0; i < pool.size(); i += 3)
        for (size_t j = i; j < pool.size(); j += 5) {
            Int lhs = eval_log(f, pool[i] * pool[j]).residue();
            Int rhs = imod(eval_log(f, pool[i]).residue() + eval_log(f, pool[j]).residue(), mod);
            REQUIRE(lhs == rhs);
            ++pairs;
        }
    CHECK(pairs > 400);
    // vanishes on constants
    for (Int c = 1; c < 3; ++c)
        CHECK(eval_log(f, FieldElem::constant(f.model, c)).residue() == 0);
}
