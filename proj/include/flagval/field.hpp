// field.hpp - desk-scale function-field models: F_q(t) with places, and
// F_q(x,y) with monomial valuations. Elements are exact fractions; valuations
// are spot-verified against their axioms at construction.
#pragma once

#include "flagval/padic.hpp"
#include "flagval/poly.hpp"

namespace flagval {

struct FieldModel {
    enum class Kind { Univariate, Bivariate } kind = Kind::Univariate;
    Int q = 3;
    bool operator==(const FieldModel& o) const { return kind == o.kind && q == o.q; }
};

// ---------------------------------------------------------------------------
// univariate rational functions, reduced with monic denominator

struct RatFunc {
    Poly num, den;

    static RatFunc of(const Poly& n, const Poly& d) {
        if (d.is_zero()) throw std::domain_error("rational function with zero denominator");
        RatFunc r{n, d};
        r.normalize();
        return r;
    }
    static RatFunc of(const Poly& n) { return of(n, Poly::one(n.q)); }
    static RatFunc zero(Int q) { return of(Poly::zero(q)); }
    static RatFunc one(Int q) { return of(Poly::one(q)); }

    void normalize() {
        if (num.is_zero()) { den = Poly::one(den.q); return; }
        Poly g = poly_gcd(num, den);
        if (g.deg() > 0) { num = num / g; den = den / g; }
        Int s = mod_inv(den.lc(), den.q);
        den = den.scaled(s);
        num = num.scaled(s);
    }
    bool is_zero() const { return num.is_zero(); }
    RatFunc operator+(const RatFunc& o) const { return of(num * o.den + o.num * den, den * o.den); }
    RatFunc operator-(const RatFunc& o) const { return of(num * o.den - o.num * den, den * o.den); }
    RatFunc operator*(const RatFunc& o) const { return of(num * o.num, den * o.den); }
    RatFunc inv() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        return of(den, num);
    }
    RatFunc scaled(Int s) const { return of(num.scaled(s), den); }
    bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }
    bool operator<(const RatFunc& o) const { return std::tie(num, den) < std::tie(o.num, o.den); }
};

// ---------------------------------------------------------------------------
// bivariate fractions; reduced by monomial content only, denominator scaled
// so its lex-leading coefficient is 1

struct BiFrac {
    BiPoly num, den;

    static BiFrac of(const BiPoly& n, const BiPoly& d) {
        if (d.is_zero()) throw std::domain_error("fraction with zero denominator");
        BiFrac r{n, d};
        r.normalize();
        return r;
    }
    static BiFrac of(const BiPoly& n) { return of(n, BiPoly::one(n.q)); }

    void normalize() {
        if (num.is_zero()) { den = BiPoly::one(den.q); return; }
        auto content = [](const BiPoly& f) {
            int mi = 1 << 20, mj = 1 << 20;
            for (const auto& [e, v] : f.c) {
                mi = std::min(mi, e.first);
                mj = std::min(mj, e.second);
            }
            return std::pair(mi, mj);
        };
        auto [ni, nj] = content(num);
        auto [di, dj] = content(den);
        int si = std::min(ni, di), sj = std::min(nj, dj);
        if (si != 0 || sj != 0) {
            auto shift = [&](BiPoly& f) {
                BiPoly g{f.q, {}};
                for (const auto& [e, v] : f.c) g.c[{e.first - si, e.second - sj}] = v;
                f = g;
            };
            shift(num);
            shift(den);
        }
        Int lead = den.c.rbegin()->second;
        Int s = mod_inv(lead, den.q);
        num = num.scaled(s);
        den = den.scaled(s);
    }
    bool is_zero() const { return num.is_zero(); }
    BiFrac operator+(const BiFrac& o) const { return of(num * o.den + o.num * den, den * o.den); }
    BiFrac operator-(const BiFrac& o) const { return of(num * o.den - o.num * den, den * o.den); }
    BiFrac operator*(const BiFrac& o) const { return of(num * o.num, den * o.den); }
    BiFrac inv() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        return of(den, num);
    }
    BiFrac scaled(Int s) const { return of(num.scaled(s), den); }
    // equality by cross-multiplication (fractions are not fully reduced)
    bool operator==(const BiFrac& o) const { return (num * o.den) == (o.num * den); }
    bool operator<(const BiFrac& o) const { return std::tie(num, den) < std::tie(o.num, o.den); }
};

// ---------------------------------------------------------------------------
// a field element of either model

struct FieldElem {
    FieldModel model;
    RatFunc u{Poly::zero(3), Poly::one(3)};
    BiFrac b{BiPoly::zero(3), BiPoly::one(3)};

    static FieldElem uni(Int q, const RatFunc& r) {
        FieldElem e;
        e.model = {FieldModel::Kind::Univariate, q};
        e.u = r;
        return e;
    }
    static FieldElem bi(Int q, const BiFrac& f) {
        FieldElem e;
        e.model = {FieldModel::Kind::Bivariate, q};
        e.b = f;
        return e;
    }
    static FieldElem constant(const FieldModel& m, Int v) {
        return m.kind == FieldModel::Kind::Univariate
                   ? uni(m.q, RatFunc::of(Poly::constant(m.q, v)))
                   : bi(m.q, BiFrac::of(BiPoly::monomial(m.q, 0, 0, v)));
    }
    bool is_zero() const {
        return model.kind == FieldModel::Kind::Univariate ? u.is_zero() : b.is_zero();
    }
    FieldElem operator+(const FieldElem& o) const { return apply(o, '+'); }
    FieldElem operator-(const FieldElem& o) const { return apply(o, '-'); }
    FieldElem operator*(const FieldElem& o) const { return apply(o, '*'); }
    FieldElem inv() const {
        FieldElem e = *this;
        if (model.kind == FieldModel::Kind::Univariate) e.u = u.inv();
        else e.b = b.inv();
        return e;
    }
    FieldElem scaled(Int s) const {
        FieldElem e = *this;
        if (model.kind == FieldModel::Kind::Univariate) e.u = u.scaled(s);
        else e.b = b.scaled(s);
        return e;
    }
    bool operator==(const FieldElem& o) const {
        return model == o.model &&
               (model.kind == FieldModel::Kind::Univariate ? u == o.u : b == o.b);
    }
    bool operator<(const FieldElem& o) const {
        return model.kind == FieldModel::Kind::Univariate ? u < o.u : b < o.b;
    }
    std::string str() const {
        if (model.kind == FieldModel::Kind::Univariate) {
            std::string s = poly_str(u.num);
            if (u.den.deg() > 0) s = "(" + s + ")/(" + poly_str(u.den) + ")";
            return s;
        }
        std::string s = bipoly_str(b.num);
        if (!(b.den == BiPoly::one(b.den.q))) s = "(" + s + ")/(" + bipoly_str(b.den) + ")";
        return s;
    }

  private:
    FieldElem apply(const FieldElem& o, char op) const {
        if (!(model == o.model)) throw std::invalid_argument("mixed field models");
        FieldElem e = *this;
        if (model.kind == FieldModel::Kind::Univariate)
            e.u = op == '+' ? u + o.u : op == '-' ? u - o.u : u * o.u;
        else
            e.b = op == '+' ? b + o.b : op == '-' ? b - o.b : b * o.b;
        return e;
    }
};

// ---------------------------------------------------------------------------
// places of F_q(t): monic irreducible polynomials and the degree valuation

struct Place {
    bool at_infinity = false;
    Poly poly{3, {}};

    static Place infinity(Int q) {
        Place p;
        p.at_infinity = true;
        p.poly = Poly::zero(q);
        return p;
    }
    static Place finite(const Poly& f) {
        if (!f.is_monic() || !is_irreducible(f))
            throw std::invalid_argument("place: polynomial must be monic irreducible");
        Place p;
        p.poly = f;
        return p;
    }
    bool operator==(const Place& o) const {
        return at_infinity == o.at_infinity && poly == o.poly;
    }
    bool operator<(const Place& o) const {
        return std::tie(at_infinity, poly) < std::tie(o.at_infinity, o.poly);
    }
    std::string str() const { return at_infinity ? "inf" : poly_str(poly); }
};

inline Int place_ord(const Place& p, const RatFunc& f) {
    if (f.is_zero()) throw std::domain_error("order of zero");
    if (p.at_infinity) return f.den.deg() - f.num.deg();
    return multiplicity(f.num, p.poly) - multiplicity(f.den, p.poly);
}

// ---------------------------------------------------------------------------
// scale values: Z, or Z^2 ordered lexicographically

struct ScaleVal {
    Int a = 0, b = 0;
    bool rank2 = false; // false: Z (component a); true: Z^2 lex on (a, b)

    ScaleVal operator+(const ScaleVal& o) const { return {a + o.a, b + o.b, rank2 || o.rank2}; }
    ScaleVal operator-(const ScaleVal& o) const { return {a - o.a, b - o.b, rank2 || o.rank2}; }
    bool operator==(const ScaleVal& o) const { return a == o.a && b == o.b; }
    bool operator<(const ScaleVal& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
    std::string str() const {
        return rank2 ? "(" + std::to_string(a) + "," + std::to_string(b) + ")"
                     : std::to_string(a);
    }
};

// monomial valuations of F_q(x,y)
struct MonomialVal {
    enum class Kind { LexYX, LexXY, Weighted } kind = Kind::LexYX;
    Int wx = 1, wy = 2; // Weighted only

    // value of the monomial x^i y^j: the comparison order is lexicographic on
    // the stored pair; LexYX compares (y-exponent, x-exponent)
    ScaleVal of_monomial(int i, int j) const {
        switch (kind) {
        case Kind::LexYX: return {j, i, true};
        case Kind::LexXY: return {i, j, true};
        default: return {wx * i + wy * j, 0, false};
        }
    }
    ScaleVal of_poly(const BiPoly& f) const {
        if (f.is_zero()) throw std::domain_error("valuation of zero");
        bool first = true;
        ScaleVal best;
        for (const auto& [e, v] : f.c) {
            ScaleVal s = of_monomial(e.first, e.second);
            if (first || s < best) { best = s; first = false; }
        }
        return best;
    }
    ScaleVal of(const BiFrac& f) const { return of_poly(f.num) - of_poly(f.den); }

    std::string name() const {
        switch (kind) {
        case Kind::LexYX: return "lex";
        case Kind::LexXY: return "revlex";
        default: return "weight(" + std::to_string(wx) + "," + std::to_string(wy) + ")";
        }
    }
};

// ---------------------------------------------------------------------------
// a valuation of either model

struct Valuation {
    enum class Kind { PlaceVal, Monomial } kind = Kind::PlaceVal;
    FieldModel model;
    Place place{};
    MonomialVal mono{};

    static Valuation of_place(Int q, const Place& p) {
        Valuation v;
        v.kind = Kind::PlaceVal;
        v.model = {FieldModel::Kind::Univariate, q};
        v.place = p;
        return v;
    }
    static Valuation monomial(Int q, const MonomialVal& m) {
        Valuation v;
        v.kind = Kind::Monomial;
        v.model = {FieldModel::Kind::Bivariate, q};
        v.mono = m;
        return v;
    }

    ScaleVal operator()(const FieldElem& x) const {
        if (!(x.model == model)) throw std::invalid_argument("valuation: wrong model");
        if (kind == Kind::PlaceVal) return {place_ord(place, x.u), 0, false};
        return mono.of(x.b);
    }
    std::string scale_name() const {
        if (kind == Kind::PlaceVal) return "Z";
        return mono.kind == MonomialVal::Kind::Weighted ? "Z" : "Z2-lex";
    }
    std::string str() const {
        return kind == Kind::PlaceVal ? "place " + place.str() : mono.name();
    }
};

// spot-verify the valuation axioms on a sample of elements
struct AxiomFailure : std::runtime_error {
    AxiomFailure(const std::string& what, const std::string& x, const std::string& y)
        : std::runtime_error("valuation axiom failure (" + what + ") at " + x + ", " + y) {}
};

inline void spot_check_valuation(const Valuation& v, const std::vector<FieldElem>& sample) {
    for (size_t i = 0; i < sample.size(); ++i)
        for (size_t j = i; j < sample.size(); ++j) {
            const auto& x = sample[i];
            const auto& y = sample[j];
            if (x.is_zero() || y.is_zero()) continue;
            if (!(v(x * y) == v(x) + v(y)))
                throw AxiomFailure("multiplicativity", x.str(), y.str());
            FieldElem s = x + y;
            if (s.is_zero()) continue;
            ScaleVal vs = v(s), vx = v(x), vy = v(y);
            ScaleVal mn = vx < vy ? vx : vy;
            if (vs < mn) throw AxiomFailure("ultrametric", x.str(), y.str());
            if (!(vx == vy) && !(vs == mn)) throw AxiomFailure("ultrametric equality", x.str(), y.str());
        }
}

} // namespace flagval
