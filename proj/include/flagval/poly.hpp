// poly.hpp - univariate and bivariate polynomial arithmetic over small prime
// fields; irreducibility by trial division against the table of lower-degree
// monic irreducibles.
#pragma once

#include "flagval/core.hpp"

#include <map>

namespace flagval {

// ---------------------------------------------------------------------------
// univariate polynomials, coefficients ascending, no trailing zeros

struct Poly {
    Int q = 3;
    std::vector<Int> c;

    static Poly zero(Int q) { return {q, {}}; }
    static Poly one(Int q) { return {q, {1}}; }
    static Poly t(Int q) { return {q, {0, 1}}; }
    static Poly constant(Int q, Int v) {
        Poly r{q, {imod(v, q)}};
        r.trim();
        return r;
    }
    static Poly from_coeffs(Int q, std::vector<Int> cs) {
        Poly r{q, std::move(cs)};
        for (auto& x : r.c) x = imod(x, q);
        r.trim();
        return r;
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int deg() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
    Int lc() const { return c.empty() ? 0 : c.back(); }
    bool is_monic() const { return lc() == 1; }

    Poly operator+(const Poly& o) const {
        Poly r{q, {}};
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (size_t i = 0; i < r.c.size(); ++i) {
            Int a = i < c.size() ? c[i] : 0;
            Int b = i < o.c.size() ? o.c[i] : 0;
            r.c[i] = imod(a + b, q);
        }
        r.trim();
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + o.scaled(q - 1); }
    Poly scaled(Int s) const {
        Poly r = *this;
        s = imod(s, q);
        for (auto& x : r.c) x = (x * s) % q;
        r.trim();
        return r;
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return zero(q);
        Poly r{q, std::vector<Int>(c.size() + o.c.size() - 1, 0)};
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j)
                r.c[i + j] = (r.c[i + j] + c[i] * o.c[j]) % q;
        r.trim();
        return r;
    }
    // division with remainder
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::domain_error("poly division by zero");
        Poly rem = *this, quot = zero(q);
        quot.c.assign(std::max<int>(0, deg() - d.deg() + 1), 0);
        Int inv = mod_inv(d.lc(), q);
        while (!rem.is_zero() && rem.deg() >= d.deg()) {
            Int f = (rem.lc() * inv) % q;
            int shift = rem.deg() - d.deg();
            quot.c[shift] = f;
            for (size_t i = 0; i < d.c.size(); ++i)
                rem.c[i + shift] = imod(rem.c[i + shift] - f * d.c[i], q);
            rem.trim();
        }
        quot.trim();
        return {quot, rem};
    }
    Poly operator%(const Poly& d) const { return divmod(d).second; }
    Poly operator/(const Poly& d) const { return divmod(d).first; }

    Poly monic() const {
        if (is_zero()) return *this;
        return scaled(mod_inv(lc(), q));
    }

    bool operator==(const Poly& o) const { return q == o.q && c == o.c; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
    bool operator<(const Poly& o) const {
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        for (size_t i = c.size(); i-- > 0;)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }
};

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

// monic irreducibles of each degree up to maxdeg, by sieving
inline const std::vector<Poly>& irreducible_monics(Int q, int maxdeg) {
    static std::map<std::pair<Int, int>, std::vector<Poly>> cache;
    auto key = std::pair(q, maxdeg);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Poly> irr;
    for (int d = 1; d <= maxdeg; ++d) {
        Int count = ipow(q, d);
        for (Int e = 0; e < count; ++e) {
            std::vector<Int> cs(d + 1, 0);
            Int x = e;
            for (int i = 0; i < d; ++i) { cs[i] = x % q; x /= q; }
            cs[d] = 1;
            Poly f = Poly::from_coeffs(q, cs);
            bool red = false;
            for (const auto& g : irr) {
                if (2 * g.deg() > d) break;
                if ((f % g).is_zero()) { red = true; break; }
            }
            if (!red) irr.push_back(f);
        }
    }
    return cache[key] = irr;
}

inline bool is_irreducible(const Poly& f) {
    if (f.deg() < 1) return false;
    for (const auto& g : irreducible_monics(f.q, f.deg() / 2))
        if ((f % g).is_zero()) return false;
    return true;
}

// multiplicity of the monic irreducible d in f
inline int multiplicity(const Poly& f, const Poly& d) {
    if (f.is_zero()) throw std::domain_error("multiplicity of zero polynomial");
    int m = 0;
    Poly r = f;
    while (true) {
        auto [quot, rem] = r.divmod(d);
        if (!rem.is_zero()) return m;
        r = quot;
        ++m;
    }
}

inline std::string poly_str(const Poly& f, const std::string& var = "t") {
    if (f.is_zero()) return "0";
    std::string s;
    for (int i = f.deg(); i >= 0; --i) {
        if (f.c[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || f.c[i] != 1) s += std::to_string(f.c[i]);
        if (i >= 1) {
            if (f.c[i] != 1) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// bivariate polynomials as sparse exponent maps

struct BiPoly {
    Int q = 3;
    std::map<std::pair<int, int>, Int> c; // (i, j) -> coeff of x^i y^j

    static BiPoly zero(Int q) { return {q, {}}; }
    static BiPoly one(Int q) { return monomial(q, 0, 0, 1); }
    static BiPoly monomial(Int q, int i, int j, Int v) {
        BiPoly r{q, {}};
        v = imod(v, q);
        if (v != 0) r.c[{i, j}] = v;
        return r;
    }

    bool is_zero() const { return c.empty(); }
    BiPoly operator+(const BiPoly& o) const {
        BiPoly r = *this;
        for (const auto& [e, v] : o.c) {
            Int nv = imod(r.c[e] + v, q);
            if (nv == 0) r.c.erase(e);
            else r.c[e] = nv;
        }
        return r;
    }
    BiPoly scaled(Int s) const {
        BiPoly r{q, {}};
        s = imod(s, q);
        for (const auto& [e, v] : c) {
            Int nv = (v * s) % q;
            if (nv != 0) r.c[e] = nv;
        }
        return r;
    }
    BiPoly operator-(const BiPoly& o) const { return *this + o.scaled(q - 1); }
    BiPoly operator*(const BiPoly& o) const {
        BiPoly r{q, {}};
        for (const auto& [e1, v1] : c)
            for (const auto& [e2, v2] : o.c) {
                auto e = std::pair(e1.first + e2.first, e1.second + e2.second);
                Int nv = imod(r.c[e] + v1 * v2, q);
                if (nv == 0) r.c.erase(e);
                else r.c[e] = nv;
            }
        return r;
    }
    bool operator==(const BiPoly& o) const { return q == o.q && c == o.c; }
    bool operator<(const BiPoly& o) const { return c < o.c; }
};

inline std::string bipoly_str(const BiPoly& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        const auto& [e, v] = *it;
        if (!s.empty()) s += "+";
        if ((e.first == 0 && e.second == 0) || v != 1) s += std::to_string(v);
        if (e.first > 0) {
            if (v != 1) s += "*";
            s += "x";
            if (e.first > 1) s += "^" + std::to_string(e.first);
        }
        if (e.second > 0) {
            if (v != 1 && e.first == 0) s += "*";
            s += "y";
            if (e.second > 1) s += "^" + std::to_string(e.second);
        }
    }
    return s;
}

} // namespace flagval
