// core.hpp - integer/finite-field scalars, lattice elements, subgroups in
// canonical normal form (Hermite over Z, reduced row echelon over F_q).
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flagval {

using Int = std::int64_t;
using Vec = std::vector<Int>;
using Mat = std::vector<Vec>; // rows

inline Int igcd(Int a, Int b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) { Int t = a % b; a = b; b = t; }
    return a;
}

// extended gcd: returns g, sets x,y with a*x + b*y = g, g >= 0
inline Int igcdext(Int a, Int b, Int& x, Int& y) {
    if (b == 0) {
        x = (a < 0) ? -1 : 1;
        y = 0;
        return a < 0 ? -a : a;
    }
    Int x1, y1;
    Int g = igcdext(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline Int imod(Int a, Int m) {
    Int r = a % m;
    return r < 0 ? r + m : r;
}

inline Int mod_pow(Int b, Int e, Int m) {
    Int r = 1 % m;
    b = imod(b, m);
    while (e > 0) {
        if (e & 1) r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

// inverse of a modulo m, requires gcd(a,m) == 1
inline Int mod_inv(Int a, Int m) {
    Int x, y;
    Int g = igcdext(imod(a, m), m, x, y);
    if (g != 1) throw std::invalid_argument("mod_inv: not a unit");
    return imod(x, m);
}

inline bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Int ipow(Int b, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// p-adic valuation of n; vp(0) is represented by a large sentinel
inline int vp(Int n, Int p, int inf = 1 << 20) {
    if (n == 0) return inf;
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline Int content(const Vec& a) {
    Int g = 0;
    for (Int c : a) g = igcd(g, c);
    return g;
}

inline bool is_zero(const Vec& a) {
    return std::all_of(a.begin(), a.end(), [](Int c) { return c == 0; });
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_scale(Int c, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Int vec_norm1(const Vec& a) {
    Int s = 0;
    for (Int c : a) s += c < 0 ? -c : c;
    return s;
}

inline std::string vec_str(const Vec& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// Scalar domains: free Z-lattices and F_q vector spaces (q an odd prime;
// q = 2 is accepted as data for the exceptional rank-3 patterns).

enum class DomainKind { Integer, PrimeField };

struct Domain {
    DomainKind kind = DomainKind::Integer;
    Int q = 0; // prime when kind == PrimeField

    static Domain integers() { return {DomainKind::Integer, 0}; }
    static Domain prime_field(Int q) {
        if (!is_prime(q)) throw std::invalid_argument("prime_field: q must be prime");
        return {DomainKind::PrimeField, q};
    }
    bool is_field() const { return kind == DomainKind::PrimeField; }
    bool operator==(const Domain& o) const { return kind == o.kind && q == o.q; }
};

struct Lattice {
    Domain dom;
    int rank = 0;

    bool operator==(const Lattice& o) const { return dom == o.dom && rank == o.rank; }
    bool is_field() const { return dom.is_field(); }
    Int q() const { return dom.q; }
    // number of carrier elements over a prime field
    Int card() const { return dom.is_field() ? ipow(dom.q, rank) : -1; }
};

// ---------------------------------------------------------------------------
// Row-style normal forms. Rows are generators; the canonical form is unique
// per subgroup, which makes subgroups usable as map keys.

// Hermite normal form over Z: row echelon, positive pivots, entries above a
// pivot reduced into [0, pivot). Returns the nonzero rows.
inline Mat hnf(Mat m) {
    if (m.empty()) return m;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // eliminate below row r in column c via euclidean row ops
        for (size_t i = r + 1; i < rows; ++i) {
            while (m[i][c] != 0) {
                if (m[r][c] == 0) { std::swap(m[r], m[i]); continue; }
                Int q = m[i][c] / m[r][c];
                for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) std::swap(m[r], m[i]);
            }
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) m[r][j] = -m[r][j];
        // reduce entries above the pivot
        for (size_t i = 0; i < r; ++i) {
            Int q = m[i][c] / m[r][c];
            if (m[i][c] % m[r][c] < 0) q -= 1;
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

// Reduced row echelon form over F_q. Returns the nonzero rows, entries in [0,q).
inline Mat rref(Mat m, Int q) {
    if (m.empty()) return m;
    size_t rows = m.size(), cols = m[0].size();
    for (auto& row : m)
        for (auto& x : row) x = imod(x, q);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        Int inv = mod_inv(m[r][c], q);
        for (size_t j = 0; j < cols; ++j) m[r][j] = (m[r][j] * inv) % q;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Int f = m[i][c];
            for (size_t j = 0; j < cols; ++j) m[i][j] = imod(m[i][j] - f * m[r][j], q);
        }
        ++r;
    }
    m.resize(r);
    return m;
}

// ---------------------------------------------------------------------------

struct Subgroup {
    Lattice parent;
    Mat gens; // canonical rows (HNF over Z, RREF over F_q); independent

    static Subgroup span(const Lattice& parent, const Mat& generators) {
        Subgroup s;
        s.parent = parent;
        s.gens = parent.dom.is_field() ? rref(generators, parent.dom.q)
                                       : hnf(generators);
        return s;
    }
    static Subgroup full(const Lattice& parent) {
        Mat id(parent.rank, Vec(parent.rank, 0));
        for (int i = 0; i < parent.rank; ++i) id[i][i] = 1;
        return span(parent, id);
    }
    static Subgroup zero(const Lattice& parent) { return span(parent, {}); }

    int rank() const { return static_cast<int>(gens.size()); }

    bool operator==(const Subgroup& o) const { return gens == o.gens; }
    bool operator!=(const Subgroup& o) const { return !(*this == o); }

    // coordinates of a in terms of gens, if a lies in the subgroup
    std::optional<Vec> coordinates(const Vec& a) const {
        size_t n = parent.rank;
        Vec rem = a;
        Vec coef(gens.size(), 0);
        if (parent.dom.is_field()) {
            Int q = parent.dom.q;
            for (auto& x : rem) x = imod(x, q);
            for (size_t r = 0; r < gens.size(); ++r) {
                size_t c = 0;
                while (c < n && gens[r][c] == 0) ++c;
                if (c == n) continue;
                Int f = rem[c]; // pivot is 1 in rref
                coef[r] = f;
                for (size_t j = 0; j < n; ++j) rem[j] = imod(rem[j] - f * gens[r][j], q);
            }
            if (!is_zero(rem)) return std::nullopt;
            return coef;
        }
        for (size_t r = 0; r < gens.size(); ++r) {
            size_t c = 0;
            while (c < n && gens[r][c] == 0) ++c;
            if (c == n) continue;
            if (rem[c] % gens[r][c] != 0) return std::nullopt;
            Int f = rem[c] / gens[r][c];
            coef[r] = f;
            for (size_t j = 0; j < n; ++j) rem[j] -= f * gens[r][j];
        }
        if (!is_zero(rem)) return std::nullopt;
        return coef;
    }

    bool contains(const Vec& a) const { return coordinates(a).has_value(); }

    bool contains(const Subgroup& o) const {
        for (const auto& g : o.gens)
            if (!contains(g)) return false;
        return true;
    }

    bool proper_in(const Subgroup& o) const { return o.contains(*this) && *this != o; }

    // the element of the parent lattice with the given coordinates
    Vec embed(const Vec& coef) const {
        Vec a(parent.rank, 0);
        for (size_t r = 0; r < gens.size(); ++r)
            for (int j = 0; j < parent.rank; ++j) a[j] += coef[r] * gens[r][j];
        if (parent.dom.is_field())
            for (auto& x : a) x = imod(x, parent.dom.q);
        return a;
    }

    // index in the parent when full rank over Z (product of pivots)
    Int index_in_parent() const {
        if (parent.dom.is_field())
            return ipow(parent.dom.q, parent.rank - rank());
        if (rank() < parent.rank) return -1; // infinite
        Int idx = 1;
        for (size_t r = 0; r < gens.size(); ++r) {
            size_t c = 0;
            while (gens[r][c] == 0) ++c;
            idx *= gens[r][c];
        }
        return idx;
    }

    std::string key() const {
        std::string s;
        for (const auto& row : gens) s += vec_str(row) + ";";
        return s;
    }
};

// primitive coefficient pairs: the pure directions first, then by height;
// one representative per +-sign
inline std::vector<std::pair<Int, Int>> coefficient_candidates(Int bound) {
    std::vector<std::pair<Int, Int>> out;
    for (Int a = -bound; a <= bound; ++a)
        for (Int b = -bound; b <= bound; ++b) {
            if (a == 0 && b == 0) continue;
            if (igcd(a, b) != 1) continue;
            if (a < 0 || (a == 0 && b < 0)) continue;
            out.emplace_back(a, b);
        }
    auto key = [](const std::pair<Int, Int>& c) {
        Int h = std::max(c.first < 0 ? -c.first : c.first, c.second < 0 ? -c.second : c.second);
        int pure = c == std::pair<Int, Int>{1, 0} ? 0 : c == std::pair<Int, Int>{0, 1} ? 1 : 2;
        return std::tuple(h, pure, c.first, c.second);
    };
    std::sort(out.begin(), out.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    return out;
}

// elementary divisors s_1 | s_2 | ... of an integer matrix (rows as
// generators), via gcds of i x i minors; fine for rank <= 4
inline std::vector<Int> elementary_divisors(const Mat& m) {
    if (m.empty()) return {};
    size_t r = m.size(), n = m[0].size();
    std::vector<Int> d(std::min(r, n) + 1, 0);
    d[0] = 1;
    // enumerate i x i minors
    for (size_t i = 1; i <= std::min(r, n); ++i) {
        Int g = 0;
        std::vector<size_t> ri(i), ci(i);
        std::function<void(size_t, size_t)> loop_rows = [&](size_t pos, size_t start) {
            if (pos == i) {
                std::function<void(size_t, size_t)> loop_cols = [&](size_t cpos, size_t cstart) {
                    if (cpos == i) {
                        // determinant of the i x i submatrix (i <= 4: expansion)
                        std::function<Int(std::vector<size_t>, std::vector<size_t>)> det =
                            [&](std::vector<size_t> rs, std::vector<size_t> cs) -> Int {
                            if (rs.size() == 1) return m[rs[0]][cs[0]];
                            Int s = 0, sign = 1;
                            for (size_t j = 0; j < cs.size(); ++j) {
                                std::vector<size_t> rs2(rs.begin() + 1, rs.end());
                                std::vector<size_t> cs2;
                                for (size_t jj = 0; jj < cs.size(); ++jj)
                                    if (jj != j) cs2.push_back(cs[jj]);
                                s += sign * m[rs[0]][cs[j]] * det(rs2, cs2);
                                sign = -sign;
                            }
                            return s;
                        };
                        g = igcd(g, det(ri, ci));
                        return;
                    }
                    for (size_t c = cstart; c < n; ++c) { ci[cpos] = c; loop_cols(cpos + 1, c + 1); }
                };
                loop_cols(0, 0);
                return;
            }
            for (size_t rr = start; rr < r; ++rr) { ri[pos] = rr; loop_rows(pos + 1, rr + 1); }
        };
        loop_rows(0, 0);
        d[i] = g;
    }
    std::vector<Int> s;
    for (size_t i = 1; i < d.size() && d[i] != 0; ++i) s.push_back(d[i] / d[i - 1]);
    return s;
}

} // namespace flagval
