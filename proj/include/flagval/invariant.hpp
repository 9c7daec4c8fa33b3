// invariant.hpp - finitely described unit-invariant functions on lattice
// windows and finite vector spaces, with the operations that feed the AF
// engine: evaluation, invariance sweeps, restriction, postcomposition and
// primitive-class enumeration.
#pragma once

#include "flagval/core.hpp"
#include "flagval/padic.hpp"

#include <functional>
#include <map>
#include <set>
#include <variant>

namespace flagval {

// Values are opaque 64-bit keys; the AF machinery only ever compares them.
// The ValueSet describes what the keys mean (labels, residues mod m, or
// residues of p-adic integers at a declared precision).
using Val = Int;

struct ValueSet {
    enum class Kind { Labels, Residue, Padic } kind = Kind::Labels;
    Int m = 0;      // Residue: modulus
    Int p = 0;      // Padic: prime
    int prec = 0;   // Padic: digits

    static ValueSet labels() { return {Kind::Labels, 0, 0, 0}; }
    static ValueSet residue(Int m) { return {Kind::Residue, m, 0, 0}; }
    static ValueSet padic(Int p, int prec) { return {Kind::Padic, 0, p, prec}; }
    bool operator==(const ValueSet& o) const {
        return kind == o.kind && m == o.m && p == o.p && prec == o.prec;
    }
};

struct Window {
    Int box = 8;   // coordinates swept in [-box, box]
    int depth = 1; // p-depth of the description

    bool operator==(const Window& o) const { return box == o.box && depth == o.depth; }
};

// errors
struct OutOfWindow : std::runtime_error {
    explicit OutOfWindow(const std::string& w) : std::runtime_error("out of window: " + w) {}
};
struct ZeroElement : std::runtime_error {
    ZeroElement() : std::runtime_error("value at 0 is undefined") {}
};
struct PartialMap : std::runtime_error {
    explicit PartialMap(Val v)
        : std::runtime_error("postcompose: map undefined on attained value " + std::to_string(v)) {}
};
struct DependentBasis : std::runtime_error {
    DependentBasis() : std::runtime_error("basis elements are linearly dependent") {}
};
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& w) : std::runtime_error("budget exceeded: " + w) {}
};

// ---------------------------------------------------------------------------
// Primitive classes.

// encode/decode F_q vectors as indices (lex, coordinate 0 least significant)
inline Int fq_encode(const Vec& a, Int q) {
    Int e = 0, pw = 1;
    for (Int c : a) { e += imod(c, q) * pw; pw *= q; }
    return e;
}
inline Vec fq_decode(Int e, Int q, int n) {
    Vec a(n);
    for (int i = 0; i < n; ++i) { a[i] = e % q; e /= q; }
    return a;
}

// canonical representative of the projective class of a nonzero F_q vector:
// first nonzero coordinate scaled to 1
inline Vec fq_proj_rep(Vec a, Int q) {
    for (auto& x : a) x = imod(x, q);
    size_t i = 0;
    while (i < a.size() && a[i] == 0) ++i;
    if (i == a.size()) throw ZeroElement();
    Int inv = mod_inv(a[i], q);
    for (auto& x : a) x = (x * inv) % q;
    return a;
}

// canonical representative of the unit-scaling orbit of a primitive residue
// class mod p^k: the first coordinate that is a unit is scaled to 1
inline Vec zpk_orbit_rep(Vec a, Int p, int k) {
    Int m = ipow(p, k);
    if (k == 0) return Vec(a.size(), 0);
    for (auto& x : a) x = imod(x, m);
    size_t i = 0;
    while (i < a.size() && a[i] % p == 0) ++i;
    if (i == a.size()) throw std::invalid_argument("zpk_orbit_rep: class not primitive");
    Int inv = mod_inv(a[i], m);
    for (auto& x : a) x = (x * inv) % m;
    return a;
}

// One representative per unit-scaling orbit, lexicographic on the smallest
// nonnegative residues. Over F_q these are the points of P^{n-1}(F_q); over Z
// the primitive residue classes of (Z/p^k)^n up to units.
inline std::vector<Vec> enumerate_primitive_classes(const Lattice& L, Int modulus) {
    std::vector<Vec> reps;
    int n = L.rank;
    if (L.dom.is_field()) {
        Int q = L.dom.q;
        if (modulus != q) throw std::invalid_argument("modulus must be q over a prime field");
        Int total = ipow(q, n);
        std::set<Vec> seen;
        for (Int e = 1; e < total; ++e) {
            Vec a = fq_decode(e, q, n);
            Vec r = fq_proj_rep(a, q);
            if (seen.insert(r).second) reps.push_back(r);
        }
        std::sort(reps.begin(), reps.end());
        return reps;
    }
    // Z-lattice: modulus = p^k
    if (modulus == 1) return {Vec(n, 0)};
    Int p = 0;
    for (Int d = 2; d <= modulus; ++d)
        if (modulus % d == 0) { p = d; break; }
    if (p == 0 || !is_prime(p)) throw std::invalid_argument("modulus must be a prime power");
    Int m = modulus;
    int k = 0;
    while (m > 1) {
        if (m % p != 0) throw std::invalid_argument("modulus must be a prime power");
        m /= p;
        ++k;
    }
    if (k == 0) return {Vec(n, 0)};
    Int total = ipow(modulus, n);
    std::set<Vec> seen;
    for (Int e = 0; e < total; ++e) {
        Vec a = fq_decode(e, modulus, n);
        bool prim = false;
        for (Int c : a)
            if (c % p != 0) { prim = true; break; }
        if (!prim) continue;
        Vec r = zpk_orbit_rep(a, p, k);
        if (seen.insert(r).second) reps.push_back(r);
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

// ---------------------------------------------------------------------------
// InvariantFunction.

struct InvariantFunction {
    enum class Rep { FullTable, DepthK, WindowOracle };

    Lattice dom;
    ValueSet vs;
    Window win;
    Rep rep = Rep::FullTable;

    // FullTable (prime field): value per nonzero vector, indexed by
    // fq_encode(a) - 1. May be non-invariant until check_invariance passes.
    std::vector<Val> full;

    // DepthK (Z-lattice): p, k and one value per canonical primitive-class
    // orbit rep of (Z/p^k)^n, aligned with enumerate_primitive_classes.
    Int p = 0;
    int k = 0;
    std::vector<Vec> class_reps;
    std::map<Vec, size_t> class_index;
    std::vector<Val> table;
    std::vector<std::int32_t> class_lut; // encoded class -> table index, -1 if imprimitive
    Int lut_mod = 0;

    // WindowOracle: evaluation rule; must be snapshotted to DepthK before
    // certification
    std::function<Val(const Vec&)> oracle;

    // -- constructors ------------------------------------------------------

    static InvariantFunction full_table(const Lattice& L, ValueSet vs, std::vector<Val> values) {
        if (!L.dom.is_field()) throw std::invalid_argument("full_table: prime-field domains only");
        InvariantFunction f;
        f.dom = L;
        f.vs = vs;
        f.rep = Rep::FullTable;
        f.win = Window{L.dom.q, 1};
        Int count = ipow(L.dom.q, L.rank) - 1;
        if (static_cast<Int>(values.size()) != count)
            throw std::invalid_argument("full_table: need one value per nonzero vector");
        f.full = std::move(values);
        return f;
    }

    // table given per projective point, in enumerate_primitive_classes order;
    // expands invariantly to all nonzero vectors
    static InvariantFunction from_projective(const Lattice& L, ValueSet vs,
                                             const std::vector<Val>& point_values) {
        auto reps = enumerate_primitive_classes(L, L.dom.q);
        if (reps.size() != point_values.size())
            throw std::invalid_argument("from_projective: need one value per point");
        std::map<Vec, Val> byrep;
        for (size_t i = 0; i < reps.size(); ++i) byrep[reps[i]] = point_values[i];
        Int count = ipow(L.dom.q, L.rank) - 1;
        std::vector<Val> values(count);
        for (Int e = 1; e <= count; ++e)
            values[e - 1] = byrep.at(fq_proj_rep(fq_decode(e, L.dom.q, L.rank), L.dom.q));
        return full_table(L, vs, values);
    }

    static InvariantFunction depth_k(const Lattice& L, ValueSet vs, Int p, int k,
                                     std::vector<Val> class_values, std::optional<Window> w = {}) {
        if (L.dom.is_field()) throw std::invalid_argument("depth_k: Z-lattice domains only");
        if (!is_prime(p)) throw std::invalid_argument("depth_k: p must be prime");
        InvariantFunction f;
        f.dom = L;
        f.vs = vs;
        f.rep = Rep::DepthK;
        f.p = p;
        f.k = k;
        f.class_reps = enumerate_primitive_classes(L, ipow(p, k));
        if (f.class_reps.size() != class_values.size())
            throw std::invalid_argument("depth_k: need one value per primitive class orbit");
        for (size_t i = 0; i < f.class_reps.size(); ++i) f.class_index[f.class_reps[i]] = i;
        f.table = std::move(class_values);
        f.win = w ? *w : default_window(p, k, L.rank);
        // dense class lookup for fast evaluation
        Int mod = ipow(p, k);
        Int total = ipow(mod, L.rank);
        if (k > 0 && total <= (Int{1} << 22)) {
            f.lut_mod = mod;
            f.class_lut.assign(total, -1);
            for (Int e = 0; e < total; ++e) {
                Vec a = fq_decode(e, mod, L.rank);
                bool prim = false;
                for (Int c : a)
                    if (c % p != 0) { prim = true; break; }
                if (!prim) continue;
                f.class_lut[e] =
                    static_cast<std::int32_t>(f.class_index.at(zpk_orbit_rep(a, p, k)));
            }
        }
        return f;
    }

    static InvariantFunction constant(const Lattice& L, ValueSet vs, Val v) {
        if (L.dom.is_field()) {
            Int count = ipow(L.dom.q, L.rank) - 1;
            return full_table(L, vs, std::vector<Val>(count, v));
        }
        return depth_k(L, vs, 2, 0, {v});
    }

    static InvariantFunction window_oracle(const Lattice& L, ValueSet vs, Window w, Int p, int k,
                                           std::function<Val(const Vec&)> fn) {
        InvariantFunction f;
        f.dom = L;
        f.vs = vs;
        f.rep = Rep::WindowOracle;
        f.win = w;
        f.p = p;
        f.k = k;
        f.oracle = std::move(fn);
        return f;
    }

    // window large enough to confirm two staircase periods past the depth
    static Window default_window(Int p, int k, int rank) {
        Int box = std::max<Int>(8, ipow(p, k + 2));
        Int cap = rank >= 3 ? 32 : 200;
        return Window{std::min(box, cap), k};
    }

    // -- evaluation --------------------------------------------------------

    bool in_box(const Vec& a) const {
        for (Int c : a)
            if (c > win.box || c < -win.box) return false;
        return true;
    }

    // evaluation without the box check; total for FullTable and DepthK
    Val eval_any(const Vec& a) const {
        if (static_cast<int>(a.size()) != dom.rank)
            throw std::invalid_argument("evaluate: wrong rank");
        switch (rep) {
        case Rep::FullTable: {
            Int e = fq_encode(a, dom.q());
            if (e == 0) throw ZeroElement();
            return full[e - 1];
        }
        case Rep::DepthK: {
            if (is_zero(a)) throw ZeroElement();
            if (k == 0) return table[0];
            Vec b = a;
            Int g = content(b);
            for (auto& c : b) c /= g;
            if (lut_mod > 0) {
                Int e = 0, pw = 1;
                for (Int c : b) { e += imod(c, lut_mod) * pw; pw *= lut_mod; }
                return table[class_lut[e]];
            }
            return table[class_index.at(zpk_orbit_rep(b, p, k))];
        }
        case Rep::WindowOracle:
            if (is_zero(a)) throw ZeroElement();
            if (!in_box(a)) throw OutOfWindow(vec_str(a));
            return oracle(a);
        }
        throw std::logic_error("unreachable");
    }

    Val evaluate(const Vec& a) const {
        if (!dom.is_field() && !in_box(a)) throw OutOfWindow(vec_str(a));
        return eval_any(a);
    }

    std::vector<Val> attained_values() const {
        std::set<Val> s;
        if (rep == Rep::FullTable)
            s.insert(full.begin(), full.end());
        else if (rep == Rep::DepthK)
            s.insert(table.begin(), table.end());
        else
            for_each_window([&](const Vec& a) { s.insert(oracle(a)); });
        return {s.begin(), s.end()};
    }

    // iterate over all nonzero window elements (carrier elements over F_q)
    void for_each_window(const std::function<void(const Vec&)>& fn) const {
        int n = dom.rank;
        if (dom.is_field()) {
            Int total = ipow(dom.q(), n);
            for (Int e = 1; e < total; ++e) fn(fq_decode(e, dom.q(), n));
            return;
        }
        Vec a(n, -win.box);
        while (true) {
            if (!is_zero(a)) fn(a);
            int i = 0;
            while (i < n && a[i] == win.box) { a[i] = -win.box; ++i; }
            if (i == n) break;
            ++a[i];
        }
    }
};

// ---------------------------------------------------------------------------
// check_invariance

struct InvarianceResult {
    bool pass = true;
    Int witness_n = 0;
    Vec witness_a;
};

inline InvarianceResult check_invariance(const InvariantFunction& f) {
    InvarianceResult res;
    if (f.dom.is_field()) {
        Int q = f.dom.q();
        f.for_each_window([&](const Vec& a) {
            if (!res.pass) return;
            for (Int n = 2; n < q; ++n) {
                Vec na(a.size());
                for (size_t i = 0; i < a.size(); ++i) na[i] = imod(n * a[i], q);
                if (f.eval_any(na) != f.eval_any(a)) {
                    res = {false, n, a};
                    return;
                }
            }
        });
        return res;
    }
    // Z-lattice: every nonzero integer is a unit scalar
    f.for_each_window([&](const Vec& a) {
        if (!res.pass) return;
        for (Int n = -1; ; n = (n == -1 ? 2 : n + 1)) {
            Vec na = vec_scale(n, a);
            if (n != -1 && !f.in_box(na)) break;
            if (f.eval_any(na) != f.eval_any(a)) {
                res = {false, n, a};
                return;
            }
        }
    });
    return res;
}

// ---------------------------------------------------------------------------
// restrict

// f restricted to B, expressed in the coordinates of B's canonical basis.
inline InvariantFunction restrict_to(const InvariantFunction& f, const Subgroup& B) {
    if (!(B.parent == f.dom)) throw std::invalid_argument("restrict: subgroup of another lattice");
    int r = B.rank();
    if (f.dom.is_field()) {
        Lattice L{f.dom.dom, r};
        Int q = f.dom.dom.q;
        Int count = ipow(q, r) - 1;
        std::vector<Val> values(count);
        for (Int e = 1; e <= count; ++e)
            values[e - 1] = f.eval_any(B.embed(fq_decode(e, q, r)));
        return InvariantFunction::full_table(L, f.vs, values);
    }
    Lattice L{Domain::integers(), r};
    if (f.rep == InvariantFunction::Rep::WindowOracle) {
        // compose; box shrinks so that embedded elements stay in f's box
        Int rowmax = 1;
        for (const auto& g : B.gens) rowmax = std::max(rowmax, vec_norm1(g));
        Window w{std::max<Int>(1, f.win.box / rowmax), f.win.depth};
        auto base = f;
        return InvariantFunction::window_oracle(
            L, f.vs, w, f.p, f.k, [base, B](const Vec& x) { return base.eval_any(B.embed(x)); });
    }
    // DepthK: the restriction has depth k + v_p(largest elementary divisor)
    int d = 0;
    auto divs = elementary_divisors(B.gens);
    if (!divs.empty()) d = vp(divs.back(), f.p);
    int kk = f.k + d;
    auto reps = enumerate_primitive_classes(L, ipow(f.p, kk));
    std::vector<Val> values(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        Vec lift = reps[i];
        if (is_zero(lift)) lift[0] = 1; // k == 0 case: any primitive element
        values[i] = f.eval_any(B.embed(lift));
    }
    return InvariantFunction::depth_k(L, f.vs, f.p, kk, values);
}

// ---------------------------------------------------------------------------
// postcompose

inline InvariantFunction postcompose(const std::map<Val, Val>& h, ValueSet target,
                                     const InvariantFunction& f) {
    auto apply = [&](Val v) {
        auto it = h.find(v);
        if (it == h.end()) throw PartialMap(v);
        return it->second;
    };
    InvariantFunction g = f;
    g.vs = target;
    if (f.rep == InvariantFunction::Rep::FullTable)
        for (auto& v : g.full) v = apply(v);
    else if (f.rep == InvariantFunction::Rep::DepthK)
        for (auto& v : g.table) v = apply(v);
    else {
        auto base = f;
        g.oracle = [base, h](const Vec& a) {
            Val v = base.oracle(a);
            auto it = h.find(v);
            if (it == h.end()) throw PartialMap(v);
            return it->second;
        };
    }
    return g;
}

// snapshot a WindowOracle to its canonical DepthK form; verifies over the
// window that the oracle really is induced from A/p^k A
struct SnapshotResult {
    InvariantFunction fn;
    bool faithful = true;
    Vec witness;
};

inline SnapshotResult snapshot_to_depthk(const InvariantFunction& f) {
    if (f.rep != InvariantFunction::Rep::WindowOracle)
        return {f, true, {}};
    Lattice L = f.dom;
    auto reps = enumerate_primitive_classes(L, ipow(f.p, f.k));
    std::vector<Val> values(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        Vec lift = reps[i];
        if (is_zero(lift)) lift[0] = 1;
        values[i] = f.oracle(lift);
    }
    SnapshotResult res{InvariantFunction::depth_k(L, f.vs, f.p, f.k, values, f.win), true, {}};
    f.for_each_window([&](const Vec& a) {
        if (!res.faithful) return;
        if (res.fn.eval_any(a) != f.oracle(a)) {
            res.faithful = false;
            res.witness = a;
        }
    });
    return res;
}

} // namespace flagval
