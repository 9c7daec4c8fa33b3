// af_check.hpp - the AF decision procedure: rank-3 reduction with
// exceptional-lattice detection (the seven-point pattern and its mod-4
// refinement), special-basis search, and the top-level check_af dispatch.
#pragma once

#include "flagval/rank2.hpp"

#include <set>

namespace flagval {
namespace detail {

inline Int det3(const Mat& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// rank-2 sublattices spanned by short vectors, deduplicated by canonical form
inline std::vector<Subgroup> rank2_pool(const Lattice& L, Int radius) {
    std::vector<Vec> vecs;
    int n = L.rank;
    Vec a(n, -radius);
    while (true) {
        if (!is_zero(a)) {
            size_t i = 0;
            while (a[i] == 0) ++i;
            if (a[i] > 0 && content(a) == 1) vecs.push_back(a); // one sign, primitive
        }
        int i = 0;
        while (i < n && a[i] == radius) { a[i] = -radius; ++i; }
        if (i == n) break;
        ++a[i];
    }
    std::vector<Subgroup> pool;
    std::set<Mat> seen;
    for (size_t i = 0; i < vecs.size(); ++i)
        for (size_t j = i + 1; j < vecs.size(); ++j) {
            Subgroup s = Subgroup::span(L, {vecs[i], vecs[j]});
            if (s.rank() != 2) continue;
            if (seen.insert(s.gens).second) pool.push_back(s);
        }
    return pool;
}

// all subspaces of the given rank over a prime field, as canonical subgroups
inline std::vector<Subgroup> fq_subspaces(const Lattice& L, int rank) {
    Int q = L.dom.q;
    auto pts = enumerate_primitive_classes(L, q);
    std::vector<Subgroup> pool;
    std::set<std::string> seen;
    std::vector<size_t> pick(rank);
    std::function<void(int, size_t)> rec = [&](int pos, size_t start) {
        if (pos == rank) {
            Mat rows;
            for (int i = 0; i < rank; ++i) rows.push_back(pts[pick[i]]);
            Subgroup s = Subgroup::span(L, rows);
            if (s.rank() == rank && seen.insert(s.key()).second) pool.push_back(s);
            return;
        }
        for (size_t i = start; i < pts.size(); ++i) { pick[pos] = i; rec(pos + 1, i + 1); }
    };
    rec(0, 0);
    return pool;
}

} // namespace detail

// ---------------------------------------------------------------------------
// special basis: a basis (a1, a2, b1) with a1, a2, a1+b1, a2+b1 in one value
// class and b1 in the other

inline std::optional<Mat> detect_special_basis(const InvariantFunction& f, Int radius = 0) {
    if (f.dom.rank != 3 || f.dom.is_field())
        throw std::invalid_argument("detect_special_basis: rank-3 Z domains only");
    if (f.win.depth < 1 && f.win.box < 2) throw WindowTooShallow("special basis needs box >= 2");
    Int R = radius > 0 ? radius : std::min<Int>(f.win.box, 2);
    std::vector<Vec> vecs;
    Vec a(3, -R);
    while (true) {
        if (!is_zero(a)) vecs.push_back(a);
        int i = 0;
        while (i < 3 && a[i] == R) { a[i] = -R; ++i; }
        if (i == 3) break;
        ++a[i];
    }
    std::sort(vecs.begin(), vecs.end());
    for (const auto& a1 : vecs) {
        Val va = f.eval_any(a1);
        for (const auto& a2 : vecs) {
            if (f.eval_any(a2) != va) continue;
            for (const auto& b1 : vecs) {
                Val vb = f.eval_any(b1);
                if (vb == va) continue;
                Mat basis = {a1, a2, b1};
                Int d = detail::det3(basis);
                if (d != 1 && d != -1) continue;
                Vec s1 = vec_add(a1, b1), s2 = vec_add(a2, b1);
                if (f.eval_any(s1) == va && f.eval_any(s2) == va) return basis;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// exceptional patterns

namespace detail {

// mod-2 class table of a DepthK(2,k) function, if it is induced from A/2A
inline std::optional<std::map<Vec, Val>> mod2_classes(const InvariantFunction& f) {
    std::map<Vec, Val> g;
    for (size_t i = 0; i < f.class_reps.size(); ++i) {
        Vec c = f.class_reps[i];
        for (auto& x : c) x = imod(x, 2);
        if (is_zero(c)) return std::nullopt; // non-primitive mod 2
        auto it = g.find(c);
        if (it == g.end()) g[c] = f.table[i];
        else if (it->second != f.table[i]) return std::nullopt;
    }
    return g;
}

// the seven-point pattern: three non-collinear classes share a value, the
// other four share the other; returns the normalizing basis rows
inline std::optional<Mat> match_fano(const std::map<Vec, Val>& g) {
    if (g.size() != 7) return std::nullopt;
    std::map<Val, std::vector<Vec>> by_val;
    for (const auto& [c, v] : g) by_val[v].push_back(c);
    if (by_val.size() != 2) return std::nullopt;
    std::vector<Vec> zs;
    for (const auto& [v, cs] : by_val)
        if (cs.size() == 3) zs = cs;
    if (zs.size() != 3) return std::nullopt;
    Vec sum(3, 0);
    for (const auto& z : zs) sum = vec_add(sum, z);
    for (auto& x : sum) x = imod(x, 2);
    if (is_zero(sum)) return std::nullopt; // collinear: an AF configuration, not the pattern
    Vec e3 = sum;
    std::vector<Vec> w;
    for (const auto& z : zs) {
        Vec t = vec_add(z, e3);
        for (auto& x : t) x = imod(x, 2);
        w.push_back(t);
    }
    std::sort(w.begin(), w.end());
    return Mat{w[0], w[1], e3};
}

// mod-4 matrices: encode/decode and unimodular lifting

inline Mat mat_mul_mod(const Mat& a, const Mat& b, Int m) {
    size_t n = a.size();
    Mat r(n, Vec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Int s = 0;
            for (size_t k = 0; k < n; ++k) s += a[i][k] * b[k][j];
            r[i][j] = imod(s, m);
        }
    return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    size_t n = a.size();
    Mat r(n, Vec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

// Lift U in GL_3(Z/4) to an integer matrix with determinant +-1 congruent to
// U modulo 4. U is reduced to a diagonal of units by recorded transvections
// (row_r -= f * row_c with unit pivots; all units mod 4 are +-1, so the
// residual diagonal lifts verbatim), and the recorded ops lift as integer
// transvections.
inline Mat lift_unimodular_mod4(Mat u) {
    const Int m = 4;
    const size_t n = u.size();
    struct Op { size_t r, c; Int f; }; // row_r -= f * row_c, applied left to U
    std::vector<Op> ops;
    for (size_t c = 0; c < n; ++c) {
        if (u[c][c] % 2 == 0) {
            size_t r = 0;
            while (r < n && (r == c || u[r][c] % 2 == 0)) ++r;
            if (r == n) throw std::logic_error("lift_unimodular_mod4: singular");
            for (size_t j = 0; j < n; ++j) u[c][j] = imod(u[c][j] + u[r][j], m);
            ops.push_back({c, r, -1});
        }
        Int s = mod_inv(u[c][c], m);
        for (size_t r = 0; r < n; ++r) {
            if (r == c || u[r][c] == 0) continue;
            Int f = imod(u[r][c] * s, m);
            if (f == 0) continue;
            for (size_t j = 0; j < n; ++j) u[r][j] = imod(u[r][j] - f * u[c][j], m);
            ops.push_back({r, c, f == 3 ? -1 : f});
        }
    }
    // u is now diag(d_i) with d_i in {1,3}; 3 lifts to -1
    Mat lift(n, Vec(n, 0));
    for (size_t i = 0; i < n; ++i) lift[i][i] = (u[i][i] == 1) ? 1 : -1;
    // U = E_1^{-1} ... E_k^{-1} D: apply inverse ops right-to-left onto D
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
        for (size_t j = 0; j < n; ++j) lift[it->r][j] += it->f * lift[it->c][j];
    Int d = det3(lift);
    if (d != 1 && d != -1) throw std::logic_error("lift_unimodular_mod4: lift not unimodular");
    return lift;
}

} // namespace detail

// canonical mod-4 exceptional template on the standard basis: value 0 on the
// three off-line classes mod 2, 1 on the others, except the (0,1,0) classes
// where the first coordinate decides mod 4
inline Val mod4_template(const Vec& n) {
    Vec r(3);
    for (int i = 0; i < 3; ++i) r[i] = imod(n[i], 2);
    if (r == Vec{0, 1, 0}) return imod(n[0], 4) == 0 ? 0 : 1;
    if (r == Vec{1, 0, 1} || r == Vec{0, 1, 1} || r == Vec{1, 1, 1}) return 0;
    return 1;
}

// search for a basis exhibiting the mod-4 pattern, by brute force over
// GL_3(Z/4) in deterministic order; returns unimodular integer rows
inline std::optional<Mat> match_mod4(const InvariantFunction& f) {
    if (f.dom.rank != 3 || f.dom.is_field() || f.p != 2 || f.k > 2) return std::nullopt;
    auto vals = f.attained_values();
    if (vals.size() != 2) return std::nullopt;
    auto reps = enumerate_primitive_classes(Lattice{Domain::integers(), 3}, 4);
    for (int flip = 0; flip < 2; ++flip) {
        Val v0 = vals[flip], v1 = vals[1 - flip];
        for (Int code = 0; code < ipow(4, 9); ++code) {
            Mat u(3, Vec(3));
            Int c = code;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) { u[i][j] = c % 4; c /= 4; }
            if (detail::det3(u) % 2 == 0) continue;
            bool ok = true;
            for (const auto& n : reps) {
                Vec img(3, 0);
                for (int j = 0; j < 3; ++j)
                    for (int i = 0; i < 3; ++i) img[j] += n[i] * u[i][j];
                Val got = f.eval_any(img); // depth <= 2: class mod 4 determines it
                Val want = mod4_template(n) == 0 ? v0 : v1;
                if (got != want) { ok = false; break; }
            }
            if (!ok) continue;
            Mat lifted = detail::lift_unimodular_mod4(u);
            // re-verify the pattern on the integer lift
            bool verified = true;
            for (const auto& n : reps) {
                Vec img(3, 0);
                for (int j = 0; j < 3; ++j)
                    for (int i = 0; i < 3; ++i) img[j] += n[i] * lifted[i][j];
                if (is_zero(img)) { verified = false; break; }
                Val want = mod4_template(n) == 0 ? v0 : v1;
                if (f.eval_any(img) != want) { verified = false; break; }
            }
            if (verified) return lifted;
        }
    }
    return std::nullopt;
}

// Fano basis for a function induced from A/2A (Z-lattice or (Z/2)-space)
inline std::optional<Mat> match_fano(const InvariantFunction& f) {
    std::map<Vec, Val> g;
    if (f.dom.is_field()) {
        if (f.dom.dom.q != 2 || f.dom.rank != 3) return std::nullopt;
        for (const auto& c : enumerate_primitive_classes(f.dom, 2)) g[c] = f.eval_any(c);
    } else {
        if (f.rep != InvariantFunction::Rep::DepthK || f.p != 2 || f.dom.rank != 3)
            return std::nullopt;
        auto m2 = detail::mod2_classes(f);
        if (!m2) return std::nullopt;
        g = *m2;
    }
    return detail::match_fano(g);
}

// ---------------------------------------------------------------------------
// rank-3 reduction

struct Rank2SweepResult {
    bool all_af = true;
    Subgroup failing;
    RefutationWitness witness = DistinctTriple{};
};

inline Rank2SweepResult sweep_rank2(const InvariantFunction& f, Int radius = 0) {
    Rank2SweepResult res;
    if (f.dom.is_field()) {
        for (const auto& B : detail::fq_subspaces(f.dom, 2)) {
            auto g = restrict_to(f, B);
            auto out = peel(g);
            if (out.kind == PeelOutcome::Kind::Refuted) {
                res.all_af = false;
                res.failing = B;
                res.witness = out.witness;
                return res;
            }
        }
        return res;
    }
    // Z-lattice: peel each restriction lazily over a small window, without
    // re-tabulating it (the verdicts are window-relative either way)
    auto pool = detail::rank2_pool(f.dom, radius > 0 ? radius : std::min<Int>(f.win.box, 3));
    Lattice L2{Domain::integers(), 2};
    for (const auto& B : pool) {
        auto g = InvariantFunction::window_oracle(
            L2, f.vs, Window{std::min<Int>(f.win.box, 8), f.k}, f.p, f.k,
            [&f, &B](const Vec& x) { return f.eval_any(B.embed(x)); });
        auto out = peel(g);
        if (out.kind == PeelOutcome::Kind::Refuted) {
            res.all_af = false;
            res.failing = B;
            res.witness = out.witness;
            return res;
        }
    }
    return res;
}

inline AFVerdict rank3_reduce(const InvariantFunction& f, Int rank2_radius = 0) {
    if (f.dom.rank != 3) throw std::invalid_argument("rank3_reduce: rank-3 domains only");
    auto sweep = sweep_rank2(f, rank2_radius);
    if (!sweep.all_af) throw Rank2Failure(sweep.failing, embed_witness(sweep.failing, sweep.witness));

    AFVerdict v;
    v.window = f.win;
    auto out = peel(f);
    if (out.kind == PeelOutcome::Kind::Shallow) throw WindowTooShallow(out.note);
    if (out.kind == PeelOutcome::Kind::Certified) {
        v.kind = AFVerdict::Kind::Certified;
        v.filtration = out.filtration;
        return v;
    }
    // refuted with all rank-2 restrictions AF: exceptional over Z (and over
    // (Z/2)^3, which is admitted as data); match the two patterns. The
    // verdict keeps the concrete refutation alongside the normal form.
    if (auto fano = match_fano(f)) {
        v.kind = AFVerdict::Kind::Exceptional;
        v.exceptional = ExceptionalKind::Fano;
        v.basis = *fano;
        v.witness = out.witness;
        return v;
    }
    if (!f.dom.is_field()) {
        if (auto m4 = match_mod4(f)) {
            v.kind = AFVerdict::Kind::Exceptional;
            v.exceptional = ExceptionalKind::Mod4;
            v.basis = *m4;
            v.witness = out.witness;
            return v;
        }
    }
    v.kind = AFVerdict::Kind::Refuted;
    v.witness = out.witness;
    return v;
}

// ---------------------------------------------------------------------------
// check_af

inline AFVerdict check_af(const InvariantFunction& fin) {
    auto inv = check_invariance(fin);
    if (!inv.pass) throw InvarianceFailure(inv.witness_n, inv.witness_a);

    InvariantFunction f = fin;
    if (f.rep == InvariantFunction::Rep::WindowOracle) {
        auto snap = snapshot_to_depthk(f);
        if (snap.faithful) f = snap.fn;
        // otherwise certify directly over the window from the oracle
    }

    AFVerdict v;
    v.window = f.win;
    if (f.dom.rank <= 2) {
        auto out = peel(f);
        if (out.kind == PeelOutcome::Kind::Shallow) throw WindowTooShallow(out.note);
        if (out.kind == PeelOutcome::Kind::Certified) {
            v.kind = AFVerdict::Kind::Certified;
            v.filtration = out.filtration;
        } else {
            v.kind = AFVerdict::Kind::Refuted;
            v.witness = out.witness;
        }
        return v;
    }
    if (f.dom.rank == 3) {
        try {
            return rank3_reduce(f);
        } catch (const Rank2Failure& e) {
            v.kind = AFVerdict::Kind::Refuted;
            v.witness = e.witness ? *e.witness : RefutationWitness(DistinctTriple{});
            return v;
        }
    }

    // rank 4: check all rank-3 restrictions, then assemble globally
    if (f.dom.is_field()) {
        for (const auto& B : detail::fq_subspaces(f.dom, 3)) {
            auto g = restrict_to(f, B);
            AFVerdict sub;
            try {
                sub = rank3_reduce(g);
            } catch (const Rank2Failure& e) {
                sub.kind = AFVerdict::Kind::Refuted;
                sub.witness = e.witness ? *e.witness : RefutationWitness(DistinctTriple{});
            }
            if (!sub.certified()) {
                v.kind = sub.kind;
                if (sub.kind == AFVerdict::Kind::Refuted && sub.witness)
                    v.witness = embed_witness(B, *sub.witness);
                else {
                    v.witness = sub.witness;
                    v.exceptional = sub.exceptional;
                    v.basis = sub.basis;
                }
                return v;
            }
        }
        auto out = peel(f);
        if (out.kind == PeelOutcome::Kind::Certified) {
            v.kind = AFVerdict::Kind::Certified;
            v.filtration = out.filtration;
        } else if (out.kind == PeelOutcome::Kind::Refuted) {
            v.kind = AFVerdict::Kind::Refuted;
            v.witness = out.witness;
        } else {
            throw WindowTooShallow(out.note);
        }
        return v;
    }
    throw std::invalid_argument("check_af: Z-lattices beyond rank 3 are out of scope");
}

} // namespace flagval
