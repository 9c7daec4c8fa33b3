// logfield.hpp - logarithmic functions on the field models: place-supported
// weights on F_q(t) and monomial-valuation characters on F_q(x,y); c-pair
// checking over element pools, AF-element search in spans, and valuation
// reconstruction from certified logarithmic functions.
#pragma once

#include "flagval/af_check.hpp"
#include "flagval/field.hpp"

#include <random>

namespace flagval {

struct LogFunction {
    FieldModel model;
    Int p = 2;
    int prec = 8;
    // univariate: finite weight per place (unlisted places weigh 0)
    std::vector<std::pair<Place, Int>> weights;
    // bivariate: character chi(x^i y^j) = i*chi_x + j*chi_y composed with a
    // monomial valuation
    MonomialVal mval{};
    Int chi_x = 0, chi_y = 0;

    static LogFunction place_weights(Int q, Int p, int prec,
                                     std::vector<std::pair<Place, Int>> ws) {
        if (p == q) throw std::invalid_argument("log function: p must differ from the field characteristic");
        LogFunction f;
        f.model = {FieldModel::Kind::Univariate, q};
        f.p = p;
        f.prec = prec;
        f.weights = std::move(ws);
        return f;
    }
    static LogFunction character(Int q, Int p, int prec, const MonomialVal& mv, Int cx, Int cy) {
        if (p == q) throw std::invalid_argument("log function: p must differ from the field characteristic");
        // for a rank-1 (weighted) scale the character must factor through the
        // valuation: chi on x and y proportional to the weights
        if (mv.kind == MonomialVal::Kind::Weighted && cx * mv.wy != cy * mv.wx)
            throw std::invalid_argument("character does not factor through the weighted scale");
        LogFunction f;
        f.model = {FieldModel::Kind::Bivariate, q};
        f.p = p;
        f.prec = prec;
        f.mval = mv;
        f.chi_x = cx;
        f.chi_y = cy;
        return f;
    }
};

inline PadicInt eval_log(const LogFunction& f, const FieldElem& x) {
    if (x.is_zero()) throw ZeroElement();
    if (!(x.model == f.model)) throw std::invalid_argument("eval_log: wrong model");
    if (f.model.kind == FieldModel::Kind::Univariate) {
        Int acc = 0;
        for (const auto& [pl, w] : f.weights) acc += w * place_ord(pl, x.u);
        return PadicInt(f.p, f.prec, acc);
    }
    // chi applied to the monomial valuation; the scale pair stores the
    // comparison order, chi reads the (x, y) exponent data
    ScaleVal s = f.mval.of(x.b);
    Int i, j;
    switch (f.mval.kind) {
    case MonomialVal::Kind::LexYX: i = s.b; j = s.a; break;
    case MonomialVal::Kind::LexXY: i = s.a; j = s.b; break;
    default: {
        // weighted: recover exponents from the minimal monomial directly
        auto vn = f.mval.of_poly(x.b.num);
        auto min_exp = [&](const BiPoly& g, const ScaleVal& target) {
            for (const auto& [e, v] : g.c)
                if (f.mval.of_monomial(e.first, e.second) == target)
                    return std::pair(static_cast<Int>(e.first), static_cast<Int>(e.second));
            throw std::logic_error("eval_log: minimal monomial not found");
        };
        auto vd = f.mval.of_poly(x.b.den);
        auto [ni, nj] = min_exp(x.b.num, vn);
        auto [di, dj] = min_exp(x.b.den, vd);
        i = ni - di;
        j = nj - dj;
        break;
    }
    }
    return PadicInt(f.p, f.prec, i * f.chi_x + j * f.chi_y);
}

// pointwise Z-linear combination of log functions
inline PadicInt eval_comb(const std::vector<const LogFunction*>& fs, const std::vector<Int>& lambda,
                          const FieldElem& x) {
    PadicInt acc(fs[0]->p, fs[0]->prec, 0);
    for (size_t i = 0; i < fs.size(); ++i)
        if (lambda[i] != 0) acc = acc + eval_log(*fs[i], x) * lambda[i];
    return acc;
}

// ---------------------------------------------------------------------------
// element pools: all reduced fractions with numerator and denominator of
// degree <= D (monic representatives; the functions are k*-invariant), and
// Laurent monomials of bidegree <= (D, D) in the bivariate model

inline std::vector<FieldElem> element_pool(const FieldModel& m, int D) {
    std::vector<FieldElem> pool;
    if (m.kind == FieldModel::Kind::Univariate) {
        std::vector<Poly> monics{Poly::one(m.q)};
        for (int d = 1; d <= D; ++d) {
            Int count = ipow(m.q, d);
            for (Int e = 0; e < count; ++e) {
                std::vector<Int> cs(d + 1, 0);
                Int x = e;
                for (int i = 0; i < d; ++i) { cs[i] = x % m.q; x /= m.q; }
                cs[d] = 1;
                monics.push_back(Poly::from_coeffs(m.q, cs));
            }
        }
        for (const auto& n : monics)
            for (const auto& d : monics) {
                if (poly_gcd(n, d).deg() > 0) continue;
                pool.push_back(FieldElem::uni(m.q, RatFunc::of(n, d)));
            }
    } else {
        for (int a = -D; a <= D; ++a)
            for (int b = -D; b <= D; ++b)
                pool.push_back(FieldElem::bi(
                    m.q, BiFrac::of(BiPoly::monomial(m.q, a > 0 ? a : 0, b > 0 ? b : 0, 1),
                                    BiPoly::monomial(m.q, a < 0 ? -a : 0, b < 0 ? -b : 0, 1))));
    }
    std::sort(pool.begin(), pool.end());
    return pool;
}

// small elements used to span test subspaces
inline std::vector<FieldElem> span_pool(const FieldModel& m, int D = 1) {
    return element_pool(m, D);
}

inline bool is_constant_elem(const FieldElem& x) {
    if (x.model.kind == FieldModel::Kind::Univariate)
        return x.u.num.deg() <= 0 && x.u.den.deg() <= 0;
    auto one = BiPoly::one(x.model.q);
    return x.b.den == one && (x.b.num.is_zero() || (x.b.num.c.size() == 1 &&
                                                    x.b.num.c.begin()->first == std::pair(0, 0)));
}

// ---------------------------------------------------------------------------
// restriction to a finite-dimensional subspace: a full table on P(V)

inline InvariantFunction restrict_to_subspace(const LogFunction& f,
                                              const std::vector<FieldElem>& basis) {
    if (basis.empty() || basis.size() > 4)
        throw std::invalid_argument("restrict_to_subspace: 1 <= dim <= 4");
    Int q = f.model.q;
    int m = static_cast<int>(basis.size());
    Lattice L{Domain::prime_field(q), m};
    auto reps = enumerate_primitive_classes(L, q);
    std::vector<Val> values;
    values.reserve(reps.size());
    for (const auto& c : reps) {
        FieldElem k = FieldElem::constant(f.model, 0);
        for (int i = 0; i < m; ++i)
            if (c[i] != 0) k = k + basis[i].scaled(c[i]);
        if (k.is_zero()) throw DependentBasis();
        values.push_back(eval_log(f, k).residue());
    }
    return InvariantFunction::from_projective(L, ValueSet::padic(f.p, f.prec), values);
}

// the same for a pointwise combination
inline InvariantFunction restrict_comb_to_subspace(const std::vector<const LogFunction*>& fs,
                                                   const std::vector<Int>& lambda,
                                                   const std::vector<FieldElem>& basis) {
    Int q = fs[0]->model.q;
    int m = static_cast<int>(basis.size());
    Lattice L{Domain::prime_field(q), m};
    auto reps = enumerate_primitive_classes(L, q);
    std::vector<Val> values;
    values.reserve(reps.size());
    for (const auto& c : reps) {
        FieldElem k = FieldElem::constant(fs[0]->model, 0);
        for (int i = 0; i < m; ++i)
            if (c[i] != 0) k = k + basis[i].scaled(c[i]);
        if (k.is_zero()) throw DependentBasis();
        values.push_back(eval_comb(fs, lambda, k).residue());
    }
    return InvariantFunction::from_projective(L, ValueSet::padic(fs[0]->p, fs[0]->prec), values);
}

// ---------------------------------------------------------------------------
// c-pair check over the pool

struct CPairFail {
    FieldElem k1, k2;                 // the rank-2 module
    std::array<FieldElem, 3> witness; // three module elements with rank-3 values
};

struct CPairResult {
    bool pass = true;
    std::optional<CPairFail> fail;
    int precision = 8;
    long long modules_checked = 0;
};

struct NotACPair : std::runtime_error {
    explicit NotACPair(const std::string& w) : std::runtime_error("not a c-pair: " + w) {}
};

inline CPairResult is_c_pair_field(const LogFunction& f1, const LogFunction& f2, int D = 2,
                                   long long budget = 4'000'000) {
    if (!(f1.model == f2.model) || f1.p != f2.p)
        throw std::invalid_argument("is_c_pair_field: functions on one model");
    CPairResult res;
    res.precision = f1.prec;
    Int q = f1.model.q;
    Int mod = ipow(f1.p, f1.prec);
    auto pool = element_pool(f1.model, D);
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = i + 1; j < pool.size(); ++j) {
            if (--budget < 0) throw BudgetExceeded("c-pair module sweep");
            // skip F_q-proportional pairs
            if (is_constant_elem(pool[i] * pool[j].inv())) continue;
            ++res.modules_checked;
            // the q+1 points of the module
            std::vector<FieldElem> pts{pool[j]};
            for (Int c = 0; c < q; ++c) pts.push_back(pool[i] + pool[j].scaled(c));
            std::vector<Int> v1, v2;
            for (const auto& k : pts) {
                v1.push_back(eval_log(f1, k).residue());
                v2.push_back(eval_log(f2, k).residue());
            }
            size_t n = pts.size();
            for (size_t a = 0; a < n; ++a)
                for (size_t b = a + 1; b < n; ++b)
                    for (size_t c = b + 1; c < n; ++c) {
                        Int det = v1[a] * (v2[b] - v2[c]) - v1[b] * (v2[a] - v2[c]) +
                                  v1[c] * (v2[a] - v2[b]);
                        if (imod(det, mod) != 0) {
                            res.pass = false;
                            res.fail = CPairFail{pool[i], pool[j], {pts[a], pts[b], pts[c]}};
                            return res;
                        }
                    }
        }
    return res;
}

// ---------------------------------------------------------------------------
// AF-element search in the span of a c-pair

struct SpanCandidateReport {
    Int l1 = 0, l2 = 0;
    bool af = false;
    std::vector<FieldElem> refuting_basis; // when not AF
};

struct AFSearchResult {
    bool found = false;
    Int l1 = 0, l2 = 0;
    size_t subspaces_certified = 0;
    std::vector<SpanCandidateReport> searched;
};

// deterministic subspace bases of dimension 2 and 3 from the small pool
inline std::vector<std::vector<FieldElem>> subspace_pool(const FieldModel& m, int spanD = 1) {
    auto elems = span_pool(m, spanD);
    std::vector<std::vector<FieldElem>> out;
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = i + 1; j < elems.size(); ++j) {
            if (is_constant_elem(elems[i] * elems[j].inv())) continue;
            out.push_back({elems[i], elems[j]});
        }
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = i + 1; j < elems.size(); ++j)
            for (size_t k = j + 1; k < elems.size(); ++k) {
                if (is_constant_elem(elems[i] * elems[j].inv())) continue;
                out.push_back({elems[i], elems[j], elems[k]});
            }
    return out;
}

inline bool comb_af_on_pool(const std::vector<const LogFunction*>& fs, const std::vector<Int>& lam,
                            const std::vector<std::vector<FieldElem>>& spaces,
                            std::vector<FieldElem>* refuting = nullptr,
                            size_t* certified = nullptr) {
    for (const auto& basis : spaces) {
        InvariantFunction g;
        try {
            g = restrict_comb_to_subspace(fs, lam, basis);
        } catch (const DependentBasis&) {
            continue;
        }
        auto v = check_af(g);
        if (v.kind != AFVerdict::Kind::Certified) {
            if (refuting) *refuting = basis;
            return false;
        }
        if (certified) ++*certified;
    }
    return true;
}

inline AFSearchResult find_af_in_span(const LogFunction& f1, const LogFunction& f2, Int bound = 3,
                                      int D = 2, int spanD = 1) {
    auto cp = is_c_pair_field(f1, f2, D);
    if (!cp.pass) throw NotACPair("rank-3 module " + cp.fail->k1.str() + ", " + cp.fail->k2.str());
    AFSearchResult res;
    auto spaces = subspace_pool(f1.model, spanD);
    std::vector<const LogFunction*> fs{&f1, &f2};
    for (auto [a, b] : coefficient_candidates(bound)) {
        SpanCandidateReport rep;
        rep.l1 = a;
        rep.l2 = b;
        size_t cert = 0;
        if (comb_af_on_pool(fs, {a, b}, spaces, &rep.refuting_basis, &cert)) {
            rep.af = true;
            res.found = true;
            res.l1 = a;
            res.l2 = b;
            res.subspaces_certified = cert;
            res.searched.push_back(rep);
            return res;
        }
        res.searched.push_back(rep);
    }
    return res;
}

// ---------------------------------------------------------------------------
// assembling a bad 3-dimensional subspace when the span avoids AF functions

struct BadSubspaceResult {
    std::optional<std::vector<FieldElem>> V; // 3-dim basis, when assembled
    std::vector<SpanCandidateReport> candidates;
    std::optional<std::pair<Int, Int>> af_side_channel;
    std::string note;
};

inline BadSubspaceResult find_bad_subspace(const LogFunction& f1, const LogFunction& f2,
                                           Int bound = 2, int spanD = 1) {
    BadSubspaceResult out;
    auto spaces = subspace_pool(f1.model, spanD);
    std::vector<const LogFunction*> fs{&f1, &f2};
    Int mod = ipow(f1.p, f1.prec);

    // a 2-dim subspace V' refuting f1
    std::vector<FieldElem> vprime;
    if (comb_af_on_pool(fs, {1, 0}, spaces, &vprime, nullptr)) {
        out.af_side_channel = {1, 0};
        out.note = "f1 is AF on every pool subspace";
        return out;
    }
    if (vprime.size() != 2) vprime.resize(2);

    // the slope mu with f2 = mu f1 + const on V', from the module relation
    Int q = f1.model.q;
    std::vector<FieldElem> vpts{vprime[1]};
    for (Int c = 0; c < q; ++c) vpts.push_back(vprime[0] + vprime[1].scaled(c));
    std::vector<Int> a1, a2;
    for (const auto& k : vpts) {
        a1.push_back(eval_log(f1, k).residue());
        a2.push_back(eval_log(f2, k).residue());
    }
    std::optional<Int> mu;
    for (size_t i = 0; i < vpts.size() && !mu; ++i)
        for (size_t j = i + 1; j < vpts.size() && !mu; ++j) {
            Int d = imod(a1[i] - a1[j], mod);
            if (d % f1.p == 0) continue;
            mu = imod((a2[i] - a2[j]) * mod_inv(d, mod), mod);
        }
    bool relation_consistent = mu.has_value();
    if (mu) {
        Int shift = imod(a2[0] - *mu * a1[0], mod);
        for (size_t i = 1; i < vpts.size(); ++i)
            if (imod(a2[i] - *mu * a1[i], mod) != shift) { relation_consistent = false; break; }
    }
    // g = f2 - mu f1 when the relation holds on V'; otherwise fall back to f2
    std::vector<Int> glam = relation_consistent ? std::vector<Int>{-*mu, 1}
                                                : std::vector<Int>{0, 1};
    if (!relation_consistent)
        out.note = "module relation inconsistent on V' (not a c-pair); using f2 directly; ";

    // does g vanish on the pool? (degenerate assembly: extend V' by any
    // independent pool element)
    bool g_zero = true;
    for (const auto& k : span_pool(f1.model, spanD))
        if (eval_comb(fs, glam, k).residue() != 0) { g_zero = false; break; }

    std::vector<FieldElem> wprime;
    if (g_zero) {
        wprime = vprime; // placeholder; the degenerate branch extends V' below
    } else if (comb_af_on_pool(fs, glam, spaces, &wprime, nullptr)) {
        out.af_side_channel = {glam[0], glam[1]};
        out.note += "the combination f2 - mu f1 is AF on every pool subspace";
        return out;
    }
    if (wprime.size() != 2) wprime.resize(2);

    // V = <x1, x2, y2 y1^{-1} x1>, with the orientation of W' chosen so the
    // third generator leaves <x1, x2>; degenerate case: extend by a pool
    // element instead
    std::vector<std::vector<FieldElem>> assemblies;
    if (g_zero) {
        for (const auto& e : span_pool(f1.model, spanD))
            assemblies.push_back({vprime[0], vprime[1], e});
    } else {
        assemblies.push_back({vprime[0], vprime[1], wprime[1] * wprime[0].inv() * vprime[0]});
        assemblies.push_back({vprime[0], vprime[1], wprime[0] * wprime[1].inv() * vprime[0]});
    }
    for (const auto& V : assemblies) {
        try {
            auto probe = restrict_comb_to_subspace(fs, {1, 0}, V);
            (void)probe;
        } catch (const DependentBasis&) {
            continue;
        }
        // verify the candidates on subspaces of V
        std::vector<FieldElem> pts;
        Lattice L3{Domain::prime_field(q), 3};
        for (const auto& c : enumerate_primitive_classes(L3, q)) {
            FieldElem k = FieldElem::constant(f1.model, 0);
            for (int i = 0; i < 3; ++i)
                if (c[i] != 0) k = k + V[static_cast<size_t>(i)].scaled(c[i]);
            pts.push_back(k);
        }
        bool all_refuted = true;
        for (auto [a, b] : coefficient_candidates(bound)) {
            // combinations that vanish identically on V are not nonzero span
            // elements; skip them
            bool vanishes = true;
            for (const auto& k : pts)
                if (eval_comb(fs, {a, b}, k).residue() != 0) { vanishes = false; break; }
            if (vanishes) continue;
            SpanCandidateReport rep;
            rep.l1 = a;
            rep.l2 = b;
            bool refuted = false;
            for (size_t i = 0; i < pts.size() && !refuted; ++i)
                for (size_t j = i + 1; j < pts.size() && !refuted; ++j) {
                    if (is_constant_elem(pts[i] * pts[j].inv())) continue;
                    std::vector<FieldElem> basis{pts[i], pts[j]};
                    InvariantFunction g;
                    try {
                        g = restrict_comb_to_subspace(fs, {a, b}, basis);
                    } catch (const DependentBasis&) {
                        continue;
                    }
                    if (check_af(g).kind != AFVerdict::Kind::Certified) {
                        refuted = true;
                        rep.refuting_basis = basis;
                    }
                }
            rep.af = !refuted;
            if (!refuted) {
                all_refuted = false;
                if (!out.af_side_channel) out.af_side_channel = {a, b};
            }
            out.candidates.push_back(rep);
        }
        out.V = V;
        if (!all_refuted) out.note += "some span candidates stay AF inside V";
        return out;
    }
    out.note += "could not assemble an independent third generator";
    return out;
}

} // namespace flagval
