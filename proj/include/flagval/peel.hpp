// peel.hpp - layer peeling: the certificate-producing core of the AF check.
// Peels the unique generic value off the current subgroup, descends into the
// span of the nongeneric elements, and assembles the filtration chain.
#pragma once

#include "flagval/af_types.hpp"

#include <map>
#include <set>

namespace flagval {
namespace detail {

// Nonzero elements of B inside the window box, enumerated through B's
// triangular basis so that the cost is proportional to the result size.
inline std::vector<Vec> window_elements(const InvariantFunction& f, const Subgroup& B) {
    std::vector<Vec> out;
    int r = B.rank();
    if (r == 0) return out;
    if (f.dom.is_field()) {
        Int q = f.dom.dom.q;
        Int total = ipow(q, r);
        for (Int e = 1; e < total; ++e) out.push_back(B.embed(fq_decode(e, q, r)));
        std::sort(out.begin(), out.end());
        return out;
    }
    Int M = f.win.box;
    int n = f.dom.rank;
    std::vector<size_t> pivot_col(r);
    for (int i = 0; i < r; ++i) {
        size_t c = 0;
        while (c < static_cast<size_t>(n) && B.gens[i][c] == 0) ++c;
        pivot_col[i] = c;
    }
    Vec coef(r, 0), partial(n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == r) {
            bool inbox = true, zero = true;
            for (Int c : partial) {
                if (c > M || c < -M) { inbox = false; break; }
                if (c != 0) zero = false;
            }
            if (inbox && !zero) out.push_back(partial);
            return;
        }
        // exact range for coef[i] from the pivot column (rows > i vanish there)
        Int piv = B.gens[i][pivot_col[i]];
        Int fixed = partial[pivot_col[i]];
        // need |fixed + coef*piv| <= M
        Int lo = -(M + fixed), hi = M - fixed; // coef*piv in [lo, hi]
        Int clo = lo >= 0 ? (lo + piv - 1) / piv : -((-lo) / piv);
        Int chi = hi >= 0 ? hi / piv : -((-hi + piv - 1) / piv);
        for (Int c = clo; c <= chi; ++c) {
            for (int j = 0; j < n; ++j) partial[j] += c * B.gens[i][j];
            rec(i + 1);
            for (int j = 0; j < n; ++j) partial[j] -= c * B.gens[i][j];
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// greedy minimal-ish generating subset in enumeration order
inline Mat prune_generators(const Lattice& L, const Mat& rows, const Subgroup& target) {
    Mat kept;
    Subgroup cur = Subgroup::zero(L);
    for (const auto& r : rows) {
        if (cur.contains(r)) continue;
        kept.push_back(r);
        Mat all = cur.gens;
        all.push_back(r);
        cur = Subgroup::span(L, all);
        if (cur.contains(target)) break;
    }
    return kept;
}

} // namespace detail

struct PeelOutcome {
    enum class Kind { Certified, Refuted, Shallow };
    Kind kind = Kind::Certified;
    Filtration filtration;
    RefutationWitness witness = DistinctTriple{};
    std::string note;
};

// Layer peeling on f over its window. For DepthK functions the span of the
// nongeneric elements is computed exactly by adjoining the p^K-tail of the
// current subgroup (every residue coset of a nongeneric primitive class
// consists of nongeneric elements, so the tail lies in the span).
inline PeelOutcome peel(const InvariantFunction& f) {
    const bool field = f.dom.is_field();
    const bool tail = !field && f.rep == InvariantFunction::Rep::DepthK;
    PeelOutcome out;
    out.filtration.window = f.win;

    Subgroup cur = Subgroup::full(f.dom);

    for (int iter = 0; iter < 256; ++iter) {
        // exact description depth of f restricted to cur
        int depth = f.k;
        if (tail) {
            auto divs = elementary_divisors(cur.gens);
            if (!divs.empty()) depth = f.k + vp(divs.back(), f.p);
        }
        auto elems = detail::window_elements(f, cur);
        std::map<Val, std::vector<Vec>> by_val;
        for (const auto& a : elems) by_val[f.eval_any(a)].push_back(a);

        if (by_val.empty()) {
            out.filtration.layers.push_back({cur, 0, false});
            return out;
        }
        if (by_val.size() == 1) {
            out.filtration.layers.push_back({cur, by_val.begin()->first, true});
            return out;
        }

        Int tail_mod = tail ? ipow(f.p, depth) : 0;
        auto span_nongeneric = [&](Val v) {
            Mat rows;
            for (const auto& [w, vs] : by_val)
                if (w != v)
                    for (const auto& a : vs) rows.push_back(a);
            if (tail)
                for (const auto& g : cur.gens) rows.push_back(vec_scale(tail_mod, g));
            return Subgroup::span(f.dom, rows);
        };

        std::vector<Val> candidates;
        std::map<Val, Subgroup> spans;
        for (const auto& [v, vs] : by_val) {
            Subgroup s = span_nongeneric(v);
            spans.emplace(v, s);
            if (s.proper_in(cur)) candidates.push_back(v);
        }

        if (candidates.empty()) {
            // refuted at a mandatory layer; prefer a distinct-triple witness
            if (by_val.size() >= 3) {
                size_t lim = std::min<size_t>(elems.size(), 400);
                for (size_t i = 0; i < lim; ++i)
                    for (size_t j = i + 1; j < lim; ++j) {
                        const Vec& a = elems[i];
                        const Vec& b = elems[j];
                        Val va = f.eval_any(a), vb = f.eval_any(b);
                        if (va == vb) continue;
                        Vec s = vec_add(a, b);
                        if (field)
                            for (auto& c : s) c = imod(c, f.dom.dom.q);
                        if (is_zero(s)) continue;
                        Val vsum = f.eval_any(s);
                        if (vsum != va && vsum != vb) {
                            out.kind = PeelOutcome::Kind::Refuted;
                            out.witness = DistinctTriple{a, b};
                            return out;
                        }
                    }
            }
            NoGenericValue w;
            w.layer = cur;
            for (const auto& [v, vs] : by_val) {
                Mat rows;
                for (const auto& [u, us] : by_val)
                    if (u != v)
                        for (const auto& a : us) rows.push_back(a);
                if (tail) {
                    // explicit in-coset witnesses for the tail generators
                    Vec a = rows.front();
                    auto coords = cur.coordinates(a);
                    Vec x = *coords;
                    Int g = content(x);
                    for (auto& c : x) c /= g;
                    Vec aprim = cur.embed(x);
                    rows.push_back(aprim);
                    for (const auto& gen : cur.gens)
                        rows.push_back(vec_add(aprim, vec_scale(tail_mod, gen)));
                }
                w.covers.emplace_back(v, detail::prune_generators(f.dom, rows, cur));
            }
            out.kind = PeelOutcome::Kind::Refuted;
            out.witness = w;
            return out;
        }
        if (candidates.size() > 1) {
            out.kind = PeelOutcome::Kind::Shallow;
            out.note = "ambiguous generic value within window";
            return out;
        }

        Val generic = candidates.front();
        Subgroup next = spans.at(generic);
        out.filtration.layers.push_back({cur, generic, true});
        cur = next;
    }
    out.kind = PeelOutcome::Kind::Shallow;
    out.note = "chain exceeded iteration cap";
    return out;
}

} // namespace flagval
