// order.hpp - the order induced by an AF function: strict comparisons from
// the basic relation (f(a) != f(b), f(a+b) = f(a)), same-value comparisons
// through separators, and the filtration assembled from the order strata.
#pragma once

#include "flagval/af_check.hpp"

#include <queue>

namespace flagval {

struct SeparatorRecord {
    Vec upper, lower, separator;
};

struct OrderRelation {
    std::vector<Vec> elems;               // canonical representatives, sorted
    std::vector<int> level;               // stratum index per element (0 = generic)
    std::vector<std::vector<size_t>> strata;
    std::vector<SeparatorRecord> separators;
    bool unhandled = false;               // a configuration outside the handled cases
    std::string note;

    int index_of(const Vec& a) const {
        auto it = std::lower_bound(elems.begin(), elems.end(), a);
        if (it == elems.end() || *it != a) return -1;
        return static_cast<int>(it - elems.begin());
    }
};

struct OrderOutcome {
    enum class Kind { Order, Contradiction } kind = Kind::Order;
    OrderRelation order;
    OrderCycle cycle; // Contradiction
};

namespace detail {

// canonical sign: first nonzero coordinate positive (f(-a) = f(a), and -a
// compares exactly like a)
inline Vec canon_sign(Vec a) {
    for (Int c : a) {
        if (c > 0) return a;
        if (c < 0) {
            for (auto& x : a) x = -x;
            return a;
        }
    }
    return a;
}

} // namespace detail

// Builds the order over the window (box capped for pair enumeration). Every
// rank-2 restriction met along the way must be AF; a basic-relation cycle is
// returned as a Contradiction with an explicit alternating cycle.
inline OrderOutcome build_order(const InvariantFunction& f, Int box_cap = 6) {
    OrderOutcome out;
    OrderRelation& ord = out.order;

    // node set
    std::set<Vec> nodes;
    if (f.dom.is_field()) {
        Int q = f.dom.dom.q;
        Int total = ipow(q, f.dom.rank);
        for (Int e = 1; e < total; ++e) nodes.insert(fq_decode(e, q, f.dom.rank));
    } else {
        Int M = std::min(f.win.box, box_cap);
        Vec a(f.dom.rank, -M);
        while (true) {
            if (!is_zero(a)) nodes.insert(detail::canon_sign(a));
            int i = 0;
            while (i < f.dom.rank && a[i] == M) { a[i] = -M; ++i; }
            if (i == f.dom.rank) break;
            ++a[i];
        }
    }
    ord.elems.assign(nodes.begin(), nodes.end());
    size_t n = ord.elems.size();

    // basic relation: i -> j iff f(e_i) != f(e_j) and f(e_i + e_j) = f(e_i)
    std::vector<std::vector<size_t>> succ(n), pred(n);
    auto add_edge = [&](size_t i, size_t j) {
        succ[i].push_back(j);
        pred[j].push_back(i);
    };
    for (size_t i = 0; i < n; ++i) {
        Val vi = f.eval_any(ord.elems[i]);
        for (size_t j = i + 1; j < n; ++j) {
            Val vj = f.eval_any(ord.elems[j]);
            if (vi == vj) continue;
            Vec s = vec_add(ord.elems[i], ord.elems[j]);
            Vec d = vec_sub(ord.elems[i], ord.elems[j]);
            if (f.dom.is_field()) {
                for (auto& c : s) c = imod(c, f.dom.dom.q);
            }
            // over Z the canonical-sign merge makes e_i - e_j a second
            // representative of the pair {e_i, +-e_j}; both must agree
            Val vs;
            if (is_zero(s)) vs = f.eval_any(d);
            else {
                vs = f.eval_any(s);
                if (!f.dom.is_field() && !is_zero(d)) {
                    Val vd = f.eval_any(d);
                    if (vd != vs) {
                        // a - b lies with a, a + b with b (or conversely):
                        // the pair is ordered both ways by its two sign
                        // choices, a genuine rank-2 refutation
                        throw Rank2Failure(Subgroup::span(
                            f.dom, {ord.elems[i], ord.elems[j]}));
                    }
                }
            }
            if (vs == vi) add_edge(i, j);
            else if (vs == vj) add_edge(j, i);
            else {
                // pairwise-distinct triple: rank-2 restriction not AF
                throw Rank2Failure(Subgroup::span(f.dom, {ord.elems[i], ord.elems[j]}));
            }
        }
    }

    // cycle detection (colors: 0 unseen, 1 on stack, 2 done)
    std::vector<int> color(n, 0);
    std::vector<size_t> stack;
    std::function<bool(size_t)> dfs = [&](size_t u) -> bool {
        color[u] = 1;
        stack.push_back(u);
        for (size_t v : succ[u]) {
            if (color[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                for (; it != stack.end(); ++it) out.cycle.elems.push_back(ord.elems[*it]);
                return true;
            }
            if (color[v] == 0 && dfs(v)) return true;
        }
        color[u] = 2;
        stack.pop_back();
        return false;
    };
    for (size_t u = 0; u < n; ++u)
        if (color[u] == 0 && dfs(u)) {
            out.kind = OrderOutcome::Kind::Contradiction;
            return out;
        }

    // strata: longest path from the generic end
    ord.level.assign(n, -1);
    std::function<int(size_t)> lvl = [&](size_t u) -> int {
        if (ord.level[u] >= 0) return ord.level[u];
        int best = 0;
        for (size_t p : pred[u]) best = std::max(best, lvl(p) + 1);
        return ord.level[u] = best;
    };
    int maxlvl = 0;
    for (size_t u = 0; u < n; ++u) maxlvl = std::max(maxlvl, lvl(u));
    ord.strata.assign(maxlvl + 1, {});
    for (size_t u = 0; u < n; ++u) ord.strata[ord.level[u]].push_back(u);

    // separators for same-value comparisons across nearby strata, smallest
    // norm first; exemplar records are capped
    const size_t record_cap = 64;
    for (size_t i = 0; i < n && ord.separators.size() < record_cap; ++i)
        for (size_t j = 0; j < n && ord.separators.size() < record_cap; ++j) {
            if (i == j) continue;
            int gap = ord.level[j] - ord.level[i];
            if (gap < 1 || gap > 2) continue;
            if (f.eval_any(ord.elems[i]) != f.eval_any(ord.elems[j])) continue;
            std::optional<size_t> best;
            for (size_t b : succ[i]) {
                if (std::find(succ[b].begin(), succ[b].end(), j) == succ[b].end()) continue;
                if (!best || vec_norm1(ord.elems[b]) < vec_norm1(ord.elems[*best])) best = b;
            }
            if (best)
                ord.separators.push_back({ord.elems[i], ord.elems[j], ord.elems[*best]});
            else {
                ord.unhandled = true;
                ord.note = "no separator for " + vec_str(ord.elems[i]) + " > " +
                           vec_str(ord.elems[j]);
            }
        }
    return out;
}

// the filtration assembled from the order: the span of each stratum tail
inline std::vector<Subgroup> filtration_from_order(const InvariantFunction& f,
                                                   const OrderRelation& ord) {
    std::vector<Subgroup> chain;
    for (size_t l = 0; l < ord.strata.size(); ++l) {
        Mat rows;
        for (size_t l2 = l; l2 < ord.strata.size(); ++l2)
            for (size_t u : ord.strata[l2]) rows.push_back(ord.elems[u]);
        chain.push_back(l == 0 ? Subgroup::full(f.dom) : Subgroup::span(f.dom, rows));
    }
    return chain;
}

} // namespace flagval
