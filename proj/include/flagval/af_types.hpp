// af_types.hpp - filtration certificates, refutation witnesses and verdicts
// of the AF decision procedures.
#pragma once

#include "flagval/invariant.hpp"

#include <variant>

namespace flagval {

// A strictly decreasing chain of subgroups with the constant value of f on
// each successive difference set. The certificate of the AF property within
// the recorded window.
struct Filtration {
    struct Layer {
        Subgroup group;
        Val value = 0;       // value of f on group \ next within the window
        bool has_value = true; // the terminal subgroup may carry no window elements
    };
    std::vector<Layer> layers; // layers[0].group = the full lattice
    Window window;
};

// Re-checkable refutation witnesses.

// f(a), f(b), f(a+b) pairwise distinct: impossible for an AF function.
struct DistinctTriple {
    Vec a, b;
};

// A directed cycle in the relation a > b iff f(a) != f(b), f(a+b) = f(a).
struct OrderCycle {
    std::vector<Vec> elems; // elems[i] > elems[i+1], wrapping around
};

// At some mandatory layer of the peeling no value is generic: for every
// attained value v, elements with f != v already generate the whole layer.
struct NoGenericValue {
    Subgroup layer;
    std::vector<std::pair<Val, Mat>> covers; // value -> generating witnesses with f != value
};

using RefutationWitness = std::variant<DistinctTriple, OrderCycle, NoGenericValue>;

enum class ExceptionalKind { Fano, Mod4 };

struct AFVerdict {
    enum class Kind { Certified, Refuted, Exceptional };
    Kind kind = Kind::Certified;
    Filtration filtration;                       // Certified
    std::optional<RefutationWitness> witness;    // Refuted
    ExceptionalKind exceptional = ExceptionalKind::Fano; // Exceptional
    Mat basis;                                   // Exceptional: normalizing basis rows
    Window window;

    bool certified() const { return kind == Kind::Certified; }
};

struct WindowTooShallow : std::runtime_error {
    explicit WindowTooShallow(const std::string& w)
        : std::runtime_error("window too shallow: " + w) {}
};
struct InvarianceFailure : std::runtime_error {
    InvarianceFailure(Int n, const Vec& a)
        : std::runtime_error("not invariant: f(" + std::to_string(n) + "*" + vec_str(a) +
                             ") != f(" + vec_str(a) + ")"),
          n(n), a(a) {}
    Int n;
    Vec a;
};
struct Rank2Failure : std::runtime_error {
    explicit Rank2Failure(const Subgroup& b)
        : std::runtime_error("rank-2 restriction not AF: " + b.key()), sub(b) {}
    Rank2Failure(const Subgroup& b, RefutationWitness w)
        : std::runtime_error("rank-2 restriction not AF: " + b.key()), sub(b),
          witness(std::move(w)) {}
    Subgroup sub;
    std::optional<RefutationWitness> witness;
};

// re-express a witness produced in subgroup coordinates in the ambient lattice
inline RefutationWitness embed_witness(const Subgroup& B, const RefutationWitness& w) {
    auto lift = [&](const Vec& x) { return B.embed(x); };
    if (std::holds_alternative<DistinctTriple>(w)) {
        const auto& t = std::get<DistinctTriple>(w);
        return DistinctTriple{lift(t.a), lift(t.b)};
    }
    if (std::holds_alternative<OrderCycle>(w)) {
        const auto& c = std::get<OrderCycle>(w);
        OrderCycle out;
        for (const auto& e : c.elems) out.elems.push_back(lift(e));
        return out;
    }
    const auto& g = std::get<NoGenericValue>(w);
    NoGenericValue out;
    Mat rows;
    for (const auto& r : g.layer.gens) rows.push_back(lift(r));
    out.layer = Subgroup::span(B.parent, rows);
    for (const auto& [val, mat] : g.covers) {
        Mat lm;
        for (const auto& r : mat) lm.push_back(lift(r));
        out.covers.emplace_back(val, lm);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Certificate re-validation: strict descent plus layer constancy over every
// window element. Used by tests and by the CLI when echoing certificates.

inline bool validate_filtration(const InvariantFunction& f, const Filtration& fil,
                                std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (fil.layers.empty()) return fail("empty chain");
    if (fil.layers[0].group != Subgroup::full(f.dom)) return fail("chain must start at the lattice");
    for (size_t i = 0; i + 1 < fil.layers.size(); ++i)
        if (!fil.layers[i + 1].group.proper_in(fil.layers[i].group))
            return fail("descent not strict at layer " + std::to_string(i));
    bool ok = true;
    std::string msg;
    f.for_each_window([&](const Vec& a) {
        if (!ok) return;
        size_t deepest = 0;
        for (size_t i = 0; i < fil.layers.size(); ++i)
            if (fil.layers[i].group.contains(a)) deepest = i;
            else break;
        if (!fil.layers[deepest].has_value) {
            ok = false;
            msg = "window element " + vec_str(a) + " below the last recorded layer";
            return;
        }
        if (f.eval_any(a) != fil.layers[deepest].value) {
            ok = false;
            msg = "layer value mismatch at " + vec_str(a);
        }
    });
    if (!ok) return fail(msg);
    return true;
}

// A witness must re-evaluate to a genuine violation of the property it names.
inline bool validate_witness(const InvariantFunction& f, const RefutationWitness& w) {
    if (std::holds_alternative<DistinctTriple>(w)) {
        const auto& t = std::get<DistinctTriple>(w);
        Val va = f.eval_any(t.a), vb = f.eval_any(t.b), vs = f.eval_any(vec_add(t.a, t.b));
        return va != vb && vb != vs && va != vs;
    }
    if (std::holds_alternative<OrderCycle>(w)) {
        const auto& c = std::get<OrderCycle>(w);
        if (c.elems.size() < 3) return false;
        for (size_t i = 0; i < c.elems.size(); ++i) {
            const Vec& x = c.elems[i];
            const Vec& y = c.elems[(i + 1) % c.elems.size()];
            Val vx = f.eval_any(x), vy = f.eval_any(y);
            if (vx == vy) return false;
            Vec s = vec_add(x, y);
            if (f.dom.is_field())
                for (auto& e : s) e = imod(e, f.dom.q());
            if (is_zero(s) || f.eval_any(s) != vx) return false;
        }
        return true;
    }
    const auto& g = std::get<NoGenericValue>(w);
    if (g.covers.empty()) return false;
    for (const auto& [v, mat] : g.covers) {
        for (const auto& row : mat) {
            if (!g.layer.contains(row)) return false;
            if (f.eval_any(row) == v) return false;
        }
        Subgroup span = Subgroup::span(g.layer.parent, mat);
        if (!span.contains(g.layer)) return false;
    }
    return true;
}

} // namespace flagval
