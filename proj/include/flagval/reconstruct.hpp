// reconstruct.hpp - recovering a valuation from a logarithmic AF function:
// the attained values are ordered through the induced relation, promoted to a
// scale by the logarithmic law, and the valuation ring and ideal fall out as
// membership predicates. Plus the inertia check and the AF-corank of a
// pairwise-commuting family.
#pragma once

#include "flagval/logfield.hpp"

namespace flagval {

struct NotAFLog : std::runtime_error {
    NotAFLog(const FieldElem& x, const FieldElem& y, const std::string& note)
        : std::runtime_error("not an AF function: f(x+y) below min(f(x), f(y)) at x = " + x.str() +
                             ", y = " + y.str() + (note.empty() ? "" : "; " + note)),
          x(x), y(y) {}
    FieldElem x, y;
};

struct ReconstructionResult {
    FieldModel model;
    Int p = 2;
    int prec = 8;
    // attained values (residues mod p^N) sorted by the reconstructed scale
    // order, smallest valuation first
    std::vector<Int> scale_order;
    std::map<Int, int> rank;
    int zero_rank = 0; // position of f(1) = 0
    long long sampled_pairs = 0;
    std::string caveat =
        "finite-field model: the coefficient field admits extensions of every degree; "
        "the reconstruction exercises the function-space combinatorics only";

    bool in_valuation_ring(Int value) const {
        auto it = rank.find(imod(value, ipow(p, prec)));
        if (it == rank.end()) throw std::invalid_argument("value outside the reconstructed scale");
        return it->second >= zero_rank;
    }
    bool in_valuation_ideal(Int value) const {
        auto it = rank.find(imod(value, ipow(p, prec)));
        if (it == rank.end()) throw std::invalid_argument("value outside the reconstructed scale");
        return it->second > zero_rank;
    }
    // ord comparison: does value u have smaller valuation than v?
    bool less(Int u, Int v) const { return rank.at(u) < rank.at(v); }
};

// certify f on all pool sublattices of rank <= 3 before reconstructing
inline void require_af_on_pool(const LogFunction& f, int spanD = 1) {
    std::vector<const LogFunction*> fs{&f};
    std::vector<FieldElem> refuting;
    if (comb_af_on_pool(fs, {1}, subspace_pool(f.model, spanD), &refuting, nullptr)) return;
    // extract an explicit ultrametric witness from the refuting subspace
    Int q = f.model.q;
    Lattice L{Domain::prime_field(q), static_cast<int>(refuting.size())};
    std::vector<FieldElem> pts;
    for (const auto& c : enumerate_primitive_classes(L, q)) {
        FieldElem k = FieldElem::constant(f.model, 0);
        for (size_t i = 0; i < refuting.size(); ++i)
            if (c[i] != 0) k = k + refuting[i].scaled(c[i]);
        if (!k.is_zero()) pts.push_back(k);
    }
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            FieldElem s = pts[i] + pts[j];
            if (s.is_zero()) continue;
            Int vx = eval_log(f, pts[i]).residue();
            Int vy = eval_log(f, pts[j]).residue();
            Int vs = eval_log(f, s).residue();
            if (vx != vy && vs != vx && vs != vy)
                throw NotAFLog(pts[i], pts[j], "sum value off both arguments");
            if (vx == vy && vs != vx) {
                // confirm the sum value is generic over the arguments
                for (const auto& z : pts)
                    if (eval_log(f, z).residue() == vs) {
                        FieldElem xz = pts[i] + z;
                        if (!xz.is_zero() && eval_log(f, xz).residue() == vs)
                            throw NotAFLog(pts[i], pts[j], "sum strictly more generic");
                    }
            }
        }
    throw NotAFLog(refuting[0], refuting[1], "restriction to a pool subspace is refuted");
}

inline ReconstructionResult reconstruct_valuation(const LogFunction& f, int D = 3,
                                                  long long samples = 10'000) {
    require_af_on_pool(f);

    ReconstructionResult res;
    res.model = f.model;
    res.p = f.p;
    res.prec = f.prec;
    Int mod = ipow(f.p, f.prec);

    auto pool = element_pool(f.model, D);
    std::vector<Int> fval(pool.size());
    std::map<Int, std::vector<size_t>> by_val; // value -> element indices
    for (size_t i = 0; i < pool.size(); ++i) {
        fval[i] = eval_log(f, pool[i]).residue();
        if (by_val[fval[i]].size() < 4) by_val[fval[i]].push_back(i);
    }
    std::vector<Int> values;
    std::map<Int, FieldElem> value_rep;
    for (const auto& [v, idx] : by_val) {
        values.push_back(v);
        value_rep.emplace(v, pool[idx.front()]);
    }

    // pairwise orientation: f(x+y) = f(x) means x has the smaller valuation
    std::map<std::pair<Int, Int>, int> before; // (u, v) -> 1 if u < v, -1 if v < u
    for (size_t a = 0; a < values.size(); ++a)
        for (size_t b = a + 1; b < values.size(); ++b) {
            Int u = values[a], v = values[b];
            int orient = 0;
            for (size_t iu : by_val[u])
                for (size_t iv : by_val[v]) {
                    FieldElem s = pool[iu] + pool[iv];
                    if (s.is_zero()) continue;
                    Int w = eval_log(f, s).residue();
                    int o = w == u ? 1 : w == v ? -1 : 0;
                    if (o == 0) throw NotAFLog(pool[iu], pool[iv], "sum value off both arguments");
                    if (orient == 0) orient = o;
                    // conflicts surface as explicit violations in the scan below
                }
            before[{u, v}] = orient;
            before[{v, u}] = -orient;
        }

    // the orientation must be an acyclic tournament, i.e. a total order
    std::vector<Int> sorted = values;
    std::sort(sorted.begin(), sorted.end(),
              [&](Int u, Int v) { return before[{u, v}] == 1; });
    for (size_t i = 0; i < sorted.size(); ++i)
        for (size_t j = i + 1; j < sorted.size(); ++j)
            if (before[{sorted[i], sorted[j]}] != 1) {
                // find a concrete violating pair for the verdict
                for (size_t a = 0; a < pool.size(); ++a)
                    for (size_t b = a + 1; b < pool.size(); ++b) {
                        FieldElem s = pool[a] + pool[b];
                        if (s.is_zero()) continue;
                        Int w = eval_log(f, s).residue();
                        auto ra = std::find(sorted.begin(), sorted.end(), fval[a]) - sorted.begin();
                        auto rb = std::find(sorted.begin(), sorted.end(), fval[b]) - sorted.begin();
                        auto rw = std::find(sorted.begin(), sorted.end(), w) - sorted.begin();
                        if (rw < std::min(ra, rb)) throw NotAFLog(pool[a], pool[b], "order cycle");
                    }
                throw AxiomFailure("order not total", std::to_string(sorted[i]),
                                   std::to_string(sorted[j]));
            }
    res.scale_order = sorted;
    for (size_t i = 0; i < sorted.size(); ++i) res.rank[sorted[i]] = static_cast<int>(i);
    if (!res.rank.count(0))
        throw AxiomFailure("log function does not vanish at 1", "1", "1");
    res.zero_rank = res.rank.at(0);

    // insert a value first seen off the pool: orient it against every known
    // value through representatives, demanding a consistent cut
    auto ensure_value = [&](Int w, const FieldElem& rep) -> int {
        auto it = res.rank.find(w);
        if (it != res.rank.end()) return it->second;
        std::vector<bool> smaller; // known value < w?
        for (Int u : res.scale_order) {
            const FieldElem& ru = value_rep.at(u);
            FieldElem s = rep + ru;
            if (s.is_zero()) throw AxiomFailure("negation changed the value", rep.str(), ru.str());
            Int ws = eval_log(f, s).residue();
            if (ws == u) smaller.push_back(true);
            else if (ws == w) smaller.push_back(false);
            else throw NotAFLog(rep, ru, "sum value off both arguments");
        }
        int pos = 0;
        while (pos < static_cast<int>(smaller.size()) && smaller[pos]) ++pos;
        for (size_t i = pos; i < smaller.size(); ++i)
            if (smaller[i])
                throw AxiomFailure("inconsistent cut for a new scale value", rep.str(),
                                   std::to_string(w));
        res.scale_order.insert(res.scale_order.begin() + pos, w);
        res.rank.clear();
        for (size_t i = 0; i < res.scale_order.size(); ++i)
            res.rank[res.scale_order[i]] = static_cast<int>(i);
        res.zero_rank = res.rank.at(0);
        value_rep.emplace(w, rep);
        return pos;
    };

    // validation scan: a deterministic low-degree prefix plus seeded samples
    auto check_pair = [&](size_t a, size_t b) {
        const FieldElem& x = pool[a];
        const FieldElem& y = pool[b];
        FieldElem prod = x * y;
        Int expect = imod(fval[a] + fval[b], mod);
        if (eval_log(f, prod).residue() != expect)
            throw AxiomFailure("logarithmic law", x.str(), y.str());
        FieldElem s = x + y;
        if (s.is_zero()) return;
        Int w = eval_log(f, s).residue();
        int rw = ensure_value(w, s);
        int ra = res.rank.at(fval[a]), rb = res.rank.at(fval[b]);
        if (rw < std::min(ra, rb)) throw NotAFLog(x, y, "ultrametric violated");
        if (ra != rb && rw != std::min(ra, rb))
            throw NotAFLog(x, y, "ultrametric equality clause violated");
        ++res.sampled_pairs;
    };
    size_t prefix = std::min<size_t>(pool.size(), 100);
    for (size_t a = 0; a < prefix; ++a)
        for (size_t b = a + 1; b < prefix; ++b) check_pair(a, b);
    std::mt19937 rng(12345);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    while (res.sampled_pairs < samples) {
        size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        check_pair(std::min(a, b), std::max(a, b));
    }

    // unit and residue-field checks on samples
    for (size_t a = 0; a < prefix; ++a) {
        if (res.rank.at(fval[a]) != res.zero_rank) continue;
        FieldElem inv = pool[a].inv();
        Int w = eval_log(f, inv).residue();
        if (res.rank.count(w) && res.rank.at(w) != res.zero_rank)
            throw AxiomFailure("unit inverse left the unit group", pool[a].str(), inv.str());
    }
    // multiplication descends to the residue field: x = x' (mod ideal)
    // implies xy = x'y
    int tested = 0;
    for (size_t a = 0; a < prefix && tested < 50; ++a) {
        if (res.rank.at(fval[a]) != res.zero_rank) continue;
        for (size_t mi = 0; mi < prefix && tested < 50; ++mi) {
            if (res.rank.at(fval[mi]) <= res.zero_rank) continue;
            FieldElem xprime = pool[a] + pool[mi]; // same residue class
            for (size_t y = 0; y < 8; ++y) {
                if (res.rank.at(fval[y]) != res.zero_rank) continue;
                FieldElem d = pool[a] * pool[y] - xprime * pool[y];
                if (d.is_zero()) continue;
                Int w = eval_log(f, d).residue();
                if (res.rank.count(w) && res.rank.at(w) <= res.zero_rank)
                    throw AxiomFailure("residue multiplication ill-defined", pool[a].str(),
                                       pool[y].str());
                ++tested;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// inertia check: f factors through nu on the sample pool and kills 1 + m_nu

struct InertiaResult {
    bool pass = true;
    std::optional<std::pair<FieldElem, FieldElem>> fiber_witness; // nu equal, f different
    std::optional<FieldElem> unit_witness;                        // 1 + m with f != 0
};

inline InertiaResult inertia_check(const LogFunction& f, const Valuation& nu, int D = 2) {
    InertiaResult res;
    auto pool = element_pool(f.model, D);
    std::map<std::string, std::pair<FieldElem, Int>> by_value;
    for (const auto& k : pool) {
        ScaleVal v = nu(k);
        Int fv = eval_log(f, k).residue();
        auto it = by_value.find(v.str());
        if (it == by_value.end()) by_value.emplace(v.str(), std::pair(k, fv));
        else if (it->second.second != fv) {
            res.pass = false;
            res.fiber_witness = {it->second.first, k};
            return res;
        }
    }
    ScaleVal zero{};
    for (const auto& m : pool) {
        ScaleVal v = nu(m);
        if (!(zero < v)) continue; // not in the valuation ideal
        FieldElem u = FieldElem::constant(f.model, 1) + m;
        if (u.is_zero()) continue;
        if (eval_log(f, u).residue() != 0) {
            res.pass = false;
            res.unit_witness = u;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// AF-corank of a pairwise-commuting family: a basis of AF combinations plus
// at most one residual generator

struct CorankResult {
    std::vector<std::vector<Int>> af_basis; // coefficient rows over the inputs
    std::optional<size_t> residual;         // index of the non-AF generator
};

struct NotACPairAt : std::runtime_error {
    NotACPairAt(size_t i, size_t j)
        : std::runtime_error("functions " + std::to_string(i) + " and " + std::to_string(j) +
                             " are not a c-pair"),
          i(i), j(j) {}
    size_t i, j;
};

inline CorankResult af_corank(const std::vector<LogFunction>& fs, int D = 2, Int bound = 3,
                              int spanD = 1) {
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = i + 1; j < fs.size(); ++j)
            if (!is_c_pair_field(fs[i], fs[j], D).pass) throw NotACPairAt(i, j);

    CorankResult res;
    auto spaces = subspace_pool(fs[0].model, spanD);
    std::vector<bool> af(fs.size());
    std::optional<size_t> bad;
    for (size_t i = 0; i < fs.size(); ++i) {
        std::vector<const LogFunction*> one{&fs[i]};
        af[i] = comb_af_on_pool(one, {1}, spaces, nullptr, nullptr);
        if (!af[i] && !bad) bad = i;
    }
    auto unit_row = [&](size_t i) {
        std::vector<Int> row(fs.size(), 0);
        row[i] = 1;
        return row;
    };
    if (!bad) {
        for (size_t i = 0; i < fs.size(); ++i) res.af_basis.push_back(unit_row(i));
        return res;
    }
    res.residual = *bad;
    for (size_t j = 0; j < fs.size(); ++j) {
        if (j == *bad) continue;
        if (af[j]) {
            res.af_basis.push_back(unit_row(j));
            continue;
        }
        // find an AF combination of f_bad and f_j
        bool found = false;
        std::vector<const LogFunction*> pair{&fs[*bad], &fs[j]};
        for (auto [a, b] : coefficient_candidates(bound)) {
            if (b == 0) continue; // must involve f_j
            if (comb_af_on_pool(pair, {a, b}, spaces, nullptr, nullptr)) {
                auto row = std::vector<Int>(fs.size(), 0);
                row[*bad] = a;
                row[j] = b;
                res.af_basis.push_back(row);
                found = true;
                break;
            }
        }
        if (!found)
            throw std::runtime_error("af_corank: no AF combination found within the bound");
    }
    return res;
}

} // namespace flagval
