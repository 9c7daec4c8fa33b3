// reduce.hpp - value-set reduction: a function with finite values is AF iff
// all its Z/2 (and, at small sizes, Z/4) reductions are.
#pragma once

#include "flagval/af_check.hpp"

namespace flagval {

struct ReduceOutcome {
    enum class Kind { AllReductionsAF, Counterexample } kind = Kind::AllReductionsAF;
    std::map<Val, Val> h;      // Counterexample: the reducing map
    Int target = 2;            // 2 or 4
    RefutationWitness witness = DistinctTriple{};
    size_t reductions_checked = 0;
};

// Enumerates the Z/2 reductions (h with h(first value) = 0; the complement
// map has the same verdict), then for |S| <= 8 the Z/4 reductions up to value
// relabeling: maps into Z/4 correspond to ordered set partitions of S into
// at most 4 blocks, and relabeling the target preserves AF-ness, so only
// first-appearance-canonical partitions of >= 3 blocks remain to be checked.
inline ReduceOutcome reduce_value_set(const InvariantFunction& f) {
    ReduceOutcome out;
    auto vals = f.attained_values();
    size_t s = vals.size();

    auto check = [&](const std::map<Val, Val>& h, Int target) -> bool {
        auto g = postcompose(h, ValueSet::residue(target), f);
        ++out.reductions_checked;
        AFVerdict v = check_af(g);
        if (v.kind == AFVerdict::Kind::Certified) return true;
        out.kind = ReduceOutcome::Kind::Counterexample;
        out.h = h;
        out.target = target;
        if (v.witness) out.witness = *v.witness;
        return false;
    };

    // Z/2 reductions
    for (Int mask = 0; mask < (Int{1} << s); ++mask) {
        if (s > 0 && (mask & 1)) continue; // fix h(vals[0]) = 0
        std::map<Val, Val> h;
        bool constant0 = true, constant1 = true;
        for (size_t i = 0; i < s; ++i) {
            Val b = (mask >> i) & 1;
            h[vals[i]] = b;
            (b ? constant0 : constant1) = false;
        }
        if (constant0 || constant1) continue; // constant reductions are AF
        if (!check(h, 2)) return out;
    }

    // Z/4 reductions as canonical partitions with 3 or 4 blocks
    if (s <= 8) {
        std::vector<Int> assign(s, 0);
        std::function<bool(size_t, Int)> rec = [&](size_t i, Int used) -> bool {
            if (i == s) {
                if (used < 3) return true; // covered by the Z/2 pass
                std::map<Val, Val> h;
                for (size_t j = 0; j < s; ++j) h[vals[j]] = assign[j];
                return check(h, 4);
            }
            Int lim = std::min<Int>(used + 1, 4);
            for (Int b = 0; b < lim; ++b) {
                assign[i] = b;
                if (!rec(i + 1, std::max(used, b + 1))) return false;
            }
            return true;
        };
        if (!rec(0, 0)) return out;
    }
    return out;
}

} // namespace flagval
