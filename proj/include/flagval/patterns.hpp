// patterns.hpp - pinned construction of the canonical instances: two-valued
// p-power staircases and the two exceptional rank-3 patterns (the Fano
// seven-point configuration and its mod-4 refinement).
#pragma once

#include "flagval/af_check.hpp"

namespace flagval {

// The two-valued staircase on Z^2: value v1 exactly where
// v_p(y) >= v_p(x) + s, else v0. Depth-s description; s = 1 is the basic
// staircase whose chain alternates Z p^n a + Z p^n a' and
// Z p^n a + Z p^{n+1} a'.
inline InvariantFunction staircase_fn(Int p, int s, Val v0 = 0, Val v1 = 1) {
    Lattice L{Domain::integers(), 2};
    auto reps = enumerate_primitive_classes(L, ipow(p, s));
    Int ps = ipow(p, s);
    std::vector<Val> vals;
    vals.reserve(reps.size());
    for (const auto& r : reps) vals.push_back(imod(r[1], ps) == 0 ? v1 : v0);
    return InvariantFunction::depth_k(L, ValueSet::residue(2), p, s, vals);
}

// Seven-point pattern values on the standard basis: 0 on e1+e3, e2+e3,
// e1+e2+e3 (not a line), 1 on the other four points.
inline Val fano_template(const Vec& n) {
    Vec r(3);
    for (int i = 0; i < 3; ++i) r[i] = imod(n[i], 2);
    if (r == Vec{1, 0, 1} || r == Vec{0, 1, 1} || r == Vec{1, 1, 1}) return 0;
    return 1;
}

// the pattern as a function on (Z/2)^3
inline InvariantFunction fano_fn_f2() {
    Lattice L{Domain::prime_field(2), 3};
    auto reps = enumerate_primitive_classes(L, 2);
    std::vector<Val> vals;
    for (const auto& r : reps) vals.push_back(fano_template(r));
    return InvariantFunction::from_projective(L, ValueSet::residue(2), vals);
}

// the pattern induced on Z^3 from A/2A
inline InvariantFunction fano_fn_z3(std::optional<Window> w = {}) {
    Lattice L{Domain::integers(), 3};
    auto reps = enumerate_primitive_classes(L, 2);
    std::vector<Val> vals;
    for (const auto& r : reps) vals.push_back(fano_template(r));
    return InvariantFunction::depth_k(L, ValueSet::residue(2), 2, 1, vals, w);
}

// the mod-4 refinement on Z^3 (depth 2 at p = 2); template in af_check.hpp
inline InvariantFunction mod4_fn_z3(std::optional<Window> w = {}) {
    Lattice L{Domain::integers(), 3};
    auto reps = enumerate_primitive_classes(L, 4);
    std::vector<Val> vals;
    for (const auto& r : reps) vals.push_back(mod4_template(r));
    return InvariantFunction::depth_k(L, ValueSet::residue(2), 2, 2, vals, w);
}

// delta function: value 1 at one projective point, 0 elsewhere
inline InvariantFunction delta_fn(const Lattice& L, const Vec& point) {
    auto reps = enumerate_primitive_classes(L, L.dom.q);
    Vec rep = fq_proj_rep(point, L.dom.q);
    std::vector<Val> vals;
    for (const auto& r : reps) vals.push_back(r == rep ? 1 : 0);
    return InvariantFunction::from_projective(L, ValueSet::residue(2), vals);
}

} // namespace flagval
