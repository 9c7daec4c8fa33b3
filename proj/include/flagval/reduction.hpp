// reduction.hpp - normalizing a plane c-pair to the point-plus-axis shape and
// searching for a map to Z/2 under which both coordinates and their sum fail
// the AF check.
#pragma once

#include "flagval/projective.hpp"

namespace flagval {

struct NotACPairLine : std::runtime_error {
    explicit NotACPairLine(int line)
        : std::runtime_error("pair is not a c-pair on line " + std::to_string(line)), line(line) {}
    int line;
};

// rank of <f1, f2, 1> restricted to the given points stays <= 2?
inline bool cpair_on_points(const std::vector<RVal>& v1, const std::vector<RVal>& v2) {
    size_t n = v1.size();
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c) {
                RVal det = v1[a] * (v2[b] - v2[c]) - v1[b] * (v2[a] - v2[c]) +
                           v1[c] * (v2[a] - v2[b]);
                if (!det.is_zero()) return false;
            }
    return true;
}

struct ReductionOutcome {
    enum class Kind { Reduced, NoReduction } kind = Kind::NoReduction;
    // Reduced: f1' = c1[0] f1 + c1[1] f2 + c1[2], likewise f2'; h on the
    // attained values of both (by Val key)
    std::array<RVal, 3> c1{RVal::fp(2, 0), RVal::fp(2, 0), RVal::fp(2, 0)};
    std::array<RVal, 3> c2{RVal::fp(2, 0), RVal::fp(2, 0), RVal::fp(2, 0)};
    std::map<Val, Val> h;
    // NoReduction: an AF element discovered in the span, when one exists
    std::optional<std::pair<Int, Int>> af_element;
    std::string note;
};

struct ReductionOptions {
    bool enforce_cpair = true;
    bool span_sweep = true; // search the span for an AF element first
    Int span_bound = 2;     // integer coefficient representatives
};

namespace detail {

// the affine combination c[0] f1 + c[1] f2 + c[2] as a per-point value table
inline std::vector<RVal> affine_table(const std::vector<RVal>& v1, const std::vector<RVal>& v2,
                                      const std::array<RVal, 3>& c) {
    std::vector<RVal> out;
    out.reserve(v1.size());
    for (size_t i = 0; i < v1.size(); ++i) out.push_back(c[0] * v1[i] + c[1] * v2[i] + c[2]);
    return out;
}

inline InvariantFunction table_fn(Int q, const std::vector<RVal>& vals, const ValueSet& vs) {
    Lattice L{Domain::prime_field(q), 3};
    std::vector<Val> keys;
    keys.reserve(vals.size());
    for (const auto& v : vals) keys.push_back(v.key());
    return InvariantFunction::from_projective(L, vs, keys);
}

} // namespace detail

inline ReductionOutcome find_three_point_reduction(const InvariantFunction& f1,
                                                   const InvariantFunction& f2,
                                                   ReductionOptions opt = {}) {
    if (!(f1.dom == f2.dom) || !f1.dom.is_field() || f1.dom.rank != 3)
        throw std::invalid_argument("find_three_point_reduction: a pair on a rank-3 space");
    ReductionOutcome out;
    Int q = f1.dom.q();
    ProjectiveSpace space = ProjectiveSpace::make(q, 2);
    std::vector<RVal> v1, v2;
    for (const auto& pt : space.points) {
        v1.push_back(rval_of(f1, f1.eval_any(pt)));
        v2.push_back(rval_of(f2, f2.eval_any(pt)));
    }

    if (opt.enforce_cpair) {
        for (size_t li = 0; li < space.lines.size(); ++li) {
            std::vector<RVal> l1, l2;
            for (int pi : space.lines[li]) {
                l1.push_back(v1[pi]);
                l2.push_back(v2[pi]);
            }
            if (!cpair_on_points(l1, l2)) throw NotACPairLine(static_cast<int>(li));
        }
    }

    RVal zero = v1[0].zero(), one = v1[0].one();
    auto scalar = [&](Int n) {
        RVal r = zero;
        RVal o = one;
        Int m = n < 0 ? -n : n;
        for (Int i = 0; i < m; ++i) r = r + o;
        return n < 0 ? -r : r;
    };

    // span sweep: a nonzero AF element ends the search
    if (opt.span_sweep) {
        for (auto [a, b] : coefficient_candidates(opt.span_bound)) {
            auto tab = detail::affine_table(v1, v2, {scalar(a), scalar(b), zero});
            bool zero_fn = std::all_of(tab.begin(), tab.end(),
                                       [](const RVal& v) { return v.is_zero(); });
            if (zero_fn) continue;
            auto g = detail::table_fn(q, tab, f1.vs);
            if (check_af(g).kind == AFVerdict::Kind::Certified) {
                out.af_element = {a, b};
                out.note = "the span contains an AF element";
                return out;
            }
        }
    }

    // normalize the image to the point-plus-axis shape
    auto pm = PhiMap{};
    pm.space = space;
    for (size_t i = 0; i < v1.size(); ++i) {
        auto v = std::pair(v1[i], v2[i]);
        pm.fibers[v].push_back(static_cast<int>(i));
        pm.image.push_back(v);
    }
    ImageShape shape = image_shape(pm);
    if (shape.kind == ImageShape::Kind::Violation) {
        out.note = "phi image admits no point-plus-line cover";
        return out;
    }
    const auto& d = shape.point;
    const auto& L = shape.line;
    RVal at_d = L.a * d.first + L.b * d.second - L.c;
    if (at_d.is_zero()) {
        out.note = "image lies in a single affine line";
        return out;
    }
    if (!at_d.invertible()) {
        out.note = "normalization needs division by a non-unit";
        return out;
    }
    // f~2 = s (a f1 + b f2 - c): 0 on the line fibers, 1 on the point fiber
    RVal s = at_d.inv();
    std::array<RVal, 3> c2{s * L.a, s * L.b, -(s * L.c)};
    // f~1 = a' f1 + b' f2 + c': vanishes at d, nonconstant on the line
    std::array<RVal, 3> c1{zero, zero, zero};
    bool found_axis = false;
    for (auto [a, b] : {std::pair<Int, Int>{1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
        RVal ra = scalar(a), rb = scalar(b);
        // not proportional to the line normal
        RVal det = ra * L.b - rb * L.a;
        if (!det.invertible()) continue;
        c1 = {ra, rb, -(ra * d.first + rb * d.second)};
        found_axis = true;
        break;
    }
    if (!found_axis) {
        out.note = "no invertible axis functional";
        return out;
    }

    auto try_h = [&](const std::vector<RVal>& t1, const std::vector<RVal>& t2,
                     const std::array<RVal, 3>& cc1,
                     const std::array<RVal, 3>& cc2) -> bool {
        // attained values; h must fix h(0) = 0 and h(1) = 1 so that the
        // two-valued second coordinate survives
        std::set<Val> dom;
        for (const auto& v : t1) dom.insert(v.key());
        for (const auto& v : t2) dom.insert(v.key());
        std::vector<Val> free;
        for (Val v : dom)
            if (v != zero.key() && v != one.key()) free.push_back(v);
        if (free.size() > 16) return false;
        auto g2tab = [&] {
            std::vector<Val> keys;
            for (const auto& v : t2) keys.push_back(v == zero ? 0 : 1);
            return keys;
        }();
        Lattice L3{Domain::prime_field(q), 3};
        auto g2 = InvariantFunction::from_projective(L3, ValueSet::residue(2), g2tab);
        if (check_af(g2).kind == AFVerdict::Kind::Certified) return false;
        for (Int mask = 0; mask < (Int{1} << free.size()); ++mask) {
            std::map<Val, Val> h{{zero.key(), 0}, {one.key(), 1}};
            for (size_t i = 0; i < free.size(); ++i) h[free[i]] = (mask >> i) & 1;
            std::vector<Val> g1tab, g3tab;
            for (size_t i = 0; i < t1.size(); ++i) {
                Val a = h.at(t1[i].key());
                Val b = h.at(t2[i].key());
                g1tab.push_back(a);
                g3tab.push_back((a + b) % 2);
            }
            auto g1 = InvariantFunction::from_projective(L3, ValueSet::residue(2), g1tab);
            auto g3 = InvariantFunction::from_projective(L3, ValueSet::residue(2), g3tab);
            if (check_af(g1).kind == AFVerdict::Kind::Certified) continue;
            if (check_af(g3).kind == AFVerdict::Kind::Certified) continue;
            out.kind = ReductionOutcome::Kind::Reduced;
            out.c1 = cc1;
            out.c2 = cc2;
            out.h = h;
            return true;
        }
        return false;
    };

    auto t1 = detail::affine_table(v1, v2, c1);
    auto t2 = detail::affine_table(v1, v2, c2);
    if (try_h(t1, t2, c1, c2)) return out;

    // second coordinate change: walk the pencil of lines through the point,
    // f1'' = mu f~1 + f~2 - 1, f2'' = -f~2
    for (Int m = 1; m < 8; ++m) {
        RVal mu = scalar(m);
        std::array<RVal, 3> cc1{mu * c1[0] + c2[0], mu * c1[1] + c2[1], mu * c1[2] + c2[2] - one};
        std::array<RVal, 3> cc2{-c2[0], -c2[1], -c2[2]};
        auto u1 = detail::affine_table(v1, v2, cc1);
        auto u2 = detail::affine_table(v1, v2, cc2);
        // the second coordinate here is {0,-1}-valued; flip its sign into {0,1}
        for (auto& v : u2) v = -v;
        std::array<RVal, 3> cc2f{c2[0], c2[1], c2[2]};
        if (try_h(u1, u2, cc1, cc2f)) return out;
        if (q <= 3 && m >= q) break;
    }
    out.note = "no reduction found within the search bounds";
    return out;
}

} // namespace flagval
