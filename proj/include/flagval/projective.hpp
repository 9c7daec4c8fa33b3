// projective.hpp - finite projective spaces, the phi-map geometry of
// function pairs, point-plus-line image covers, and the three-point analysis
// on the plane.
#pragma once

#include "flagval/af_check.hpp"
#include "flagval/padic.hpp"

namespace flagval {

struct RingUnsupported : std::runtime_error {
    explicit RingUnsupported(const std::string& w) : std::runtime_error("unsupported ring: " + w) {}
};

// ---------------------------------------------------------------------------
// ring values: Z/p, exact rationals, or fixed-precision p-adic integers

class RVal {
  public:
    enum class Kind { Fp, Rat, Padic };

    static RVal fp(Int p, Int v) {
        if (!is_prime(p)) throw RingUnsupported("Z/m with m composite");
        RVal r;
        r.kind_ = Kind::Fp;
        r.p_ = p;
        r.num_ = imod(v, p);
        return r;
    }
    static RVal rat(Int n, Int d = 1) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        Int g = igcd(n, d);
        if (g > 1) { n /= g; d /= g; }
        RVal r;
        r.kind_ = Kind::Rat;
        r.num_ = n;
        r.den_ = d;
        return r;
    }
    static RVal padic(const PadicInt& x) {
        RVal r;
        r.kind_ = Kind::Padic;
        r.p_ = x.prime();
        r.prec_ = x.precision();
        r.num_ = x.residue();
        return r;
    }

    Kind kind() const { return kind_; }
    Int num() const { return num_; }
    Int den() const { return den_; }
    Int modulus() const {
        return kind_ == Kind::Fp ? p_ : kind_ == Kind::Padic ? ipow(p_, prec_) : 0;
    }

    RVal operator+(const RVal& o) const {
        check(o);
        switch (kind_) {
        case Kind::Fp: return fp(p_, num_ + o.num_);
        case Kind::Rat: return rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
        default: return with(imod(num_ + o.num_, modulus()));
        }
    }
    RVal operator-(const RVal& o) const { return *this + (-o); }
    RVal operator-() const {
        switch (kind_) {
        case Kind::Fp: return fp(p_, -num_);
        case Kind::Rat: return rat(-num_, den_);
        default: return with(imod(-num_, modulus()));
        }
    }
    RVal operator*(const RVal& o) const {
        check(o);
        switch (kind_) {
        case Kind::Fp: return fp(p_, num_ * o.num_);
        case Kind::Rat: return rat(num_ * o.num_, den_ * o.den_);
        default: return with(imod(num_ * o.num_, modulus()));
        }
    }
    bool invertible() const {
        switch (kind_) {
        case Kind::Fp: return num_ != 0;
        case Kind::Rat: return num_ != 0;
        default: return num_ % p_ != 0;
        }
    }
    RVal inv() const {
        if (!invertible()) throw std::domain_error("RVal::inv: not a unit");
        switch (kind_) {
        case Kind::Fp: return fp(p_, mod_inv(num_, p_));
        case Kind::Rat: return rat(den_, num_);
        default: return with(mod_inv(num_, modulus()));
        }
    }
    bool is_zero() const { return num_ == 0; }
    bool operator==(const RVal& o) const {
        return kind_ == o.kind_ && p_ == o.p_ && prec_ == o.prec_ && num_ == o.num_ &&
               den_ == o.den_;
    }
    bool operator!=(const RVal& o) const { return !(*this == o); }
    bool operator<(const RVal& o) const {
        auto key = [](const RVal& r) {
            return std::tuple(static_cast<int>(r.kind_), r.p_, r.prec_, r.num_, r.den_);
        };
        return key(*this) < key(o);
    }

    RVal zero() const {
        switch (kind_) {
        case Kind::Fp: return fp(p_, 0);
        case Kind::Rat: return rat(0);
        default: return with(0);
        }
    }
    RVal one() const {
        switch (kind_) {
        case Kind::Fp: return fp(p_, 1);
        case Kind::Rat: return rat(1);
        default: return with(1);
        }
    }

    std::string str() const {
        switch (kind_) {
        case Kind::Fp: return std::to_string(num_);
        case Kind::Rat:
            return den_ == 1 ? std::to_string(num_)
                             : std::to_string(num_) + "/" + std::to_string(den_);
        default: return std::to_string(num_);
        }
    }

    // the encoded Val key used by the AF engine (equality-compatible)
    Val key() const { return kind_ == Kind::Rat ? (num_ * 1000003 + den_) : num_; }

  private:
    void check(const RVal& o) const {
        if (kind_ != o.kind_ || p_ != o.p_ || prec_ != o.prec_)
            throw std::invalid_argument("RVal: mixed rings");
    }
    RVal with(Int v) const {
        RVal r = *this;
        r.num_ = v;
        return r;
    }
    Kind kind_ = Kind::Fp;
    Int p_ = 2;
    int prec_ = 0;
    Int num_ = 0;
    Int den_ = 1;
};

// value of an invariant function as a ring element, per its declared value set
inline RVal rval_of(const InvariantFunction& f, Val v) {
    switch (f.vs.kind) {
    case ValueSet::Kind::Residue: return RVal::fp(f.vs.m, v);
    case ValueSet::Kind::Padic: return RVal::padic(PadicInt(f.vs.p, f.vs.prec, v));
    default: throw RingUnsupported("label values carry no ring structure");
    }
}

// ---------------------------------------------------------------------------
// projective spaces

struct ProjectiveSpace {
    Int q = 3;
    int dim = 2; // projective dimension
    std::vector<Vec> points;
    std::vector<std::vector<int>> lines;       // point indices per line, sorted
    std::vector<std::vector<int>> point_lines; // dual incidence

    static ProjectiveSpace make(Int q, int dim) {
        ProjectiveSpace s;
        s.q = q;
        s.dim = dim;
        Lattice L{Domain::prime_field(q), dim + 1};
        s.points = enumerate_primitive_classes(L, q);
        Int expect = (ipow(q, dim + 1) - 1) / (q - 1);
        if (static_cast<Int>(s.points.size()) != expect)
            throw std::logic_error("projective space: wrong point count");
        if (dim == 2) {
            // lines are dual points: a.x = 0
            std::map<Vec, int> index;
            for (size_t i = 0; i < s.points.size(); ++i) index[s.points[i]] = static_cast<int>(i);
            s.point_lines.assign(s.points.size(), {});
            for (const auto& d : s.points) {
                std::vector<int> line;
                for (size_t i = 0; i < s.points.size(); ++i) {
                    Int dot = 0;
                    for (int j = 0; j < 3; ++j) dot += d[j] * s.points[i][j];
                    if (imod(dot, q) == 0) line.push_back(static_cast<int>(i));
                }
                if (static_cast<Int>(line.size()) != q + 1)
                    throw std::logic_error("projective plane: wrong line size");
                for (int pi : line) s.point_lines[pi].push_back(static_cast<int>(s.lines.size()));
                s.lines.push_back(line);
            }
        }
        return s;
    }

    int index_of(const Vec& pt) const {
        Vec r = fq_proj_rep(pt, q);
        auto it = std::lower_bound(points.begin(), points.end(), r);
        return static_cast<int>(it - points.begin());
    }

    // the unique line through two distinct points (dim 2)
    int line_through(int i, int j) const {
        for (int li : point_lines[i])
            if (std::binary_search(lines[li].begin(), lines[li].end(), j)) return li;
        throw std::logic_error("no line through points");
    }
};

// ---------------------------------------------------------------------------
// the phi-map v -> (f1(v), f2(v))

struct PhiMap {
    ProjectiveSpace space;
    std::vector<std::pair<RVal, RVal>> image; // per point
    std::map<std::pair<RVal, RVal>, std::vector<int>> fibers;
};

inline PhiMap phi_image(const InvariantFunction& f1, const InvariantFunction& f2) {
    if (!(f1.dom == f2.dom) || !f1.dom.is_field())
        throw std::invalid_argument("phi_image: two functions on one finite projective space");
    PhiMap pm;
    pm.space = ProjectiveSpace::make(f1.dom.q(), f1.dom.rank - 1);
    for (const auto& pt : pm.space.points) {
        auto v = std::pair(rval_of(f1, f1.eval_any(pt)), rval_of(f2, f2.eval_any(pt)));
        pm.fibers[v].push_back(static_cast<int>(pm.image.size()));
        pm.image.push_back(v);
    }
    return pm;
}

// ---------------------------------------------------------------------------
// image shape: one point plus one affine line

struct AffLine {
    RVal a, b, c; // a x + b y = c
    bool contains(const std::pair<RVal, RVal>& pt) const {
        return a * pt.first + b * pt.second == c;
    }
};

struct ImageShape {
    enum class Kind { PointAndLine, Violation } kind = Kind::PointAndLine;
    std::pair<RVal, RVal> point;
    AffLine line;
    std::vector<std::pair<RVal, RVal>> violation; // four points with no cover
};

inline AffLine line_through_pair(const std::pair<RVal, RVal>& p1,
                                 const std::pair<RVal, RVal>& p2) {
    RVal a = p2.second - p1.second;
    RVal b = p1.first - p2.first;
    return {a, b, a * p1.first + b * p1.second};
}

inline ImageShape image_shape(const PhiMap& pm) {
    ImageShape out;
    std::vector<std::pair<RVal, RVal>> pts;
    for (const auto& [v, fib] : pm.fibers) pts.push_back(v);

    if (pts.empty()) throw std::invalid_argument("image_shape: empty image");
    if (pts.size() == 1) {
        out.point = pts[0];
        RVal z = pts[0].first.zero(), o = pts[0].first.one();
        out.line = {o, z, pts[0].first}; // the vertical line through the point
        return out;
    }
    if (pts.size() == 2) {
        out.point = pts[0];
        out.line = line_through_pair(pts[0], pts[1]);
        return out;
    }
    // candidate lines through pairs of image points, deterministic order
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            AffLine L = line_through_pair(pts[i], pts[j]);
            std::vector<size_t> off;
            for (size_t k = 0; k < pts.size(); ++k)
                if (!L.contains(pts[k])) off.push_back(k);
            if (off.size() <= 1) {
                out.point = off.empty() ? pts[0] : pts[off[0]];
                out.line = L;
                return out;
            }
        }
    // no cover: find four points with no three collinear
    size_t n = pts.size();
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c)
                for (size_t d = c + 1; d < n; ++d) {
                    std::array<size_t, 4> pick{a, b, c, d};
                    bool collinear3 = false;
                    for (int skip = 0; skip < 4 && !collinear3; ++skip) {
                        std::vector<size_t> tri;
                        for (int t = 0; t < 4; ++t)
                            if (t != skip) tri.push_back(pick[t]);
                        AffLine L = line_through_pair(pts[tri[0]], pts[tri[1]]);
                        if (L.contains(pts[tri[2]])) collinear3 = true;
                    }
                    if (!collinear3) {
                        out.kind = ImageShape::Kind::Violation;
                        out.violation = {pts[a], pts[b], pts[c], pts[d]};
                        return out;
                    }
                }
    throw std::logic_error("image_shape: cover search failed without a four-point certificate");
}

// ---------------------------------------------------------------------------
// three-point analysis on the plane

struct HypothesisFailure : std::runtime_error {
    explicit HypothesisFailure(int line)
        : std::runtime_error("line " + std::to_string(line) + " meets all three image points"),
          line(line) {}
    int line;
};

// labels: 0 = (0,0), 1 = (1,0), 2 = (0,1) for (f1, f2) values mod 2
struct ThreePointInstance {
    ProjectiveSpace space;
    std::vector<int> label; // per point
};

inline ThreePointInstance three_point_instance(const InvariantFunction& f1,
                                               const InvariantFunction& f2) {
    ThreePointInstance inst;
    inst.space = ProjectiveSpace::make(f1.dom.q(), 2);
    for (const auto& pt : inst.space.points) {
        Int a = imod(f1.eval_any(pt), 2), b = imod(f2.eval_any(pt), 2);
        if (a == 1 && b == 1)
            throw std::invalid_argument("three_point_instance: image outside the three points");
        inst.label.push_back(a == 0 && b == 0 ? 0 : a == 1 ? 1 : 2);
    }
    return inst;
}

// is a Z/2 assignment AF on a projective line (q+1 point values)?
inline bool af_on_line(const std::vector<Val>& vals) {
    std::map<Val, int> count;
    for (Val v : vals) ++count[v];
    if (count.size() == 1) return true;
    if (count.size() == 2)
        for (const auto& [v, c] : count)
            if (c == 1) return true;
    return false;
}

// which of f1, f2, f3 = f1 + f2 restrict to AF functions on every line
inline std::set<int> three_point_analysis(const ThreePointInstance& inst) {
    // f_j value of a label: f1: labels {0,2} -> 0, {1} -> 1; f2: {0,1} -> 0,
    // {2} -> 1; f3 = f1+f2: {0} -> 0, {1,2} -> 1
    auto fval = [](int j, int label) -> Val {
        if (j == 1) return label == 1 ? 1 : 0;
        if (j == 2) return label == 2 ? 1 : 0;
        return label == 0 ? 0 : 1;
    };
    // hypothesis: every line meets at most two of the three points
    for (size_t li = 0; li < inst.space.lines.size(); ++li) {
        std::set<int> seen;
        for (int pi : inst.space.lines[li]) seen.insert(inst.label[pi]);
        if (seen.size() == 3) throw HypothesisFailure(static_cast<int>(li));
    }
    std::set<int> which;
    for (int j = 1; j <= 3; ++j) {
        bool all = true;
        for (const auto& line : inst.space.lines) {
            std::vector<Val> vals;
            for (int pi : line) vals.push_back(fval(j, inst.label[pi]));
            if (!af_on_line(vals)) { all = false; break; }
        }
        if (all) which.insert(j);
    }
    return which;
}

} // namespace flagval
