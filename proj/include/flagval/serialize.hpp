// serialize.hpp - JSON schemas for function descriptions, log functions,
// certificates and reports. Polynomials travel as canonical coefficient
// strings in a fixed variable order; p-adic values as little-endian digit
// strings at the declared precision.
#pragma once

#include "flagval/af_types.hpp"
#include "flagval/logfield.hpp"
#include "flagval/rank2.hpp"
#include "flagval/verify.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace flagval {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& w) : std::runtime_error(w) {}
};

// ---------------------------------------------------------------------------
// polynomial strings: digits, the variable, '^', '*', '+', '-'

inline Poly parse_poly(Int q, const std::string& s, char var = 't') {
    Poly out = Poly::zero(q);
    size_t i = 0;
    auto skip = [&] { while (i < s.size() && s[i] == ' ') ++i; };
    int sign = 1;
    skip();
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
    }
    while (i < s.size()) {
        skip();
        Int coeff = -1;
        int exp = -1;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            coeff = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                coeff = coeff * 10 + (s[i++] - '0');
            skip();
            if (i < s.size() && s[i] == '*') { ++i; skip(); }
        }
        if (i < s.size() && s[i] == var) {
            ++i;
            exp = 1;
            skip();
            if (i < s.size() && s[i] == '^') {
                ++i;
                skip();
                if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                    throw ParseError("polynomial: exponent expected at position " +
                                     std::to_string(i));
                exp = 0;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    exp = exp * 10 + (s[i++] - '0');
            }
        }
        if (coeff < 0 && exp < 0)
            throw ParseError("polynomial: unexpected character at position " + std::to_string(i) +
                             " in \"" + s + "\"");
        if (coeff < 0) coeff = 1;
        if (exp < 0) exp = 0;
        std::vector<Int> cs(exp + 1, 0);
        cs[exp] = sign * coeff;
        out = out + Poly::from_coeffs(q, cs);
        skip();
        if (i >= s.size()) break;
        if (s[i] == '+') sign = 1;
        else if (s[i] == '-') sign = -1;
        else throw ParseError("polynomial: expected '+' or '-' at position " + std::to_string(i));
        ++i;
    }
    return out;
}

// ---------------------------------------------------------------------------
// values

inline Json value_to_json(const ValueSet& vs, Val v) {
    if (vs.kind == ValueSet::Kind::Padic)
        return PadicInt(vs.p, vs.prec, v).digits();
    return v;
}

inline Val value_from_json(const ValueSet& vs, const Json& j) {
    if (j.is_string()) {
        if (vs.kind != ValueSet::Kind::Padic)
            throw ParseError("digit-string value without a p-adic value set");
        return PadicInt::from_digits(vs.p, j.get<std::string>()).residue();
    }
    return j.get<Val>();
}

inline Json valueset_to_json(const ValueSet& vs) {
    switch (vs.kind) {
    case ValueSet::Kind::Labels: return Json{{"kind", "labels"}};
    case ValueSet::Kind::Residue: return Json{{"kind", "residue"}, {"m", vs.m}};
    default: return Json{{"kind", "padic"}, {"p", vs.p}, {"precision", vs.prec}};
    }
}

inline ValueSet valueset_from_json(const Json& j) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "labels") return ValueSet::labels();
    if (k == "residue") return ValueSet::residue(j.at("m").get<Int>());
    if (k == "padic") return ValueSet::padic(j.at("p").get<Int>(), j.at("precision").get<int>());
    throw ParseError("unknown value set kind: " + k);
}

// ---------------------------------------------------------------------------
// invariant function files

inline Json function_to_json(const InvariantFunction& f) {
    Json j;
    j["domain"] = Json{{"kind", f.dom.is_field() ? "Fq" : "Z"}, {"rank", f.dom.rank}};
    if (f.dom.is_field()) j["domain"]["q"] = f.dom.q();
    Json entries = Json::array();
    if (f.rep == InvariantFunction::Rep::FullTable) {
        auto reps = enumerate_primitive_classes(f.dom, f.dom.q());
        for (const auto& r : reps)
            entries.push_back(Json::array({r, value_to_json(f.vs, f.eval_any(r))}));
        j["values"] = Json{{"kind", "table"}, {"entries", entries}};
    } else if (f.rep == InvariantFunction::Rep::DepthK) {
        for (size_t i = 0; i < f.class_reps.size(); ++i)
            entries.push_back(Json::array({f.class_reps[i], value_to_json(f.vs, f.table[i])}));
        j["values"] = Json{{"kind", "depthk"}, {"p", f.p}, {"k", f.k}, {"entries", entries}};
    } else {
        throw std::invalid_argument("window oracles must be snapshotted before serialization");
    }
    j["valueSet"] = valueset_to_json(f.vs);
    j["window"] = Json{{"box", f.win.box}, {"depth", f.win.depth}};
    return j;
}

inline InvariantFunction function_from_json(const Json& j) {
    const auto& dom = j.at("domain");
    std::string kind = dom.at("kind").get<std::string>();
    int rank = dom.at("rank").get<int>();
    ValueSet vs = j.contains("valueSet") ? valueset_from_json(j.at("valueSet"))
                                         : ValueSet::labels();
    const auto& vals = j.at("values");
    std::string vkind = vals.at("kind").get<std::string>();
    std::optional<Window> win;
    if (j.contains("window"))
        win = Window{j["window"].at("box").get<Int>(), j["window"].at("depth").get<int>()};

    if (kind == "Fq") {
        Lattice L{Domain::prime_field(dom.at("q").get<Int>()), rank};
        if (vkind != "table") throw ParseError("Fq domains use table values");
        std::map<Vec, Val> byrep;
        for (const auto& e : vals.at("entries")) {
            Vec c = e.at(0).get<Vec>();
            byrep[fq_proj_rep(c, L.dom.q)] = value_from_json(vs, e.at(1));
        }
        auto reps = enumerate_primitive_classes(L, L.dom.q);
        std::vector<Val> table;
        for (const auto& r : reps) {
            auto it = byrep.find(r);
            if (it == byrep.end()) throw ParseError("missing table entry for class " + vec_str(r));
            table.push_back(it->second);
        }
        auto f = InvariantFunction::from_projective(L, vs, table);
        if (win) f.win = *win;
        return f;
    }
    if (kind != "Z") throw ParseError("unknown domain kind: " + kind);
    Lattice L{Domain::integers(), rank};
    if (vkind != "depthk") throw ParseError("Z domains use depthk values");
    Int p = vals.at("p").get<Int>();
    int k = vals.at("k").get<int>();
    std::map<Vec, Val> byrep;
    for (const auto& e : vals.at("entries")) {
        Vec c = e.at(0).get<Vec>();
        byrep[k == 0 ? Vec(rank, 0) : zpk_orbit_rep(c, p, k)] = value_from_json(vs, e.at(1));
    }
    auto reps = enumerate_primitive_classes(L, ipow(p, k));
    std::vector<Val> table;
    for (const auto& r : reps) {
        auto it = byrep.find(r);
        if (it == byrep.end()) throw ParseError("missing depthk entry for class " + vec_str(r));
        table.push_back(it->second);
    }
    return InvariantFunction::depth_k(L, vs, p, k, table, win);
}

// ---------------------------------------------------------------------------
// log function files

inline Json logfunction_to_json(const LogFunction& f) {
    Json j;
    j["model"] = Json{{"kind", f.model.kind == FieldModel::Kind::Univariate ? "univariate"
                                                                            : "bivariate"},
                      {"q", f.model.q}};
    if (f.model.kind == FieldModel::Kind::Univariate) {
        Json ws = Json::array();
        for (const auto& [pl, w] : f.weights) ws.push_back(Json::array({pl.str(), w}));
        j["weights"] = ws;
    } else {
        std::string val = f.mval.kind == MonomialVal::Kind::LexYX   ? "lex"
                          : f.mval.kind == MonomialVal::Kind::LexXY ? "revlex"
                                                                    : "weighted";
        Json ch{{"onGenerators", Json::array({f.chi_x, f.chi_y})}, {"valuation", val}};
        if (f.mval.kind == MonomialVal::Kind::Weighted)
            ch["weights"] = Json::array({f.mval.wx, f.mval.wy});
        j["character"] = ch;
    }
    j["p"] = f.p;
    j["precision"] = f.prec;
    return j;
}

inline LogFunction logfunction_from_json(const Json& j) {
    const auto& model = j.at("model");
    Int q = model.at("q").get<Int>();
    Int p = j.at("p").get<Int>();
    int prec = j.at("precision").get<int>();
    std::string kind = model.at("kind").get<std::string>();
    if (kind == "univariate") {
        std::vector<std::pair<Place, Int>> ws;
        for (const auto& e : j.at("weights")) {
            std::string ps = e.at(0).get<std::string>();
            Int w = e.at(1).get<Int>();
            if (ps == "inf") ws.emplace_back(Place::infinity(q), w);
            else ws.emplace_back(Place::finite(parse_poly(q, ps).monic()), w);
        }
        return LogFunction::place_weights(q, p, prec, ws);
    }
    if (kind != "bivariate") throw ParseError("unknown model kind: " + kind);
    const auto& ch = j.at("character");
    std::string vname = ch.at("valuation").get<std::string>();
    MonomialVal mv;
    if (vname == "lex") mv.kind = MonomialVal::Kind::LexYX;
    else if (vname == "revlex") mv.kind = MonomialVal::Kind::LexXY;
    else if (vname == "weighted") {
        mv.kind = MonomialVal::Kind::Weighted;
        mv.wx = ch.at("weights").at(0).get<Int>();
        mv.wy = ch.at("weights").at(1).get<Int>();
    } else throw ParseError("unknown valuation name: " + vname);
    Int cx = ch.at("onGenerators").at(0).get<Int>();
    Int cy = ch.at("onGenerators").at(1).get<Int>();
    return LogFunction::character(q, p, prec, mv, cx, cy);
}

// ---------------------------------------------------------------------------
// certificates, witnesses, verdicts

inline Json filtration_to_json(const Filtration& fil) {
    Json layers = Json::array();
    for (const auto& l : fil.layers) {
        Json jl{{"generators", l.group.gens}};
        if (l.has_value) jl["layerValue"] = l.value;
        layers.push_back(jl);
    }
    return Json{{"layers", layers},
                {"window", Json{{"box", fil.window.box}, {"depth", fil.window.depth}}}};
}

inline Json witness_to_json(const RefutationWitness& w) {
    if (std::holds_alternative<DistinctTriple>(w)) {
        const auto& t = std::get<DistinctTriple>(w);
        return Json{{"kind", "distinctTriple"}, {"a", t.a}, {"b", t.b}};
    }
    if (std::holds_alternative<OrderCycle>(w)) {
        const auto& c = std::get<OrderCycle>(w);
        return Json{{"kind", "orderCycle"}, {"elements", c.elems}};
    }
    const auto& g = std::get<NoGenericValue>(w);
    Json covers = Json::array();
    for (const auto& [v, mat] : g.covers)
        covers.push_back(Json{{"value", v}, {"generators", mat}});
    return Json{{"kind", "noGenericValue"}, {"layer", g.layer.gens}, {"covers", covers}};
}

inline Json verdict_to_json(const AFVerdict& v) {
    Json j;
    switch (v.kind) {
    case AFVerdict::Kind::Certified:
        j["kind"] = "certified";
        j["filtration"] = filtration_to_json(v.filtration);
        break;
    case AFVerdict::Kind::Refuted:
        j["kind"] = "refuted";
        if (v.witness) j["witness"] = witness_to_json(*v.witness);
        break;
    case AFVerdict::Kind::Exceptional:
        j["kind"] = v.exceptional == ExceptionalKind::Fano ? "exceptional:fano"
                                                           : "exceptional:mod4";
        j["basis"] = v.basis;
        if (v.witness) j["witness"] = witness_to_json(*v.witness);
        break;
    }
    j["window"] = Json{{"box", v.window.box}, {"depth", v.window.depth}};
    return j;
}

inline Json report_to_json(const VerifyReport& r) {
    return Json{{"proposition", r.proposition},
                {"q", r.q},
                {"instances", r.instances},
                {"hypothesisSatisfied", r.hypothesis_satisfied},
                {"conclusionHolds", r.conclusion_holds},
                {"violations", r.violations},
                {"jobs", r.jobs},
                {"wallTimeMs", r.wall_ms}};
}

// ---------------------------------------------------------------------------
// small helpers

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace flagval
