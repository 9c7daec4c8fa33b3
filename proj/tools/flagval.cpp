// flagval - batch front-end: AF checks with certificates, rank-2
// classification, c-pair analysis, AF-element search, valuation
// reconstruction, and the exhaustive verification suites.

#include "flagval/reconstruct.hpp"
#include "flagval/reduction.hpp"
#include "flagval/serialize.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

using namespace flagval;

namespace {

constexpr const char* kVersion = "flagval 0.1.0";

// exit codes
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kBudget = 3;
constexpr int kNegative = 10;    // refuted / fail / not found / not AF
constexpr int kExceptional = 11;

struct Output {
    std::string out_path;
    void emit(Json& report, const std::string& summary) const {
        if (out_path.empty()) std::cout << report.dump(2) << "\n";
        else {
            std::ofstream of(out_path);
            of << report.dump(2) << "\n";
        }
        std::cerr << summary << "\n";
    }
};

Json base_report(const std::string& command, const std::vector<std::string>& inputs,
                 const Json& options) {
    Json j;
    j["command"] = command;
    j["toolVersion"] = kVersion;
    j["options"] = options;
    Json digests = Json::array();
    for (const auto& path : inputs)
        digests.push_back(Json{{"file", path}, {"fnv1a64", fnv1a_hex(read_file(path))}});
    j["inputs"] = digests;
    return j;
}

long long ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0).count();
}

int run_check_af(const std::string& file, Int window_box, int window_depth, const Output& out) {
    auto t0 = std::chrono::steady_clock::now();
    Json options{{"window", window_box}, {"depth", window_depth}};
    Json rep = base_report("check-af", {file}, options);
    InvariantFunction f = function_from_json(Json::parse(read_file(file)));
    if (window_box > 0) f.win.box = window_box;
    if (window_depth > 0) f.win.depth = window_depth;
    AFVerdict v = check_af(f);
    rep["verdict"] = verdict_to_json(v);
    rep["wallTimeMs"] = ms_since(t0);
    std::string kind = rep["verdict"]["kind"].get<std::string>();
    out.emit(rep, "check-af: " + kind + " (window box " + std::to_string(f.win.box) + ")");
    if (v.kind == AFVerdict::Kind::Certified) return kOk;
    if (v.kind == AFVerdict::Kind::Refuted) return kNegative;
    return kExceptional;
}

int run_classify(const std::string& file, const Output& out) {
    auto t0 = std::chrono::steady_clock::now();
    Json rep = base_report("classify", {file}, Json::object());
    InvariantFunction f = function_from_json(Json::parse(read_file(file)));
    auto r = classify_rank2(f);
    Json j;
    if (r.kind == Rank2Result::Kind::Classified) {
        switch (r.cls.kind) {
        case Rank2Class::Kind::Constant:
            j = Json{{"kind", "constant"}, {"value", r.cls.generic_value}};
            break;
        case Rank2Class::Kind::OffSubgroup:
            j = Json{{"kind", "offSubgroup"},
                     {"direction", r.cls.direction},
                     {"genericValue", r.cls.generic_value},
                     {"innerValue", r.cls.inner_value},
                     {"pA", 0}};
            break;
        case Rank2Class::Kind::Typical:
            j = Json{{"kind", "typical"},
                     {"p", r.cls.prime},
                     {"conductor", r.cls.conductor},
                     {"phase", r.cls.phase},
                     {"genericValue", r.cls.generic_value},
                     {"innerValue", r.cls.inner_value}};
            break;
        }
        j["filtration"] = filtration_to_json(r.filtration);
    } else {
        j = Json{{"kind", "notAF"}, {"witness", witness_to_json(r.witness)}};
    }
    rep["classification"] = j;
    rep["wallTimeMs"] = ms_since(t0);
    out.emit(rep, "classify: " + j["kind"].get<std::string>());
    return r.kind == Rank2Result::Kind::Classified ? kOk : kNegative;
}

int run_verify(const std::string& prop, Int q, long long budget, int jobs, const Output& out) {
    auto t0 = std::chrono::steady_clock::now();
    Json options{{"q", q}, {"budget", budget}, {"jobs", resolve_jobs(jobs)}};
    Json rep = base_report("verify", {}, options);
    if (budget > 0) {
        // instance-count budget for the exhaustive suites
        long long expected = prop == "red2-p"    ? (1LL << 13)
                             : prop == "2-coeff" ? 1594323LL
                             : prop == "z2-p"    ? (1LL << (q + 1))
                                                 : 0;
        if (expected > budget)
            throw BudgetExceeded(prop + " needs " + std::to_string(expected) + " instances");
    }
    VerifyReport r = verify_proposition(prop, q, jobs);
    rep["report"] = report_to_json(r);
    rep["wallTimeMs"] = ms_since(t0);
    out.emit(rep, "verify " + prop + ": " + std::to_string(r.violations.size()) +
                      " counterexample(s) over " + std::to_string(r.instances) + " instance(s)");
    return r.violations.empty() ? kOk : kNegative;
}

int run_cpair(const std::string& file1, const std::string& file2, int degree, const Output& out) {
    auto t0 = std::chrono::steady_clock::now();
    Json rep = base_report("cpair", {file1, file2}, Json{{"degree", degree}});
    LogFunction f1 = logfunction_from_json(Json::parse(read_file(file1)));
    LogFunction f2 = logfunction_from_json(Json::parse(read_file(file2)));
    auto r = is_c_pair_field(f1, f2, degree);
    Json j{{"pass", r.pass}, {"modulesChecked", r.modules_checked}, {"precision", r.precision}};
    if (!r.pass) {
        j["module"] = Json::array({r.fail->k1.str(), r.fail->k2.str()});
        Json w = Json::array();
        for (const auto& e : r.fail->witness) w.push_back(e.str());
        j["witness"] = w;
    }
    rep["cpair"] = j;
    rep["wallTimeMs"] = ms_since(t0);
    out.emit(rep, std::string("cpair: ") + (r.pass ? "pass" : "fail"));
    return r.pass ? kOk : kNegative;
}

int run_find_af(const std::string& file1, const std::string& file2, int degree, Int bound,
                const Output& out) {
    auto t0 = std::chrono::steady_clock::now();
    Json rep = base_report("find-af", {file1, file2}, Json{{"degree", degree}, {"bound", bound}});
    LogFunction f1 = logfunction_from_json(Json::parse(read_file(file1)));
    LogFunction f2 = logfunction_from_json(Json::parse(read_file(file2)));
    auto r = find_af_in_span(f1, f2, bound, degree);
    Json j{{"found", r.found}};
    if (r.found) {
        j["lambda"] = Json::array({r.l1, r.l2});
        j["subspacesCertified"] = r.subspaces_certified;
    } else {
        Json searched = Json::array();
        for (const auto& c : r.searched) {
            Json e{{"lambda", Json::array({c.l1, c.l2})}, {"af", c.af}};
            if (!c.af) {
                Json basis = Json::array();
                for (const auto& b : c.refuting_basis) basis.push_back(b.str());
                e["refutingSubspace"] = basis;
            }
            searched.push_back(e);
        }
        j["searched"] = searched;
    }
    rep["findAf"] = j;
    rep["wallTimeMs"] = ms_since(t0);
    out.emit(rep, r.found ? "find-af: AF element at lambda = (" + std::to_string(r.l1) + ", " +
                                std::to_string(r.l2) + ")"
                          : "find-af: none found within the bound");
    return r.found ? kOk : kNegative;
}

int run_reconstruct(const std::string& file, int degree, const Output& out) {
    auto t0 = std::chrono::steady_clock::now();
    Json rep = base_report("reconstruct", {file}, Json{{"degree", degree}});
    LogFunction f = logfunction_from_json(Json::parse(read_file(file)));
    try {
        auto r = reconstruct_valuation(f, degree);
        std::string scale;
        if (f.model.kind == FieldModel::Kind::Univariate) scale = "Z";
        else scale = f.mval.kind == MonomialVal::Kind::Weighted ? "Z" : "Z2-lex";
        Json j{{"scale", scale},
               {"scaleOrder", r.scale_order},
               {"zeroRank", r.zero_rank},
               {"sampledPairs", r.sampled_pairs},
               {"precision", r.prec},
               {"caveat", r.caveat}};
        if (f.model.kind == FieldModel::Kind::Univariate && f.weights.size() == 1)
            j["place"] = f.weights[0].first.str();
        rep["reconstruction"] = j;
        rep["wallTimeMs"] = ms_since(t0);
        out.emit(rep, "reconstruct: scale " + scale + ", " + std::to_string(r.scale_order.size()) +
                          " scale values");
        return kOk;
    } catch (const NotAFLog& e) {
        rep["notAF"] = Json{{"x", e.x.str()}, {"y", e.y.str()}, {"what", e.what()}};
        rep["wallTimeMs"] = ms_since(t0);
        out.emit(rep, std::string("reconstruct: not an AF function (") + e.what() + ")");
        return kNegative;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) + " - abelian flag functions, c-pairs and valuations"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--out", out.out_path, "write the JSON report to a file instead of stdout");

    std::string file, file2, prop;
    Int window_box = 0, bound = 3, q = 3;
    int window_depth = 0, degree = 2, jobs = 0;
    long long budget = 0;

    auto* c_check = app.add_subcommand("check-af", "decide the AF property with a certificate");
    c_check->add_option("file", file, "function description (JSON)")->required();
    c_check->add_option("--window", window_box, "override the window box");
    c_check->add_option("--depth", window_depth, "override the declared depth");

    auto* c_classify = app.add_subcommand("classify", "canonical form of a rank-2 function");
    c_classify->add_option("file", file, "function description (JSON)")->required();

    auto* c_verify = app.add_subcommand("verify", "run a verification suite");
    c_verify->add_option("prop", prop, "z2-p | red2-p | 2-coeff | fano | agf | restr3-sample")
        ->required();
    c_verify->add_option("--q", q, "field size parameter");
    c_verify->add_option("--budget", budget, "instance budget (0 = default)");
    c_verify->add_option("--jobs", jobs, "worker threads (FLAGVAL_JOBS overrides)");

    auto* c_cpair = app.add_subcommand("cpair", "check the c-pair condition over the pool");
    c_cpair->add_option("f1", file, "log function (JSON)")->required();
    c_cpair->add_option("f2", file2, "log function (JSON)")->required();
    c_cpair->add_option("--degree", degree, "pool degree bound");

    auto* c_find = app.add_subcommand("find-af", "search the span for an AF element");
    c_find->add_option("f1", file, "log function (JSON)")->required();
    c_find->add_option("f2", file2, "log function (JSON)")->required();
    c_find->add_option("--degree", degree, "pool degree bound");
    c_find->add_option("--bound", bound, "coefficient bound");

    auto* c_recon = app.add_subcommand("reconstruct", "recover the valuation of a log function");
    c_recon->add_option("f", file, "log function (JSON)")->required();
    c_recon->add_option("--degree", degree, "pool degree bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_check->parsed()) return run_check_af(file, window_box, window_depth, out);
        if (c_classify->parsed()) return run_classify(file, out);
        if (c_verify->parsed()) return run_verify(prop, q, budget, jobs, out);
        if (c_cpair->parsed()) return run_cpair(file, file2, degree, out);
        if (c_find->parsed()) return run_find_af(file, file2, degree, bound, out);
        if (c_recon->parsed()) return run_reconstruct(file, degree, out);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBudget;
    } catch (const Json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
