/**
 * @file solvcrys.cpp
 * @brief Command-line front end: classify, enumerate, verify, conjugacy.
 *
 * Subcommands:
 *
 *     classify   --s "a b c d" [--q N] [--m M1 M2] [--type T...] [--auto-inflate]
 *                [--bound B] [--batch FILE] [--json]
 *                Full report for one matrix: per compatible holonomy type the
 *                cohomology classes, the enumerated groups with presentations,
 *                torsion reports, topology and the Sol^3 projection.
 *     enumerate  [--trace-max N] [--json]
 *                Weak-conjugacy class representatives with trace <= N.
 *     verify     [--trace-max N] [--q QMAX] [--bound B] [--json]
 *                Concordance grid: closed-form torsion verdicts and H^1 counts
 *                against the brute-force oracle, plus presentation checks.
 *     conjugacy  --s "a b c d" --s2 "a b c d" [--json]
 *                Weak-conjugacy verdict and witness for a pair.
 *
 * Exit codes: 0 ok, 1 verification disagreement, 2 bad input, 3 central
 * inflation required (classify without --auto-inflate).
 */

#include <solv/json.hpp>
#include <solv/oracle.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace solv;

constexpr int kExitOk = 0;
constexpr int kExitDisagreement = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInflation = 3;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Mat2Z parse_matrix_arg(const std::string& s, const std::string& flag) {
    auto m = parse_mat(s);
    if (!m) throw BadInput(flag + ": expected four integers \"a b c d\", got \"" + s + "\"");
    return *m;
}

Mat2Z require_admissible(const Mat2Z& m) {
    if (m.det() != 1) throw BadInput("matrix " + flat_str(m) + ": determinant must be 1");
    if (m.tr() <= 2) throw BadInput("matrix " + flat_str(m) + ": trace must exceed 2");
    return m;
}

std::string verdict_str(ConjVerdict v) {
    switch (v) {
        case ConjVerdict::ConjugateSL: return "conjugate (SL(2,Z))";
        case ConjVerdict::ConjugateGLOnly: return "conjugate (GL(2,Z) only)";
        case ConjVerdict::ConjugateToInverse: return "conjugate to inverse";
        default: return "not conjugate";
    }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyCfg {
    Mat2Z S;
    long long q = 1;
    Vec2Q m{Rat(0), Rat(0)};
    std::vector<TypeTag> types;  // empty = all compatible
    bool auto_inflate = false;
    long long bound = 6;
};

std::string relation_str(const Relation& r) {
    std::ostringstream os;
    os << r.name << " = t1^" << r.rhs.n1 << " t2^" << r.rhs.n2 << " t3^" << to_string(r.rhs.n3)
       << " t4^" << to_string(r.rhs.n4);
    return os.str();
}

Json sol3_json(const CrystGroupSpec& g, bool quotient_tf) {
    Json j;
    j["torsion_free"] = quotient_tf;
    if (!quotient_tf) {
        j["kind"] = nullptr;
        return j;
    }
    Sol3Classification c = classify_sol3_group(g);
    switch (c.kind) {
        case Sol3Classification::Kind::CaseA:
            j["kind"] = "MappingTorus";
            j["monodromy"] = json_of(c.monodromy);
            break;
        case Sol3Classification::Kind::CaseB:
            j["kind"] = "TwistedIBundleUnion";
            j["invol1"] = json_of(c.invol1);
            j["invol2"] = json_of(c.invol2);
            break;
        default:
            j["kind"] = "NotSolvManifoldGroup";
            break;
    }
    return j;
}

std::string sol3_text(const CrystGroupSpec& g, bool quotient_tf) {
    if (!quotient_tf) return "quotient has torsion";
    Sol3Classification c = classify_sol3_group(g);
    switch (c.kind) {
        case Sol3Classification::Kind::CaseA:
            return "mapping torus with monodromy " + c.monodromy.str();
        case Sol3Classification::Kind::CaseB:
            return "union of twisted I-bundles, involutions " + c.invol1.matrix.str() + "@" +
                   c.invol1.translation.str() + " and " + c.invol2.matrix.str() + "@" +
                   c.invol2.translation.str();
        default:
            return "torsion free, but not among the solvmanifold cases";
    }
}

/// One holonomy-type section of a classify run. Every emitted group is
/// re-verified; an unverified presentation is refused and flagged.
int classify_type(const ClassifyCfg& cfg, const HolonomySpec& h, bool json_mode, Json& jout,
                  std::ostream& os) {
    int rc = kExitOk;
    std::vector<CocycleClass> classes = h1_classes(h);
    std::vector<CrystGroupSpec> groups =
        enumerate_groups(h.S, h.tag, cfg.q, cfg.m, cfg.auto_inflate);

    Json jtype;
    jtype["type"] = type_name(h.tag);
    jtype["classes"] = Json::array();
    for (const CocycleClass& c : classes) {
        Json jc = json_of(c);
        jc["minimal_q"] = minimal_q_for_class(h, c, cfg.m, cfg.q);
        jtype["classes"].push_back(jc);
    }
    jtype["group_count"] = groups.size();
    jtype["groups"] = Json::array();

    if (!json_mode) {
        os << "type " << type_name(h.tag) << ": " << classes.size() << " cohomology class"
           << (classes.size() == 1 ? "" : "es") << ", " << groups.size() << " group"
           << (groups.size() == 1 ? "" : "s") << "\n";
        for (const Json& jc : jtype["classes"])
            os << "  class " << jc["a"].dump() << (jc["b"].is_null() ? "" : " b=" + jc["b"].dump())
               << ": minimal q = " << jc["minimal_q"].get<long long>() << "\n";
    }

    for (const CrystGroupSpec& g : groups) {
        VerifyReport ver = verify_presentation(g);
        if (!ver.all_ok) {
            rc = kExitDisagreement;
            std::string what;
            for (const auto& it : ver.items)
                if (!it.ok) what += (what.empty() ? "" : "; ") + it.name + ": " + it.note;
            if (json_mode)
                jtype["groups"].push_back(Json{{"refused", true}, {"reason", what}});
            else
                os << "  group REFUSED (presentation failed verification: " << what << ")\n";
            continue;
        }
        std::vector<Relation> rels = presentation(g);
        TorsionReport tr = torsion_report_with_witness(g, cfg.bound);
        TorsionReport qtr = quotient_is_torsion_free(g);

        Json jg;
        jg["lattice"] = json_of(g.lattice);
        jg["type"] = type_name(g.holonomy.tag);
        jg["class"] = json_of(g.cls);
        jg["a4"] = json_of(g.a4);
        jg["b4"] = json_of(g.b4);
        auto [c1, c2] = solve_c1c2(g.lattice);
        jg["c1"] = json_of(c1);
        jg["c2"] = json_of(c2);
        jg["presentation"] = Json::array();
        for (const Relation& r : rels) jg["presentation"].push_back(json_of(r));
        jg["torsion"] = json_of(tr);
        jg["quotient_torsion"] = json_of(qtr);
        jg["topology"] = qtr.torsion_free ? json_of(topology(g)) : Json(nullptr);
        jg["orientable"] = g.holonomy.orientable();
        jg["sol3"] = sol3_json(g, qtr.torsion_free);
        jg["verified"] = true;
        jtype["groups"].push_back(jg);

        if (!json_mode) {
            os << "  group: q=" << g.lattice.q << " m=" << g.lattice.m.str()
               << " class=" << g.cls.str() << " c3=" << to_string(g.lattice.c3)
               << " a4=" << to_string(g.a4) << " b4=" << to_string(g.b4) << "\n";
            for (const Relation& r : rels) os << "    " << relation_str(r) << "\n";
            os << "    torsion: "
               << (tr.torsion_free ? "torsion free"
                                   : "has torsion" + (tr.witness ? " (" + *tr.witness + ")" : ""))
               << " [" << tr.criterion << "]\n";
            os << "    orientable: " << (g.holonomy.orientable() ? "yes" : "no") << "\n";
            os << "    sol3 projection (t4 -> id): " << sol3_text(g, qtr.torsion_free) << "\n";
            os << "    presentation verified\n";
        }
    }
    jout["types"].push_back(jtype);
    return rc;
}

int run_classify_one(const ClassifyCfg& cfg, bool json_mode, Json& jout, std::ostream& os) {
    require_admissible(cfg.S);
    jout["S"] = flat_str(cfg.S);
    jout["q"] = cfg.q;
    jout["m"] = Json::array(
        {static_cast<long long>(rat_floor(cfg.m.x)), static_cast<long long>(rat_floor(cfg.m.y))});
    jout["types"] = Json::array();

    std::vector<HolonomySpec> specs;
    if (cfg.types.empty()) {
        specs = compatible_types(cfg.S);
    } else {
        for (TypeTag t : cfg.types) {
            auto h = compatible(t, cfg.S);
            if (!h) {
                if (!json_mode)
                    os << "type " << type_name(t) << ": incompatible with S\n";
                Json jt{{"type", type_name(t)}, {"incompatible", true}};
                jout["types"].push_back(jt);
                continue;
            }
            specs.push_back(*h);
        }
    }
    if (!json_mode) os << "S = " << cfg.S.str() << "  trace " << cfg.S.tr() << "\n";
    int rc = kExitOk;
    for (const HolonomySpec& h : specs) rc = std::max(rc, classify_type(cfg, h, json_mode, jout, os));
    return rc;
}

int run_classify(ClassifyCfg cfg, const std::string& batch_file, bool json_mode) {
    std::vector<ClassifyCfg> jobs;
    if (batch_file.empty()) {
        jobs.push_back(cfg);
    } else {
        std::ifstream in(batch_file);
        if (!in) throw BadInput("cannot open batch file " + batch_file);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            long long e[4];
            for (long long& v : e)
                if (!(ls >> v)) throw BadInput("batch line \"" + line + "\": expected a b c d");
            ClassifyCfg j = cfg;
            j.S = Mat2Z{e[0], e[1], e[2], e[3]};
            long long q, m1, m2;
            if (ls >> q) {
                if (!(ls >> m1 >> m2))
                    throw BadInput("batch line \"" + line + "\": expected a b c d [q m1 m2]");
                j.q = q;
                j.m = {Rat(m1), Rat(m2)};
            }
            jobs.push_back(j);
        }
    }

    int rc = kExitOk;
    Json jall = Json::array();
    std::ostringstream text;
    for (const ClassifyCfg& job : jobs) {
        Json jone;
        rc = std::max(rc, run_classify_one(job, json_mode, jone, text));
        jall.push_back(jone);
        if (!json_mode) text << "\n";
    }
    if (json_mode)
        std::cout << (batch_file.empty() ? jall[0] : jall).dump(2) << "\n";
    else
        std::cout << text.str();
    return rc;
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

int run_enumerate(long long trace_max, bool json_mode) {
    std::vector<Mat2Z> reps;
    if (trace_max < 3)
        std::cerr << "warning: no admissible matrices have trace <= " << trace_max << "\n";
    else
        reps = conjugacy_class_reps(trace_max);
    std::map<long long, long long> per_trace;
    for (const Mat2Z& r : reps) ++per_trace[r.tr()];
    if (json_mode) {
        Json j;
        j["command"] = "enumerate";
        j["trace_max"] = trace_max;
        j["classes"] = Json::array();
        for (const Mat2Z& r : reps)
            j["classes"].push_back(Json{{"S", flat_str(r)}, {"trace", r.tr()}});
        j["counts"] = Json::object();
        for (auto [t, n] : per_trace) j["counts"][std::to_string(t)] = n;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << reps.size() << " weak-conjugacy classes with trace <= " << trace_max << "\n";
        for (const Mat2Z& r : reps) std::cout << "  tr " << r.tr() << ": " << r.str() << "\n";
        for (auto [t, n] : per_trace) std::cout << "trace " << t << ": " << n << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(long long trace_max, long long qmax, long long bound, bool json_mode) {
    long long checked = 0, disagreements = 0;
    const Vec2Q zero{Rat(0), Rat(0)};
    auto emit = [&](const Json& j) {
        if (json_mode) std::cout << j.dump() << "\n";
    };
    for (const Mat2Z& S : concordance_matrices(trace_max)) {
        for (const HolonomySpec& h : compatible_types(S)) {
            long long closed_h1 = static_cast<long long>(h1_classes(h).size());
            long long brute_h1 = h1_bruteforce(h);
            bool h1_ok = closed_h1 == brute_h1;
            ++checked;
            disagreements += !h1_ok;
            emit(Json{{"S", flat_str(S)},
                      {"type", type_name(h.tag)},
                      {"check", "h1"},
                      {"closed", closed_h1},
                      {"oracle", brute_h1},
                      {"agree", h1_ok}});
            for (const CrystGroupSpec& g : enumerate_groups(S, h.tag, 1, zero, true)) {
                if (g.lattice.q > qmax) continue;
                bool closed_tf = is_torsion_free(g).torsion_free;
                bool oracle_tf = torsion_search(g, bound).torsion_free;
                bool closed_q = quotient_is_torsion_free(g).torsion_free;
                bool oracle_q = torsion_search(g, bound, true).torsion_free;
                bool pres_ok = verify_presentation(g).all_ok;
                bool agree = closed_tf == oracle_tf && closed_q == oracle_q && pres_ok;
                ++checked;
                disagreements += !agree;
                emit(Json{{"S", flat_str(S)},
                          {"type", type_name(h.tag)},
                          {"check", "torsion"},
                          {"class", json_of(g.cls)},
                          {"q", g.lattice.q},
                          {"c3", to_string(g.lattice.c3)},
                          {"a4", to_string(g.a4)},
                          {"b4", to_string(g.b4)},
                          {"closed", closed_tf},
                          {"oracle", oracle_tf},
                          {"closed_quotient", closed_q},
                          {"oracle_quotient", oracle_q},
                          {"presentation_ok", pres_ok},
                          {"agree", agree}});
                if (!agree && !json_mode)
                    std::cout << "DISAGREE " << flat_str(S) << " type " << type_name(h.tag)
                              << " class " << g.cls.str() << " q=" << g.lattice.q << "\n";
            }
        }
    }
    if (!json_mode)
        std::cout << "verified " << checked << " checks (tr <= " << trace_max << ", q <= " << qmax
                  << ", oracle bound " << bound << "): " << disagreements << " disagreement"
                  << (disagreements == 1 ? "" : "s") << "\n";
    return disagreements == 0 ? kExitOk : kExitDisagreement;
}

// ---------------------------------------------------------------------------
// conjugacy
// ---------------------------------------------------------------------------

int run_conjugacy(const Mat2Z& s1, const Mat2Z& s2, bool json_mode) {
    require_admissible(s1);
    require_admissible(s2);
    ConjResult r = weakly_conjugate(s1, s2);
    if (json_mode) {
        Json j;
        j["command"] = "conjugacy";
        j["S"] = flat_str(s1);
        j["S2"] = flat_str(s2);
        j["verdict"] = verdict_str(r.verdict);
        j["witness"] = r.witness ? Json(flat_str(*r.witness)) : Json(nullptr);
        j["to_inverse"] = r.to_inverse;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << s1.str() << " vs " << s2.str() << ": " << verdict_str(r.verdict) << "\n";
        if (r.witness)
            std::cout << "witness B = " << r.witness->str() << " with B S B^-1 = S2"
                      << (r.to_inverse ? "^-1" : "") << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvcrys: crystallographic groups of Sol^3 and Sol1^4, exactly"};
    app.require_subcommand(1);

    std::string s_arg, s2_arg, batch_file;
    std::vector<std::string> type_args;
    std::vector<long long> m_arg;
    long long q = 1, trace_max = 12, bound = -1;
    bool json_mode = false, auto_inflate = false;

    auto* classify = app.add_subcommand("classify", "classify the groups over one matrix");
    classify->add_option("--s", s_arg, "lattice matrix \"a b c d\"");
    classify->add_option("--q", q, "central inflation (default 1)");
    classify->add_option("--m", m_arg, "center twist m1 m2")->expected(2);
    classify->add_option("--type", type_args, "restrict to these holonomy types");
    classify->add_option("--bound", bound, "oracle witness search bound");
    classify->add_flag("--auto-inflate", auto_inflate, "inflate q per class as required");
    classify->add_option("--batch", batch_file, "file of \"a b c d [q m1 m2]\" lines");
    classify->add_flag("--json", json_mode, "JSON output");

    auto* enumerate = app.add_subcommand("enumerate", "weak-conjugacy classes up to a trace bound");
    enumerate->add_option("--trace-max", trace_max, "largest trace (default 12)");
    enumerate->add_flag("--json", json_mode, "JSON output");

    auto* verify = app.add_subcommand("verify", "closed-form vs oracle concordance grid");
    verify->add_option("--trace-max", trace_max, "largest trace (default 12)");
    verify->add_option("--q", q, "largest inflation kept (default 4)");
    verify->add_option("--bound", bound, "oracle translation bound");
    verify->add_flag("--json", json_mode, "JSON-lines output");

    auto* conjugacy = app.add_subcommand("conjugacy", "weak conjugacy of two matrices");
    conjugacy->add_option("--s", s_arg, "first matrix \"a b c d\"")->required();
    conjugacy->add_option("--s2", s2_arg, "second matrix \"a b c d\"")->required();
    conjugacy->add_flag("--json", json_mode, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (classify->parsed()) {
            if (s_arg.empty() && batch_file.empty())
                throw BadInput("classify: need --s or --batch");
            ClassifyCfg cfg;
            if (!s_arg.empty()) cfg.S = parse_matrix_arg(s_arg, "--s");
            cfg.q = q;
            if (q < 1) throw BadInput("--q must be positive");
            if (!m_arg.empty()) cfg.m = {Rat(m_arg[0]), Rat(m_arg[1])};
            for (const std::string& t : type_args) {
                auto tag = parse_type(t);
                if (!tag) throw BadInput("unknown type tag \"" + t + "\"");
                cfg.types.push_back(*tag);
            }
            cfg.auto_inflate = auto_inflate;
            cfg.bound = bound < 0 ? 6 : bound;
            return run_classify(cfg, batch_file, json_mode);
        }
        if (enumerate->parsed()) return run_enumerate(trace_max, json_mode);
        if (verify->parsed()) {
            long long qmax = verify->count("--q") ? q : 4;
            return run_verify(trace_max, qmax, bound < 0 ? 4 : bound, json_mode);
        }
        if (conjugacy->parsed())
            return run_conjugacy(parse_matrix_arg(s_arg, "--s"), parse_matrix_arg(s2_arg, "--s2"),
                                 json_mode);
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const InflationRequired& e) {
        std::cerr << "error: " << e.what() << " (rerun with --auto-inflate)\n";
        return kExitInflation;
    } catch (const NotAdmissible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitOk;
}
