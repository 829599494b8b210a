#pragma once

/**
 * @file json.hpp
 * @brief JSON views of the core value types (nlohmann::ordered_json).
 *
 * Interchange schemas:
 *
 *     QuadExt       {"a": "p/q", "b": "r/s", "d": n}
 *     LatticeSpec   {"S": [a11, a12, a21, a22], "q": n, "m": [m1, m2], "c3": "p/q"}
 *     CocycleClass  {"a": ["p/q", "r/s"], "b": [...] | null}
 *     Mat2Z         "a b c d"   (row-major flat form)
 *
 * Rationals serialize through to_string (so "p/q" or a bare integer).
 * ordered_json preserves insertion order, which together with the fixed
 * field order below makes every dump byte-deterministic for fixed inputs.
 */

#include <solv/crystal.hpp>

#include <json.hpp>

namespace solv {

using Json = nlohmann::ordered_json;

inline Json json_of(const Rat& r) { return to_string(r); }

inline Json json_of(const QuadExt& x) {
    return Json{{"a", to_string(x.rational_part())},
                {"b", to_string(x.radical_part())},
                {"d", x.d().str()}};
}

inline Json json_of(const Mat2Z& m) { return flat_str(m); }

inline Json json_of(const Vec2Q& v) { return Json::array({json_of(v.x), json_of(v.y)}); }

inline Json json_of(const LatticeSpec& l) {
    return Json{{"S", Json::array({l.S.a11, l.S.a12, l.S.a21, l.S.a22})},
                {"q", l.q},
                {"m", Json::array({json_of(l.m.x), json_of(l.m.y)})},
                {"c3", json_of(l.c3)}};
}

inline Json json_of(const CocycleClass& c) {
    Json j{{"a", json_of(c.a)}};
    j["b"] = c.b ? json_of(*c.b) : Json(nullptr);
    return j;
}

inline Json json_of(const Relation& r) {
    return Json{{"lhs", r.name},
                {"t1", r.rhs.n1},
                {"t2", r.rhs.n2},
                {"t3", json_of(r.rhs.n3)},
                {"t4", json_of(r.rhs.n4)}};
}

inline Json json_of(const TorsionReport& t) {
    Json j{{"torsion_free", t.torsion_free}, {"criterion", t.criterion}};
    j["witness"] = t.witness ? Json(*t.witness) : Json(nullptr);
    return j;
}

inline Json json_of(const AffineInvolution& i) {
    return Json{{"translation", json_of(i.translation)}, {"matrix", json_of(i.matrix)}};
}

inline Json json_of(const TopologyDescriptor& t) {
    Json j;
    if (t.kind == TopologyDescriptor::Kind::MappingTorus) {
        j["kind"] = "MappingTorus";
        j["monodromy"] = json_of(t.monodromy);
    } else {
        j["kind"] = "TwistedIBundleUnion";
        j["invol1"] = json_of(t.invol1);
        j["invol2"] = json_of(t.invol2);
    }
    j["orientable"] = t.orientable;
    return j;
}

}  // namespace solv
