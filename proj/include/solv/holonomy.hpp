#pragma once

/**
 * @file holonomy.hpp
 * @brief Static D4 data and the 14 holonomy-type templates.
 *
 * The maximal compact part of the relevant automorphism group is the dihedral
 * group D4 of 8 signed permutation matrices. Each finite holonomy group Phi,
 * together with the offsets a3, b3 and the GL(2,Z) images phi(alpha-bar),
 * phi(beta-bar), determines one of 14 classification types. compatible()
 * decides which admissible S fit a given type and packages the result.
 *
 * Characters: bar(A) = +1 iff A is diagonal (A then fixes the two eigen-
 * directions; off-diagonal elements swap them and invert t3). hat(A) = det A
 * gives the action on the center t4.
 */

#include <solv/mat2.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace solv {

inline const Mat2Z kDiagFlip{1, 0, 0, -1};   // diag(1,-1)
inline const Mat2Z kMinusI{-1, 0, 0, -1};
inline const Mat2Z kOffSwap{0, 1, 1, 0};     // [[0,1],[1,0]]
inline const Mat2Z kRot4{0, 1, -1, 0};       // [[0,1],[-1,0]], order 4

/// The 8 elements of D4 (signed diagonal and off-diagonal matrices).
inline bool is_d4_element(const Mat2Z& a) {
    return (a.is_diagonal() && (a.a11 == 1 || a.a11 == -1) && (a.a22 == 1 || a.a22 == -1)) ||
           (a.a11 == 0 && a.a22 == 0 && (a.a12 == 1 || a.a12 == -1) &&
            (a.a21 == 1 || a.a21 == -1));
}

/// (bar, hat): bar = +1 iff diagonal, hat = det.
inline std::pair<int, int> bar_hat(const Mat2Z& a) {
    return {a.is_diagonal() ? 1 : -1, static_cast<int>(a.det())};
}

enum class TypeTag { T0, T1, T2a, T2b, T3, T3i, T4, T5, T6a, T6ai, T6b, T6bi, T7, T7i };

inline const std::array<TypeTag, 14> kAllTypes = {
    TypeTag::T0,  TypeTag::T1,  TypeTag::T2a, TypeTag::T2b, TypeTag::T3,
    TypeTag::T3i, TypeTag::T4,  TypeTag::T5,  TypeTag::T6a, TypeTag::T6ai,
    TypeTag::T6b, TypeTag::T6bi, TypeTag::T7, TypeTag::T7i};

inline std::string type_name(TypeTag t) {
    switch (t) {
        case TypeTag::T0: return "0";
        case TypeTag::T1: return "1";
        case TypeTag::T2a: return "2a";
        case TypeTag::T2b: return "2b";
        case TypeTag::T3: return "3";
        case TypeTag::T3i: return "3i";
        case TypeTag::T4: return "4";
        case TypeTag::T5: return "5";
        case TypeTag::T6a: return "6a";
        case TypeTag::T6ai: return "6ai";
        case TypeTag::T6b: return "6b";
        case TypeTag::T6bi: return "6bi";
        case TypeTag::T7: return "7";
        case TypeTag::T7i: return "7i";
    }
    return "?";
}

inline std::optional<TypeTag> parse_type(const std::string& s) {
    for (TypeTag t : kAllTypes)
        if (type_name(t) == s) return t;
    return std::nullopt;
}

/// One holonomy generator: its D4 part, its GL(2,Z) image (the middle block
/// of the affine element, with any t3^(1/2) contribution folded in), and its
/// t3 offset.
struct HolGen {
    Mat2Z A;    // D4 part
    Mat2Z phi;  // GL(2,Z) image
    Rat a3;     // 0 or 1/2
    int bar;    // +1 iff A diagonal
    int hat;    // det A == det phi
};

struct HolonomySpec {
    TypeTag tag = TypeTag::T0;
    Mat2Z S;
    std::optional<HolGen> alpha, beta;
    std::optional<NKDecomposition> K_data;
    bool boundary_case = false;  // type 6b with k11 == 0 (stated bound is non-strict)

    /// Orbifold orientability: no off-diagonal automorphism in the holonomy.
    bool orientable() const {
        return (!alpha || alpha->bar == 1) && (!beta || beta->bar == 1);
    }
};

namespace detail {

inline HolGen make_gen(const Mat2Z& A, const Mat2Z& phi, const Rat& a3) {
    auto [bar, hat] = bar_hat(A);
    if (hat != phi.det()) throw std::logic_error("make_gen: determinant mismatch");
    return {A, phi, a3, bar, hat};
}

/// phi must conjugate S to S^bar.
inline bool phi_consistent(const Mat2Z& S, const HolGen& g) {
    return g.phi * S * g.phi.inverse() == S.pow(g.bar);
}

}  // namespace detail

/// Populate a HolonomySpec for (tag, S), or nullopt when S does not satisfy
/// the type's conditions.
inline std::optional<HolonomySpec> compatible(TypeTag tag, const Mat2Z& S) {
    if (!is_admissible(S)) throw NotAdmissible();
    using detail::make_gen;
    HolonomySpec h;
    h.tag = tag;
    h.S = S;
    const Rat half(1, 2);
    const long long s11 = S.a11, s12 = S.a12, s21 = S.a21, s22 = S.a22;

    auto finish = [&]() -> std::optional<HolonomySpec> {
        if (h.alpha && !detail::phi_consistent(S, *h.alpha)) return std::nullopt;
        if (h.beta && !detail::phi_consistent(S, *h.beta)) return std::nullopt;
        // a3 = 1/2 with bar = +1 requires phi to be a square root of S.
        for (const auto& g : {h.alpha, h.beta})
            if (g && g->a3 == half && g->bar == 1 && !(g->phi * g->phi == S))
                throw std::logic_error("compatible: phi^2 != S for a half-offset generator");
        return h;
    };

    switch (tag) {
        case TypeTag::T0:
            return h;
        case TypeTag::T1: {
            auto d = decompose_nK(S, +1);
            if (!d) return std::nullopt;
            h.K_data = d;
            h.alpha = make_gen(kDiagFlip, -d->K, half);
            return finish();
        }
        case TypeTag::T2a:
            h.alpha = make_gen(kMinusI, kMinusI, 0);
            return finish();
        case TypeTag::T2b: {
            auto d = decompose_nK(S, -1);
            if (!d) return std::nullopt;
            h.K_data = d;
            h.alpha = make_gen(kMinusI, -d->K, half);
            return finish();
        }
        case TypeTag::T3:
            if (!(s12 == -s21 && s22 > 0 && s11 < 0)) return std::nullopt;
            h.alpha = make_gen(kOffSwap, kOffSwap, 0);
            return finish();
        case TypeTag::T3i:
            if (!(s11 == s22 && s11 > 0 && s12 > 0 && s21 > 0)) return std::nullopt;
            h.alpha = make_gen(kOffSwap, kDiagFlip, 0);
            return finish();
        case TypeTag::T4:
            if (!(s12 == s21 && s11 > 0 && s22 > 0)) return std::nullopt;
            h.alpha = make_gen(kRot4, kRot4, 0);
            return finish();
        case TypeTag::T5: {
            auto d = decompose_nK(S, +1);
            if (!d) return std::nullopt;
            h.K_data = d;
            h.alpha = make_gen(kDiagFlip, -d->K, half);
            h.beta = make_gen(kMinusI, kMinusI, 0);
            return finish();
        }
        case TypeTag::T6a:
            if (!(s12 == -s21 && s22 > 0 && s11 < 0)) return std::nullopt;
            h.alpha = make_gen(kOffSwap, kOffSwap, 0);
            h.beta = make_gen(kMinusI, kMinusI, 0);
            return finish();
        case TypeTag::T6ai:
            if (!(s11 == s22 && s11 > 0 && s12 > 0 && s21 > 0)) return std::nullopt;
            h.alpha = make_gen(kOffSwap, kDiagFlip, 0);
            h.beta = make_gen(kMinusI, kMinusI, 0);
            return finish();
        case TypeTag::T6b: {
            auto d = decompose_nK(S, -1);
            if (!d) return std::nullopt;
            const Mat2Z& K = d->K;
            if (!(K.a12 == -K.a21 && K.a22 > 0 && K.a11 <= 0)) return std::nullopt;
            h.K_data = d;
            h.boundary_case = K.a11 == 0;
            h.alpha = make_gen(kOffSwap, kOffSwap, 0);
            h.beta = make_gen(kMinusI, -K, half);
            return finish();
        }
        case TypeTag::T6bi: {
            auto d = decompose_nK(S, -1);
            if (!d) return std::nullopt;
            const Mat2Z& K = d->K;
            if (!(K.a11 == K.a22 && K.a11 >= 0 && K.a12 >= 0 && K.a21 >= 0)) return std::nullopt;
            h.K_data = d;
            h.alpha = make_gen(kOffSwap, kDiagFlip, 0);
            h.beta = make_gen(kMinusI, -K, half);
            return finish();
        }
        case TypeTag::T7: {
            auto d = decompose_nK(S, +1);
            if (!d) return std::nullopt;
            const Mat2Z& K = d->K;
            if (!(K.a12 == -K.a21 && K.a22 >= 0 && K.a11 < 0)) return std::nullopt;
            h.K_data = d;
            h.alpha = make_gen(kOffSwap, kOffSwap, 0);
            h.beta = make_gen(kDiagFlip, -K, half);
            return finish();
        }
        case TypeTag::T7i: {
            auto d = decompose_nK(S, +1);
            if (!d) return std::nullopt;
            const Mat2Z& K = d->K;
            if (!(K.a11 == K.a22 && K.a11 >= 0 && K.a12 >= 0 && K.a21 >= 0)) return std::nullopt;
            h.K_data = d;
            h.alpha = make_gen(kOffSwap, kDiagFlip, 0);
            h.beta = make_gen(kDiagFlip, -K, half);
            return finish();
        }
    }
    return std::nullopt;
}

/// All types compatible with S, in canonical order.
inline std::vector<HolonomySpec> compatible_types(const Mat2Z& S) {
    std::vector<HolonomySpec> out;
    for (TypeTag t : kAllTypes)
        if (auto h = compatible(t, S)) out.push_back(*h);
    return out;
}

// ---------------------------------------------------------------------------
// Subgroup/extension catalogue with liftability flags
// ---------------------------------------------------------------------------

/// One (Phi, a3, b3) configuration row from the extension catalogue.
struct ConfigRow {
    Rat a3, b3;        // b3 meaningful only for two-generator Phi
    bool liftable;     // false: requires an integral conjugate of diag(1,-1)
                       // with zero t3 offset, which tr^2 - 4 never allows
    std::vector<TypeTag> types;  // classification types realizing the row
};

struct SubgroupInfo {
    std::string name;            // holonomy group Phi
    std::vector<Mat2Z> gens;     // D4 generators
    std::vector<ConfigRow> rows;
};

/// The 8 subgroups of D4 up to conjugacy with their extension rows.
inline std::vector<SubgroupInfo> list_subgroups() {
    const Rat h(1, 2);
    return {
        {"1", {}, {{0, 0, true, {TypeTag::T0}}}},
        {"Z2(diag-flip)",
         {kDiagFlip},
         {{0, 0, false, {}}, {h, 0, true, {TypeTag::T1}}}},
        {"Z2(-I)",
         {kMinusI},
         {{0, 0, true, {TypeTag::T2a}}, {h, 0, true, {TypeTag::T2b}}}},
        {"Z2(swap)", {kOffSwap}, {{0, 0, true, {TypeTag::T3, TypeTag::T3i}}}},
        {"Z4", {kRot4}, {{0, 0, true, {TypeTag::T4}}}},
        {"Z2xZ2(diag)",
         {kDiagFlip, kMinusI},
         {{0, 0, false, {}}, {h, 0, true, {TypeTag::T5}}}},
        {"Z2xZ2(swap)",
         {kOffSwap, kMinusI},
         {{0, 0, true, {TypeTag::T6a, TypeTag::T6ai}},
          {0, h, true, {TypeTag::T6b, TypeTag::T6bi}}}},
        {"D4",
         {kOffSwap, kDiagFlip},
         {{0, 0, false, {}}, {0, h, true, {TypeTag::T7, TypeTag::T7i}}}},
    };
}

/// Computable content of the liftability barrier: the would-be integral image
/// of a zero-offset reflection requires tr^2 - 4 to be a perfect square,
/// which never happens for tr > 2.
inline bool reflection_liftable(long long trace) {
    return is_perfect_square(Int(trace * trace - 4));
}

}  // namespace solv
