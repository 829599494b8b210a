#pragma once

/**
 * @file cohomology.hpp
 * @brief H^1 of the holonomy group with coefficients in the cokernel lattice.
 *
 * The translation parts (a1, a2) and (b1, b2) of holonomy generators range
 * over classes of H^1(Phi; Coker(I - S)). Per type, the cocycle conditions
 * are the power condition (I + phi + ... + phi^{p-1}) a = 0 and, for
 * Z2 x Z2, the compatibility (I - phi(alpha)) b = (I - phi(beta)) a; classes
 * are cocycles modulo the coboundaries ((I - phi(alpha)) v, (I - phi(beta)) v).
 *
 * Everything is enumerated by brute force over the finite cokernel (order
 * tr S - 2, or |Coker(I + K)| where the type dictates) — correctness over
 * cleverness at these sizes. Types whose generator can be normalized to have
 * zero translation part (1, 2b, and the fixed slots of 5, 6b, 6bi, 7, 7i)
 * store the zero explicitly.
 */

#include <solv/holonomy.hpp>

#include <algorithm>
#include <optional>
#include <vector>

namespace solv {

struct IncompatibleSpec : std::domain_error {
    IncompatibleSpec() : std::domain_error("cohomology: spec fields are inconsistent") {}
};
struct NotACocycle : std::domain_error {
    NotACocycle() : std::domain_error("cohomology: candidate violates the cocycle conditions") {}
};

struct CocycleClass {
    Vec2Q a;
    std::optional<Vec2Q> b;

    bool operator==(const CocycleClass& o) const { return a == o.a && b == o.b; }
    bool operator<(const CocycleClass& o) const {
        if (!(a == o.a)) return a < o.a;
        if (b.has_value() != o.b.has_value()) return !b.has_value();
        return b.has_value() && *b < *o.b;
    }
    std::string str() const {
        std::string s = "a=" + a.str();
        if (b) s += " b=" + b->str();
        return s;
    }
};

namespace detail {

inline Vec2Q vmod1(const Vec2Q& v) { return {mod1(v.x), mod1(v.y)}; }
inline Vec2Q vadd(const Vec2Q& u, const Vec2Q& v) { return vmod1(u + v); }
inline bool vzero(const Vec2Q& v) { return mod1(v.x) == 0 && mod1(v.y) == 0; }

inline CocycleClass cadd(const CocycleClass& u, const CocycleClass& v) {
    CocycleClass r;
    r.a = vadd(u.a, v.a);
    if (u.b && v.b) r.b = vadd(*u.b, *v.b);
    return r;
}

/// Subgroup generated by gens inside (Q/Z)-vectors, via closure under addition.
inline std::vector<CocycleClass> subgroup_span(const std::vector<CocycleClass>& gens,
                                               const CocycleClass& zero) {
    std::vector<CocycleClass> out{zero};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& g : gens)
            for (std::size_t i = 0; i < out.size(); ++i) {
                CocycleClass s = cadd(out[i], g);
                if (std::find(out.begin(), out.end(), s) == out.end()) {
                    out.push_back(s);
                    grew = true;
                }
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Coset representatives of cands modulo the span of cob (greedy over the
/// sorted candidate list, so (0,...) always represents the trivial class).
inline std::vector<CocycleClass> coset_reps(std::vector<CocycleClass> cands,
                                            const std::vector<CocycleClass>& cob,
                                            const CocycleClass& zero) {
    std::sort(cands.begin(), cands.end());
    std::vector<CocycleClass> sub = subgroup_span(cob, zero);
    std::vector<CocycleClass> reps, covered;
    for (const auto& c : cands) {
        if (std::find(covered.begin(), covered.end(), c) != covered.end()) continue;
        reps.push_back(c);
        for (const auto& s : sub) covered.push_back(cadd(c, s));
    }
    return reps;
}

/// The per-type coboundary image of a single witness v.
inline CocycleClass coboundary_image(const HolonomySpec& h, const Vec2Q& v) {
    CocycleClass img;
    Rat d = v.x - v.y;
    switch (h.tag) {
        case TypeTag::T2a:
            img.a = vmod1(v + v);
            break;
        case TypeTag::T3:
        case TypeTag::T6b:
        case TypeTag::T7:
            img.a = vmod1({d, -d});
            break;
        case TypeTag::T3i:
        case TypeTag::T6bi:
        case TypeTag::T7i:
            img.a = vmod1({Rat(0), 2 * v.y});
            break;
        case TypeTag::T4:
            img.a = vmod1({v.x - v.y, v.x + v.y});
            break;
        case TypeTag::T5:
            img.a = {Rat(0), Rat(0)};
            img.b = vmod1(v + v);
            break;
        case TypeTag::T6a:
            img.a = vmod1({d, -d});
            img.b = vmod1(v + v);
            break;
        case TypeTag::T6ai:
            img.a = vmod1({Rat(0), 2 * v.y});
            img.b = vmod1(v + v);
            break;
        default:
            img.a = {Rat(0), Rat(0)};
            break;
    }
    return img;
}

/// Witness domain: which cokernel the coboundary parameter v ranges over.
inline std::vector<Vec2Q> witness_domain(const HolonomySpec& h) {
    switch (h.tag) {
        case TypeTag::T6b:
        case TypeTag::T6bi:
        case TypeTag::T7:
        case TypeTag::T7i:
        case TypeTag::T5:
            return cokernel(kIdentity + h.K_data->K).elements;
        case TypeTag::T0:
        case TypeTag::T1:
        case TypeTag::T2b:
            return {{Rat(0), Rat(0)}};
        default:
            return cokernel(kIdentity - h.S).elements;
    }
}

}  // namespace detail

/// Exact cocycle test for a candidate of the right shape.
inline bool is_cocycle(const HolonomySpec& h, const CocycleClass& c) {
    using detail::vzero;
    const Mat2Z& S = h.S;
    auto in_coker = [](const Mat2Z& M, const Vec2Q& v) { return M.apply(v).is_integral(); };
    bool two_gen = h.beta.has_value();
    if (c.b.has_value() != (two_gen && (h.tag == TypeTag::T5 || h.tag == TypeTag::T6a ||
                                        h.tag == TypeTag::T6ai)))
        // b-slot present exactly for the two-generator types whose second
        // translation part is free (5, 6a, 6ai); 6b/6bi/7/7i fix b = 0.
        return false;
    switch (h.tag) {
        case TypeTag::T0:
        case TypeTag::T1:
        case TypeTag::T2b:
            return vzero(c.a);
        case TypeTag::T2a:
            return in_coker(kIdentity - S, c.a);
        case TypeTag::T3:
        case TypeTag::T7:
            return in_coker(kIdentity - S, c.a) && mod1(c.a.x + c.a.y) == 0;
        case TypeTag::T3i:
        case TypeTag::T7i:
            return in_coker(kIdentity - S, c.a) && mod1(2 * c.a.x) == 0;
        case TypeTag::T4:
            return in_coker(kIdentity - S, c.a);
        case TypeTag::T5:
            return vzero(c.a) && in_coker(kIdentity + h.K_data->K, *c.b);
        case TypeTag::T6a:
            return in_coker(kIdentity - S, c.a) && in_coker(kIdentity - S, *c.b) &&
                   mod1(c.a.x + c.a.y) == 0 && mod1(c.b->x - c.b->y - 2 * c.a.x) == 0 &&
                   mod1(-c.b->x + c.b->y - 2 * c.a.y) == 0;
        case TypeTag::T6ai:
            return in_coker(kIdentity - S, c.a) && in_coker(kIdentity - S, *c.b) &&
                   mod1(2 * c.a.x) == 0 && mod1(2 * (c.b->y - c.a.y)) == 0;
        case TypeTag::T6b:
            return in_coker(kIdentity + h.K_data->K, c.a) && mod1(c.a.x + c.a.y) == 0;
        case TypeTag::T6bi:
            return in_coker(kIdentity + h.K_data->K, c.a) && mod1(2 * c.a.x) == 0;
    }
    return false;
}

/// One representative per H^1 class, lexicographically sorted, trivial first.
inline std::vector<CocycleClass> h1_classes(const HolonomySpec& h) {
    using namespace detail;
    const Vec2Q zero2{Rat(0), Rat(0)};
    CocycleClass zero{zero2, std::nullopt};
    std::vector<CocycleClass> cands;
    switch (h.tag) {
        case TypeTag::T0:
        case TypeTag::T1:
        case TypeTag::T2b:
            return {zero};
        case TypeTag::T5: {
            zero.b = zero2;
            for (const Vec2Q& b : cokernel(kIdentity + h.K_data->K).elements)
                cands.push_back({zero2, b});
            break;
        }
        case TypeTag::T6a:
        case TypeTag::T6ai: {
            zero.b = zero2;
            auto E = cokernel(kIdentity - h.S).elements;
            for (const Vec2Q& a : E)
                for (const Vec2Q& b : E) {
                    CocycleClass c{a, b};
                    if (is_cocycle(h, c)) cands.push_back(c);
                }
            break;
        }
        case TypeTag::T6b:
        case TypeTag::T6bi: {
            for (const Vec2Q& a : cokernel(kIdentity + h.K_data->K).elements) {
                CocycleClass c{a, std::nullopt};
                if (is_cocycle(h, c)) cands.push_back(c);
            }
            break;
        }
        default: {
            for (const Vec2Q& a : cokernel(kIdentity - h.S).elements) {
                CocycleClass c{a, std::nullopt};
                if (is_cocycle(h, c)) cands.push_back(c);
            }
            break;
        }
    }
    std::vector<CocycleClass> cob;
    for (const Vec2Q& v : witness_domain(h)) cob.push_back(coboundary_image(h, v));
    return coset_reps(std::move(cands), cob, zero);
}

/// Witness v with candidate = ((I - phi(alpha)) v, (I - phi(beta)) v), when
/// the candidate is cohomologous to zero. Throws NotACocycle for candidates
/// outside Z^1.
inline std::optional<Vec2Q> coboundary_witness(const HolonomySpec& h, const CocycleClass& c) {
    if (!is_cocycle(h, c)) throw NotACocycle();
    for (const Vec2Q& v : detail::witness_domain(h)) {
        CocycleClass img = detail::coboundary_image(h, v);
        if (img.a == detail::vmod1(c.a) &&
            img.b.has_value() == c.b.has_value() &&
            (!c.b || *img.b == detail::vmod1(*c.b)))
            return v;
    }
    return std::nullopt;
}

inline bool is_coboundary(const HolonomySpec& h, const CocycleClass& c) {
    return coboundary_witness(h, c).has_value();
}

}  // namespace solv
