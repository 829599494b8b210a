#pragma once

/**
 * @file lattice.hpp
 * @brief Lattice construction: eigen data, central slots c1/c2, generators.
 *
 * A lattice is labelled by an admissible S, a central inflation q >= 1, an
 * integer pair (m1, m2) taken as the canonical Coker(S - I) representative,
 * and c3. Its generators t1, t2, t3, t4^(1/q) are the closed post-conjugation
 * 5x5 forms; c1, c2 are re-derived here by probing the defining relations
 *
 *     t3 t_i t3^{-1} = t1^{sigma_1i} t2^{sigma_2i} t4^{m_i/q}
 *
 * whose corner residual is affine in (c1, c2) with invertible coefficient
 * matrix I - S^T, rather than transcribed from any closed formula.
 */

#include <solv/affine.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace solv {

struct LatticeSpec {
    Mat2Z S;
    long long q = 1;
    Vec2Q m;  // integer entries, canonical Coker(S - I) representative
    Rat c3 = 0;
};

/// Validating factory. m is canonicalized modulo Im(S^T - I): shifting m by
/// (S^T - I) z moves (c1, c2) by an integer multiple of 1/q and yields the
/// same group, so that is the correct identification for the label (the
/// quotient is abstractly the same finite group as Coker(S - I)).
inline LatticeSpec make_lattice_spec(const Mat2Z& S, long long q, const Vec2Q& m,
                                     const Rat& c3 = 0) {
    if (!is_admissible(S)) throw NotAdmissible();
    if (q < 1) throw std::domain_error("LatticeSpec: q must be positive");
    if (!m.is_integral()) throw std::domain_error("LatticeSpec: m must be integral");
    LatticeSpec spec;
    spec.S = S;
    spec.q = q;
    spec.m = cokernel((S - kIdentity).transpose()).reduce_int(m);
    spec.c3 = c3;
    return spec;
}

struct LatticeGens {
    AffineElem t1, t2, t3, t4q;  // t4q is t4^(1/q)

    /// t4^a for rational a (central, corner a).
    AffineElem t4(const Rat& a) const {
        AffineElem g = AffineElem::identity(t1.ctx);
        g.z = QuadExt(a);
        return g;
    }
};

namespace detail {

inline LatticeGens gens_with(const LatticeSpec& spec, const QuadExt& c1, const QuadExt& c2) {
    const Mat2Z& S = spec.S;
    EigenData ed = eigen_data(S);
    QuadExt two_disc = QuadExt(2) * ed.sqrt_disc;
    LatticeGens g;
    g.t1 = AffineElem::identity(S);
    g.t1.r13 = QuadExt(Rat(1, 2));
    g.t1.z = c1 - QuadExt(Rat(S.a21)) / two_disc;
    g.t1.x = 1;
    g.t2 = AffineElem::identity(S);
    g.t2.r12 = QuadExt(Rat(-1, 2));
    g.t2.z = c2 - QuadExt(Rat(S.a12)) / two_disc;
    g.t2.y = 1;
    g.t3 = AffineElem::identity(S);
    g.t3.M = S;
    g.t3.l = 1;
    g.t3.z = QuadExt(spec.c3);
    g.t4q = AffineElem::identity(S);
    g.t4q.z = QuadExt(Rat(1, spec.q));
    return g;
}

/// Corner residuals of the two conjugation relations at the given (c1, c2).
inline std::pair<QuadExt, QuadExt> relation_residuals(const LatticeSpec& spec, const QuadExt& c1,
                                                      const QuadExt& c2) {
    LatticeGens g = gens_with(spec, c1, c2);
    const Mat2Z& S = spec.S;
    auto residual = [&](const AffineElem& ti, long long s1, long long s2, const Rat& mi) {
        AffineElem lhs = g.t3 * ti * g.t3.inverse();
        AffineElem rhs = g.t1.pow(s1) * g.t2.pow(s2) * g.t4(mi / spec.q);
        return (lhs * rhs.inverse()).z;
    };
    return {residual(g.t1, S.a11, S.a21, spec.m.x), residual(g.t2, S.a12, S.a22, spec.m.y)};
}

}  // namespace detail

/// The unique exact (c1, c2) in Q(sqrt(T^2-4)) solving both relations.
inline std::pair<QuadExt, QuadExt> solve_c1c2(const LatticeSpec& spec) {
    using detail::relation_residuals;
    QuadExt zero(0), one(1);
    auto f00 = relation_residuals(spec, zero, zero);
    auto f10 = relation_residuals(spec, one, zero);
    auto f01 = relation_residuals(spec, zero, one);
    // F(c) = F(0) + A c with A columns from the probes; solve A c = -F(0).
    QuadExt a11 = f10.first - f00.first, a12 = f01.first - f00.first;
    QuadExt a21 = f10.second - f00.second, a22 = f01.second - f00.second;
    QuadExt det = a11 * a22 - a12 * a21;
    QuadExt b1 = -f00.first, b2 = -f00.second;
    QuadExt c1 = (b1 * a22 - b2 * a12) / det;
    QuadExt c2 = (a11 * b2 - a21 * b1) / det;
    auto check = relation_residuals(spec, c1, c2);
    if (!check.first.is_zero() || !check.second.is_zero())
        throw std::logic_error("solve_c1c2: residuals nonzero at the computed solution");
    return {c1, c2};
}

/// Generators t1, t2, t3, t4^(1/q) with the solved central slots.
inline LatticeGens lattice_generators(const LatticeSpec& spec) {
    auto [c1, c2] = solve_c1c2(spec);
    LatticeGens g = detail::gens_with(spec, c1, c2);
    // Full relation check: t3 t_i t3^{-1} equals its lattice word exactly.
    const Mat2Z& S = spec.S;
    AffineElem lhs1 = g.t3 * g.t1 * g.t3.inverse();
    AffineElem rhs1 = g.t1.pow(S.a11) * g.t2.pow(S.a21) * g.t4(spec.m.x / spec.q);
    AffineElem lhs2 = g.t3 * g.t2 * g.t3.inverse();
    AffineElem rhs2 = g.t1.pow(S.a12) * g.t2.pow(S.a22) * g.t4(spec.m.y / spec.q);
    if (lhs1 != rhs1 || lhs2 != rhs2)
        throw std::logic_error("lattice_generators: conjugation relations fail");
    return g;
}

struct LatticeDecomp {
    long long n1 = 0, n2 = 0;
    Rat n3, n4;  // g = t1^n1 t2^n2 t3^n3 t4^n4 with n4 in (1/q)Z
};

/// Peel a lattice element into exponents with no constraint on the central
/// exponent (n4 may be any rational). Used to detect when relations demand a
/// finer center than t4^(1/q).
inline std::optional<LatticeDecomp> decompose_central_free(const AffineElem& g,
                                                           const LatticeSpec& spec,
                                                           const LatticeGens& gens) {
    if (!(g.ctx == spec.S)) throw ContextMismatch();
    if (g.e != 1 || g.s != 1 || !is_integer(g.l)) return std::nullopt;
    long long n3 = static_cast<long long>(rat_floor(g.l));
    if (!(g.M == spec.S.pow(n3))) return std::nullopt;
    AffineElem h = g * gens.t3.pow(-n3);
    if (!is_integer(h.x) || !is_integer(h.y)) return std::nullopt;
    long long n1 = static_cast<long long>(rat_floor(h.x));
    long long n2 = static_cast<long long>(rat_floor(h.y));
    AffineElem base = gens.t1.pow(n1) * gens.t2.pow(n2) * gens.t3.pow(n3);
    QuadExt resid = g.z - base.z;
    if (!resid.is_rational()) return std::nullopt;
    Rat n4 = resid.as_rat();
    AffineElem t4 = AffineElem::identity(spec.S);
    t4.z = QuadExt(n4);
    if (base * t4 != g) return std::nullopt;
    return LatticeDecomp{n1, n2, Rat(n3), n4};
}

/// Peel a lattice element into exponents, or nullopt when g is not in the
/// lattice span (nontrivial automorphism part, non-integer translation, or a
/// central residual outside (1/q)Z).
inline std::optional<LatticeDecomp> decompose(const AffineElem& g, const LatticeSpec& spec,
                                              const LatticeGens& gens) {
    if (!(g.ctx == spec.S)) throw ContextMismatch();
    if (g.e != 1 || g.s != 1 || !is_integer(g.l)) return std::nullopt;
    long long n3 = static_cast<long long>(rat_floor(g.l));
    if (!(g.M == spec.S.pow(n3))) return std::nullopt;
    AffineElem h = g * gens.t3.pow(-n3);
    if (!is_integer(h.x) || !is_integer(h.y)) return std::nullopt;
    long long n1 = static_cast<long long>(rat_floor(h.x));
    long long n2 = static_cast<long long>(rat_floor(h.y));
    AffineElem base = gens.t1.pow(n1) * gens.t2.pow(n2) * gens.t3.pow(n3);
    QuadExt resid = g.z - base.z;
    if (!resid.is_rational()) return std::nullopt;
    Rat n4 = resid.as_rat();
    if (!is_integer(n4 * spec.q)) return std::nullopt;
    if (base * gens.t4(n4) != g) return std::nullopt;
    return LatticeDecomp{n1, n2, Rat(n3), n4};
}

inline std::optional<LatticeDecomp> decompose(const AffineElem& g, const LatticeSpec& spec) {
    return decompose(g, spec, lattice_generators(spec));
}

/// Smallest q making every listed t4-exponent an integer multiple of 1/q.
inline long long minimal_q(const std::vector<Rat>& t4_exponents) {
    Int l = 1;
    for (const Rat& r : t4_exponents) l = int_lcm(l, den(r));
    return l.convert_to<long long>();
}

}  // namespace solv
