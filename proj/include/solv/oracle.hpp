#pragma once

/**
 * @file oracle.hpp
 * @brief Independent bounded-search checks for the closed-form results.
 *
 * Three oracles, each deliberately dumb:
 *
 *  - torsion_search walks lattice-translated coset representatives and tests
 *    finite order directly in the affine realization, using only the fact
 *    that a central factor t4^c shifts the p-th power's corner by (sum of
 *    signs) * c;
 *  - weakly_conjugate_bruteforce searches words in the elementary matrices
 *    for a conjugator;
 *  - h1_bruteforce counts translation-part classes by enumerating candidate
 *    vectors on a covering grid and orbiting them under lattice-preserving
 *    translation conjugations.
 *
 * None of them consult the per-type closed forms they are meant to check.
 */

#include <solv/crystal.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace solv {

// ---------------------------------------------------------------------------
// Torsion search
// ---------------------------------------------------------------------------

struct TorsionWitness {
    std::string word;     // element whose power collapses, e.g. "t2 t3 a t4^(-1/2)"
    long long order = 1;  // the verified finite order
};

struct OracleTorsionResult {
    bool torsion_free = true;
    std::optional<TorsionWitness> witness;
};

namespace detail {

struct CosetRep {
    AffineElem g;
    Mat2Z A;  // image in the holonomy group
    std::string word;
};

/// One representative per nontrivial holonomy element, as short words in the
/// spec's generators.
inline std::vector<CosetRep> coset_reps(const CrystGroupSpec& spec, const BuildCtx& c) {
    std::vector<CosetRep> reps;
    std::vector<CosetRep> frontier{{AffineElem::identity(spec.lattice.S), kIdentity, ""}};
    std::vector<std::pair<AffineElem, Mat2Z>> gens;
    std::vector<std::string> names;
    if (c.alpha) {
        gens.push_back({*c.alpha, spec.holonomy.alpha->A});
        names.push_back("a");
    }
    if (c.beta) {
        gens.push_back({*c.beta, spec.holonomy.beta->A});
        names.push_back("b");
    }
    auto seen = [&](const Mat2Z& A) {
        if (A.is_identity()) return true;
        for (const CosetRep& r : reps)
            if (r.A == A) return true;
        return false;
    };
    for (int len = 0; len < 4; ++len) {
        std::vector<CosetRep> next;
        for (const CosetRep& r : frontier)
            for (std::size_t i = 0; i < gens.size(); ++i) {
                CosetRep n{r.g * gens[i].first, r.A * gens[i].second,
                           r.word.empty() ? names[i] : r.word + " " + names[i]};
                next.push_back(n);
                if (!seen(n.A)) reps.push_back(n);
            }
        frontier = std::move(next);
    }
    return reps;
}

inline long long d4_order(const Mat2Z& A) { return (A * A).is_identity() ? 2 : 4; }

inline std::string power_word(const std::string& base, const Rat& t4_shift, long long p) {
    std::string w = base;
    if (t4_shift != 0) w += " t4^(" + to_string(t4_shift) + ")";
    return "(" + w + ")^" + std::to_string(p);
}

}  // namespace detail

/// Bounded search for a torsion element of the group (quotient = false) or of
/// its Sol^3 projection (quotient = true). Sound in both directions on the
/// searched region: any returned witness is verified in the representation.
inline OracleTorsionResult torsion_search(const CrystGroupSpec& spec, long long bound = 6,
                                          bool quotient = false) {
    detail::BuildCtx c = detail::build_ctx(spec);
    const long long q = spec.lattice.q;
    // Translation exponents in absolute-value order, so the first witness
    // found is a smallest one (e.g. plain (a)^2 when it folds).
    std::vector<long long> ns{0};
    for (long long n = 1; n <= bound; ++n) {
        ns.push_back(n);
        ns.push_back(-n);
    }
    for (const detail::CosetRep& rep : detail::coset_reps(spec, c)) {
        long long p = detail::d4_order(rep.A);
        std::vector<long long> n3s = p == 4 ? std::vector<long long>{0, 1, -1}
                                            : std::vector<long long>{0, 1};
        for (long long n1 : ns)
            for (long long n2 : ns)
                for (long long n3 : n3s) {
                    AffineElem g =
                        c.gens.t1.pow(n1) * c.gens.t2.pow(n2) * c.gens.t3.pow(n3) * rep.g;
                    AffineElem gp = g.pow(p);
                    if (!(gp.M.is_identity() && gp.x == 0 && gp.y == 0 && gp.s == 1 &&
                          gp.l == 0))
                        continue;
                    std::string base =
                        (n1 ? "t1^" + std::to_string(n1) + " " : std::string()) +
                        (n2 ? "t2^" + std::to_string(n2) + " " : std::string()) +
                        (n3 ? "t3^" + std::to_string(n3) + " " : std::string()) + rep.word;
                    if (quotient)
                        // The center is collapsed: the projected power is
                        // already trivial.
                        return {false, TorsionWitness{detail::power_word(base, 0, p), p}};
                    if (!(gp.r12.is_zero() && gp.r13.is_zero() && gp.e == 1)) continue;
                    if (!gp.z.is_rational()) continue;
                    Rat z = gp.z.as_rat();
                    if (g.e == 1) {
                        // (g t4^c)^p = g^p t4^(p c): need c = -z/p in (1/q)Z.
                        Rat cshift = -z / p;
                        if (is_integer(cshift * q))
                            return {false,
                                    TorsionWitness{detail::power_word(base, cshift, p), p}};
                    } else if (z == 0) {
                        // Central shifts cancel in the power; g itself folds.
                        return {false, TorsionWitness{detail::power_word(base, 0, p), p}};
                    }
                }
    }
    return {true, std::nullopt};
}

/// Closed-form torsion verdict decorated with an oracle witness when the
/// group (or its projection) has torsion.
inline TorsionReport torsion_report_with_witness(const CrystGroupSpec& spec, long long bound = 6,
                                                 bool quotient = false) {
    TorsionReport rep = quotient ? quotient_is_torsion_free(spec) : is_torsion_free(spec);
    if (!rep.torsion_free) {
        OracleTorsionResult found = torsion_search(spec, bound, quotient);
        if (found.witness) rep.witness = found.witness->word + " = id";
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Weak conjugacy by word search
// ---------------------------------------------------------------------------

namespace detail {

inline std::array<long long, 4> mat_key(const Mat2Z& m) {
    return {m.a11, m.a12, m.a21, m.a22};
}

inline long long max_abs_entry(const Mat2Z& m) {
    return std::max({llabs(m.a11), llabs(m.a12), llabs(m.a21), llabs(m.a22)});
}

/// Conjugation ball of S: all B S B^-1 for words B of length <= max_len in
/// {R, L, R^-1, L^-1, swap} whose intermediate conjugates stay within the
/// entry cap, each with the (shortest-word) conjugator that produced it.
inline std::vector<std::pair<Mat2Z, Mat2Z>> conjugation_ball(const Mat2Z& S, int max_len,
                                                             long long cap) {
    const Mat2Z gens[] = {kR, kL, kR.inverse(), kL.inverse(), kSwap};
    std::set<std::array<long long, 4>> visited{mat_key(S)};
    std::vector<std::pair<Mat2Z, Mat2Z>> ball{{S, kIdentity}}, frontier = ball;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::pair<Mat2Z, Mat2Z>> next;
        for (const auto& [m, b] : frontier)
            for (const Mat2Z& g : gens) {
                Mat2Z n = g * m * g.inverse();
                if (max_abs_entry(n) > cap) continue;
                if (!visited.insert(mat_key(n)).second) continue;
                next.push_back({n, g * b});
            }
        ball.insert(ball.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return ball;
}

}  // namespace detail

/// Search words in {R, L, R^-1, L^-1, swap} for B with B S1 B^-1 in
/// {S2, S2^-1}, by walking the bounded conjugation ball of S1. The returned
/// conjugator has minimal word length within the searched ball.
inline std::optional<Mat2Z> weakly_conjugate_bruteforce(const Mat2Z& S1, const Mat2Z& S2,
                                                        int max_len = 12,
                                                        long long entry_cap = 0) {
    if (entry_cap == 0)
        entry_cap = 4 * std::max(detail::max_abs_entry(S1), detail::max_abs_entry(S2)) + 32;
    Mat2Z s2i = S2.inverse();
    for (const auto& [m, b] : detail::conjugation_ball(S1, max_len, entry_cap))
        if (m == S2 || m == s2i) return b;
    return std::nullopt;
}

/// Canonical representative of the bounded weak-conjugacy ball: the
/// lexicographically least element over both S and S^-1. Two matrices in the
/// same class share it as long as the ball reaches the reduced forms.
inline Mat2Z conjugacy_key_bruteforce(const Mat2Z& S, int max_len = 12, long long entry_cap = 0) {
    if (entry_cap == 0) entry_cap = 4 * detail::max_abs_entry(S) + 32;
    Mat2Z best = S;
    for (const Mat2Z& start : {S, S.inverse()})
        for (const auto& [m, b] : detail::conjugation_ball(start, max_len, entry_cap))
            if (detail::mat_key(m) < detail::mat_key(best)) best = m;
    return best;
}

/// Matrices for a full concordance grid over tr <= trace_max: one weak-class
/// representative plus, per class, conjugates realizing the holonomy types the
/// representative's shape misses (rotation and reflection types want symmetric
/// or anti-symmetric forms that RL-word products never take). The ball of the
/// representative and of its inverse are scanned; a conjugate is kept exactly
/// when it contributes a type tag not yet seen for the class. Deterministic
/// order: representative first, then ball (BFS) order.
inline std::vector<Mat2Z> concordance_matrices(long long trace_max, int ball_len = 10,
                                               long long entry_cap = 64) {
    std::vector<Mat2Z> out;
    for (const Mat2Z& rep : conjugacy_class_reps(trace_max)) {
        std::set<TypeTag> covered;
        auto consider = [&](const Mat2Z& m) {
            bool fresh = false;
            for (const HolonomySpec& h : compatible_types(m))
                fresh = covered.insert(h.tag).second || fresh;
            if (fresh) out.push_back(m);
        };
        consider(rep);
        for (const Mat2Z& start : {rep, rep.inverse()})
            for (const auto& [m, b] : detail::conjugation_ball(start, ball_len, entry_cap))
                consider(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// H^1 by grid search
// ---------------------------------------------------------------------------

namespace detail {

/// Covering grid (1/g)Z^2 in [0,1)^2.
inline std::vector<Vec2Q> grid_points(long long g) {
    std::vector<Vec2Q> out;
    for (long long i = 0; i < g; ++i)
        for (long long j = 0; j < g; ++j) out.push_back({Rat(i, g), Rat(j, g)});
    return out;
}

/// Do the defining relations close up over the lattice (any central part
/// allowed)? Relations naming only one holonomy generator can be checked in
/// isolation via the skip filter: block 'a' skips everything mentioning b and
/// vice versa, 0 checks all.
inline bool relations_close(const HolonomySpec& h, const BuildCtx& lattice_part,
                            const CocycleClass& cls, char block) {
    BuildCtx c = lattice_part;
    if (h.alpha) c.alpha = holonomy_elem(c.gens, *h.alpha, cls.a, 0, 0);
    if (h.beta) c.beta = holonomy_elem(c.gens, *h.beta, beta_translation(h, cls), 0, 0);
    for (const RelTerm& t : relation_terms(h, c)) {
        if (block == 'a' && t.name.find('b') != std::string::npos) continue;
        if (block == 'b' && t.name.find('a') != std::string::npos) continue;
        if (!decompose_central_free(t.elem, c.lat, c.gens)) return false;
    }
    return true;
}

}  // namespace detail

/// Number of translation-part classes for the type, by brute force: candidate
/// vectors on a covering grid are kept when every relation closes over the
/// lattice, then orbited under conjugation by the lattice-preserving
/// translations tau_v. Mirrors the spec shapes (which slots are pinned to
/// zero) but none of the per-type congruence conditions.
inline long long h1_bruteforce(const HolonomySpec& h) {
    using detail::grid_points;
    if (!h.alpha) return 1;
    const long long D = llabs((kIdentity - h.S).det());
    const bool free_a = !(h.tag == TypeTag::T1 || h.tag == TypeTag::T2b || h.tag == TypeTag::T5);
    const bool free_b =
        h.beta && (h.tag == TypeTag::T5 || h.tag == TypeTag::T6a || h.tag == TypeTag::T6ai);
    const Vec2Q zero{Rat(0), Rat(0)};
    auto maybe_b = [&](const Vec2Q& b) {
        return free_b ? std::optional<Vec2Q>(b) : std::nullopt;
    };

    // Lattice part of the context is class-independent; build it once.
    detail::BuildCtx lp = detail::build_ctx(h, {zero, maybe_b(zero)}, 1, zero, 0, 0, 0);

    // Candidate sets per slot (each block's relations in isolation), then the
    // coupled relations re-checked pairwise.
    std::vector<Vec2Q> cand_a{zero}, cand_b{zero};
    if (free_a) {
        // Cheap prefilter: the g t3 g^-1 translation part (I - S^bar) a must
        // be integral; the survivors get the full relation check.
        Mat2Z pre_a = kIdentity - h.S.pow(h.alpha->bar);
        cand_a.clear();
        for (const Vec2Q& a : grid_points(2 * D))
            if (pre_a.apply(a).is_integral() &&
                detail::relations_close(h, lp, {a, maybe_b(zero)}, 'a'))
                cand_a.push_back(a);
    }
    if (free_b) {
        Mat2Z pre_b = kIdentity - h.S.pow(h.beta->bar);
        cand_b.clear();
        for (const Vec2Q& b : grid_points(2 * D))
            if (pre_b.apply(b).is_integral() &&
                detail::relations_close(h, lp, {zero, b}, 'b'))
                cand_b.push_back(b);
    }
    std::vector<CocycleClass> cocycles;
    for (const Vec2Q& a : cand_a)
        for (const Vec2Q& b : cand_b) {
            CocycleClass cls{a, maybe_b(b)};
            if (detail::relations_close(h, lp, cls, 0)) cocycles.push_back(cls);
            if (!free_b) break;
        }

    // Lattice-preserving translation conjugations: (I - S) v integral, and v
    // must keep the pinned slots pinned.
    std::vector<CocycleClass> shifts;
    for (const Vec2Q& v : cokernel(kIdentity - h.S).elements) {
        Vec2Q da = detail::vmod1((kIdentity - h.alpha->phi).apply(v));
        std::optional<Vec2Q> db;
        if (h.beta) {
            Vec2Q shift_b = detail::vmod1((kIdentity - h.beta->phi).apply(v));
            if (free_b)
                db = shift_b;
            else if (!detail::vzero(shift_b))
                continue;  // would unpin the beta translation
        }
        if (!free_a && !detail::vzero(da)) continue;
        shifts.push_back({da, db});
    }

    // Orbit count.
    std::sort(cocycles.begin(), cocycles.end());
    std::vector<CocycleClass> span = detail::subgroup_span(shifts, {zero, free_b
                                                                              ? std::optional<Vec2Q>(zero)
                                                                              : std::nullopt});
    long long orbits = 0;
    std::vector<CocycleClass> covered;
    for (const CocycleClass& c : cocycles) {
        if (std::find(covered.begin(), covered.end(), c) != covered.end()) continue;
        ++orbits;
        for (const CocycleClass& s : span) covered.push_back(detail::cadd(c, s));
    }
    return orbits;
}

}  // namespace solv
