#pragma once

/**
 * @file mat2.hpp
 * @brief 2x2 integer matrix algebra.
 *
 * Mat2Z with determinant/trace/powers, Smith normal form with unimodular
 * transforms, finite cokernel groups Z^2 / M Z^2 (represented inside
 * Q^2 / Z^2 via M^{-1} Z^2), the hyperbolicity ("admissible") predicate,
 * RL-word canonical cycles for trace > 2 conjugacy classes, the
 * GL(2,Z)/weak conjugacy decision with witness, and the S = nK +- I
 * square-root decomposition.
 *
 * Conjugacy uses the classical reduction theory of indefinite binary
 * quadratic forms: the fixed-point form of S is Gauss-reduced with
 * transformation tracking, landing on a totally positive conjugate of S,
 * which factors uniquely over the free monoid generated by
 * R = [[1,1],[0,1]] and L = [[1,0],[1,1]]. The cyclic RL word is a complete
 * SL(2,Z)-conjugacy invariant; conjugation by the swap matrix exchanges the
 * letters, covering GL(2,Z).
 */

#include <solv/rational.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace solv {

struct NotAdmissible : std::domain_error {
    NotAdmissible() : std::domain_error("matrix is not admissible (need det = 1, tr > 2)") {}
};
struct SingularMatrix : std::domain_error {
    SingularMatrix() : std::domain_error("matrix is singular") {}
};

struct Vec2Q {
    Rat x{0}, y{0};

    bool operator==(const Vec2Q&) const = default;
    Vec2Q operator+(const Vec2Q& o) const { return {x + o.x, y + o.y}; }
    Vec2Q operator-(const Vec2Q& o) const { return {x - o.x, y - o.y}; }
    Vec2Q operator-() const { return {-x, -y}; }
    Vec2Q operator*(const Rat& s) const { return {x * s, y * s}; }
    bool is_integral() const { return is_integer(x) && is_integer(y); }
    Vec2Q mod1() const { return {solv::mod1(x), solv::mod1(y)}; }
    bool operator<(const Vec2Q& o) const { return x != o.x ? x < o.x : y < o.y; }
    std::string str() const { return "(" + to_string(x) + "," + to_string(y) + ")"; }
};

struct Mat2Z {
    long long a11 = 1, a12 = 0, a21 = 0, a22 = 1;

    bool operator==(const Mat2Z&) const = default;

    long long det() const { return a11 * a22 - a12 * a21; }
    long long tr() const { return a11 + a22; }

    Mat2Z operator*(const Mat2Z& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2Z operator+(const Mat2Z& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2Z operator-(const Mat2Z& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2Z operator-() const { return {-a11, -a12, -a21, -a22}; }
    Mat2Z operator*(long long s) const { return {s * a11, s * a12, s * a21, s * a22}; }

    Mat2Z transpose() const { return {a11, a21, a12, a22}; }
    Mat2Z adjugate() const { return {a22, -a12, -a21, a11}; }

    /// Inverse for |det| = 1 matrices.
    Mat2Z inverse() const {
        long long d = det();
        if (d != 1 && d != -1) throw std::domain_error("Mat2Z::inverse: matrix not unimodular");
        Mat2Z a = adjugate();
        return d == 1 ? a : -a;
    }

    /// Integer power; negative exponents require |det| = 1.
    Mat2Z pow(long long n) const {
        Mat2Z base = n < 0 ? inverse() : *this;
        if (n < 0) n = -n;
        Mat2Z r;
        while (n > 0) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return r;
    }

    Vec2Q apply(const Vec2Q& v) const {
        return {Rat(a11) * v.x + Rat(a12) * v.y, Rat(a21) * v.x + Rat(a22) * v.y};
    }

    bool is_identity() const { return *this == Mat2Z{}; }
    bool is_diagonal() const { return a12 == 0 && a21 == 0; }

    std::string str() const {
        return "[[" + std::to_string(a11) + "," + std::to_string(a12) + "],[" +
               std::to_string(a21) + "," + std::to_string(a22) + "]]";
    }
};

/// Row-major flat form "a b c d", the interchange format for matrices.
inline std::string flat_str(const Mat2Z& m) {
    return std::to_string(m.a11) + " " + std::to_string(m.a12) + " " + std::to_string(m.a21) +
           " " + std::to_string(m.a22);
}

inline std::optional<Mat2Z> parse_mat(const std::string& s) {
    std::istringstream in(s);
    long long e[4];
    for (long long& v : e)
        if (!(in >> v)) return std::nullopt;
    std::string rest;
    if (in >> rest) return std::nullopt;
    return Mat2Z{e[0], e[1], e[2], e[3]};
}

inline const Mat2Z kIdentity{};
inline const Mat2Z kR{1, 1, 0, 1};
inline const Mat2Z kL{1, 0, 1, 1};
inline const Mat2Z kSwap{0, 1, 1, 0};

inline bool is_admissible(const Mat2Z& s) { return s.det() == 1 && s.tr() > 2; }

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

struct SmithForm {
    Mat2Z U, D, V;  // U * M * V == D, |det U| = |det V| = 1, D diagonal, d1 | d2
};

inline SmithForm smith_normal_form(const Mat2Z& m) {
    Mat2Z U, D = m, V;
    auto swap_rows = [&] {
        std::swap(D.a11, D.a21);
        std::swap(D.a12, D.a22);
        std::swap(U.a11, U.a21);
        std::swap(U.a12, U.a22);
    };
    auto swap_cols = [&] {
        std::swap(D.a11, D.a12);
        std::swap(D.a21, D.a22);
        std::swap(V.a11, V.a12);
        std::swap(V.a21, V.a22);
    };
    auto row2_minus = [&](long long q) {  // row2 -= q * row1
        D.a21 -= q * D.a11;
        D.a22 -= q * D.a12;
        U.a21 -= q * U.a11;
        U.a22 -= q * U.a12;
    };
    auto col2_minus = [&](long long q) {  // col2 -= q * col1
        D.a12 -= q * D.a11;
        D.a22 -= q * D.a21;
        V.a12 -= q * V.a11;
        V.a22 -= q * V.a21;
    };
    auto col1_plus_col2 = [&] {
        D.a11 += D.a12;
        D.a21 += D.a22;
        V.a11 += V.a12;
        V.a21 += V.a22;
    };

    if (D.a11 == 0) {
        if (D.a21 != 0)
            swap_rows();
        else if (D.a12 != 0)
            swap_cols();
        else if (D.a22 != 0) {
            swap_rows();
            swap_cols();
        }
    }
    while (D.a11 != 0) {
        if (D.a21 != 0) {
            row2_minus(D.a21 / D.a11);
            if (D.a21 != 0) swap_rows();
            continue;
        }
        if (D.a12 != 0) {
            col2_minus(D.a12 / D.a11);
            if (D.a12 != 0) swap_cols();
            continue;
        }
        if (D.a22 != 0 && D.a22 % D.a11 != 0) {
            col1_plus_col2();
            continue;
        }
        break;
    }
    // Sign normalization: d1, d2 >= 0 via row negation.
    if (D.a11 < 0) {
        D.a11 = -D.a11;
        D.a12 = -D.a12;
        U.a11 = -U.a11;
        U.a12 = -U.a12;
    }
    if (D.a22 < 0) {
        D.a22 = -D.a22;
        U.a21 = -U.a21;
        U.a22 = -U.a22;
    }
    return {U, D, V};
}

// ---------------------------------------------------------------------------
// Cokernel  Z^2 / M Z^2  realized as  M^{-1} Z^2 / Z^2  inside [0,1)^2
// ---------------------------------------------------------------------------

struct CokerGroup {
    Mat2Z source;                     // the matrix M
    long long d1 = 1, d2 = 1;         // invariant factors, d1 | d2
    std::vector<Vec2Q> elements;      // representatives in [0,1)^2, sorted

    long long order() const { return d1 * d2; }

    /// Canonical representative of v modulo Z^2.
    Vec2Q reduce(const Vec2Q& v) const { return v.mod1(); }

    /// Membership: v represents an element of M^{-1} Z^2 / Z^2.
    bool contains(const Vec2Q& v) const { return source.apply(v).is_integral(); }

    /// Canonical *integer* label of z in Z^2 / M Z^2 (used for the m-vectors).
    Vec2Q reduce_int(const Vec2Q& z) const {
        Rat d(source.det());
        Mat2Z adj = source.adjugate();
        Vec2Q v{(Rat(adj.a11) * z.x + Rat(adj.a12) * z.y) / d,
                (Rat(adj.a21) * z.x + Rat(adj.a22) * z.y) / d};
        return source.apply(v.mod1());
    }
};

inline CokerGroup cokernel(const Mat2Z& m) {
    long long d = m.det();
    if (d == 0) throw SingularMatrix();
    CokerGroup g;
    g.source = m;
    SmithForm sf = smith_normal_form(m);
    g.d1 = sf.D.a11;
    g.d2 = sf.D.a22;
    // Generators of M^{-1} Z^2 / Z^2: columns of adj(M)/det.
    Mat2Z adj = m.adjugate();
    Rat rd(d);
    Vec2Q g1{Rat(adj.a11) / rd, Rat(adj.a21) / rd}, g2{Rat(adj.a12) / rd, Rat(adj.a22) / rd};
    std::set<Vec2Q> seen;
    long long n = d < 0 ? -d : d;
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) seen.insert(((g1 * Rat(i)) + (g2 * Rat(j))).mod1());
    g.elements.assign(seen.begin(), seen.end());
    if (static_cast<long long>(g.elements.size()) != n)
        throw std::logic_error("cokernel: element count mismatch");
    return g;
}

// ---------------------------------------------------------------------------
// RL words and weak conjugacy
// ---------------------------------------------------------------------------

struct RLWord {
    std::vector<char> cycle;  // letters 'R', 'L'; the positive factorization
    Mat2Z U;                  // U^{-1} S U equals the word, read left to right
};

namespace detail {

// One Gauss reduction step on the indefinite form (a,b,c) of discriminant
// disc, with floor(sqrt(disc)) = sq. Returns the step matrix [[0,-1],[1,m]].
inline Mat2Z form_step(long long& a, long long& b, long long& c, long long disc, long long sq) {
    long long cc = c < 0 ? -c : c;
    if (cc == 0) throw std::logic_error("form_step: degenerate form");
    // r = -b mod 2cc shifted into the standard window.
    long long lo = cc > sq ? -cc + 1 : sq - 2 * cc + 1;  // window [lo, lo + 2cc)
    long long r = (-b - lo) % (2 * cc);
    if (r < 0) r += 2 * cc;
    r += lo;
    long long m = (b + r) / (2 * c);
    long long a2 = c, b2 = r, c2 = (r * r - disc) / (4 * c);
    a = a2;
    b = b2;
    c = c2;
    return Mat2Z{0, -1, 1, m};
}

inline bool form_reduced(long long a, long long b, long long /*c*/, long long sq) {
    long long aa = a < 0 ? -a : a;
    return b > 0 && b <= sq && sq - b < 2 * aa && 2 * aa <= sq + b;
}

}  // namespace detail

/// Canonical RL cycle of an admissible matrix, with conjugator.
inline RLWord rl_word(const Mat2Z& s) {
    if (!is_admissible(s)) throw NotAdmissible();
    long long T = s.tr();
    long long disc = T * T - 4;
    long long sq = static_cast<long long>(sqrt(Int(disc)));
    // Fixed-point form of S.
    long long a = s.a21, b = s.a22 - s.a11, c = -s.a12;
    Mat2Z U;
    int guard = 0;
    while (!detail::form_reduced(a, b, c, sq)) {
        U = U * detail::form_step(a, b, c, disc, sq);
        if (++guard > 4096) throw std::logic_error("rl_word: reduction failed to terminate");
    }
    if (a < 0) U = U * detail::form_step(a, b, c, disc, sq);  // land on positive a

    Mat2Z M = U.inverse() * s * U;
    if (M.a11 < 0 || M.a12 < 0 || M.a21 < 0 || M.a22 < 0)
        throw std::logic_error("rl_word: reduction did not reach the positive monoid");

    RLWord w;
    w.U = U;
    Mat2Z X = M;
    while (!X.is_identity()) {
        Mat2Z rx{X.a11 - X.a21, X.a12 - X.a22, X.a21, X.a22};   // R^{-1} X
        Mat2Z lx{X.a11, X.a12, X.a21 - X.a11, X.a22 - X.a12};   // L^{-1} X
        bool rok = rx.a11 >= 0 && rx.a12 >= 0 && rx.a21 >= 0 && rx.a22 >= 0;
        if (rok && !(rx == X)) {
            w.cycle.push_back('R');
            X = rx;
        } else {
            bool lok = lx.a11 >= 0 && lx.a12 >= 0 && lx.a21 >= 0 && lx.a22 >= 0;
            if (!lok || lx == X) throw std::logic_error("rl_word: peeling stuck");
            w.cycle.push_back('L');
            X = lx;
        }
        if (w.cycle.size() > 1u << 20) throw std::logic_error("rl_word: word too long");
    }
    return w;
}

enum class ConjVerdict { NotConjugate, ConjugateSL, ConjugateGLOnly, ConjugateToInverse };

struct ConjResult {
    ConjVerdict verdict = ConjVerdict::NotConjugate;
    std::optional<Mat2Z> witness;  // B with B*S1*B^{-1} == S2 (or S2^{-1} for the inverse verdict)
    bool to_inverse = false;       // witness conjugates onto S2^{-1}
};

namespace detail {

// If cyc1 rotated by r equals cyc2, return r.
inline std::optional<size_t> cycle_rotation(const std::vector<char>& c1,
                                            const std::vector<char>& c2) {
    if (c1.size() != c2.size()) return std::nullopt;
    size_t n = c1.size();
    for (size_t r = 0; r < n; ++r) {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) ok = c1[(i + r) % n] == c2[i];
        if (ok) return r;
    }
    return std::nullopt;
}

inline Mat2Z word_prefix(const std::vector<char>& w, size_t k) {
    Mat2Z p;
    for (size_t i = 0; i < k; ++i) p = p * (w[i] == 'R' ? kR : kL);
    return p;
}

}  // namespace detail

/// Decide weak conjugacy of two admissible matrices, with witness.
inline ConjResult weakly_conjugate(const Mat2Z& s1, const Mat2Z& s2) {
    if (!is_admissible(s1) || !is_admissible(s2)) throw NotAdmissible();
    ConjResult res;
    if (s1.tr() != s2.tr()) return res;
    RLWord w1 = rl_word(s1);

    struct Variant {
        Mat2Z target;       // conjugate S1 onto this
        bool pre_swap;      // compose the swap matrix on the left of the witness
        ConjVerdict verdict;
        bool to_inverse;
    };
    Mat2Z s2i = s2.inverse();
    const Variant variants[] = {
        {s2, false, ConjVerdict::ConjugateSL, false},
        {kSwap * s2 * kSwap, true, ConjVerdict::ConjugateGLOnly, false},
        {s2i, false, ConjVerdict::ConjugateToInverse, true},
        {kSwap * s2i * kSwap, true, ConjVerdict::ConjugateToInverse, true},
    };
    for (const Variant& v : variants) {
        RLWord wv = rl_word(v.target);
        auto rot = detail::cycle_rotation(w1.cycle, wv.cycle);
        if (!rot) continue;
        Mat2Z P = detail::word_prefix(w1.cycle, *rot);
        // (w1 rotated by rot) = wv, so P^{-1} (U1^{-1} S1 U1) P = Uv^{-1} target Uv.
        Mat2Z B = wv.U * P.inverse() * w1.U.inverse();
        if (v.pre_swap) B = kSwap * B;
        Mat2Z expect = v.to_inverse ? s2i : s2;
        if (v.pre_swap) expect = v.to_inverse ? s2i : s2;  // swap already folded into B
        if (!(B * s1 * B.inverse() == expect))
            throw std::logic_error("weakly_conjugate: witness check failed");
        res.verdict = v.verdict;
        res.witness = B;
        res.to_inverse = v.to_inverse;
        return res;
    }
    return res;
}

/// One representative per weak-conjugacy class of admissible matrices with
/// tr <= trace_max: every class is the product of an RL cycle, so walk the
/// binary words depth-first and deduplicate. Products of R and L have
/// nonnegative entries and diagonal >= 1, so appending letters never lowers
/// the trace of the final cyclic product below the trace of a prefix; a
/// prefix with tr > trace_max is pruned with its whole subtree, which keeps
/// the walk polynomial even though the slowest-growing family R^(n)L needs
/// word length trace_max - 1. Sorted by trace, then lexicographically.
inline std::vector<Mat2Z> conjugacy_class_reps(long long trace_max) {
    std::vector<Mat2Z> reps;
    if (trace_max < 3) return reps;
    auto consider = [&](const Mat2Z& m) {
        if (!(m.det() == 1 && m.tr() > 2 && m.tr() <= trace_max)) return;
        for (const Mat2Z& r : reps)
            if (r.tr() == m.tr() && weakly_conjugate(r, m).verdict != ConjVerdict::NotConjugate)
                return;
        reps.push_back(m);
    };
    Mat2Z r{1, 1, 0, 1}, l{1, 0, 1, 1};
    std::function<void(const Mat2Z&)> walk = [&](const Mat2Z& prefix) {
        // An off-diagonal entry > trace_max also dooms every admissible
        // completion: the suffix must supply the opposite letter, whose
        // product then carries that entry into the trace.
        if (prefix.tr() > trace_max ||
            std::max({prefix.a11, prefix.a12, prefix.a21, prefix.a22}) > trace_max)
            return;
        consider(prefix);
        walk(prefix * r);
        walk(prefix * l);
    };
    // Words starting with R suffice: an L-initial cycle is a rotation.
    walk(r);
    std::sort(reps.begin(), reps.end(), [](const Mat2Z& a, const Mat2Z& b) {
        if (a.tr() != b.tr()) return a.tr() < b.tr();
        return std::tie(a.a11, a.a12, a.a21, a.a22) < std::tie(b.a11, b.a12, b.a21, b.a22);
    });
    return reps;
}

// ---------------------------------------------------------------------------
// S = nK + I / nK - I decomposition
// ---------------------------------------------------------------------------

struct NKDecomposition {
    long long n;
    Mat2Z K;
};

/// sign=+1: S = nK + I with det K = -1, tr K = n > 0.
/// sign=-1: S = nK - I with det K = +1, tr K = n > 2.
inline std::optional<NKDecomposition> decompose_nK(const Mat2Z& s, int sign) {
    if (!is_admissible(s)) throw NotAdmissible();
    long long t = sign > 0 ? s.tr() - 2 : s.tr() + 2;
    Int root;
    if (!is_perfect_square(Int(t), &root)) return std::nullopt;
    long long n = static_cast<long long>(root);
    if (sign > 0 ? n <= 0 : n <= 2) return std::nullopt;
    Mat2Z num = sign > 0 ? s - kIdentity : s + kIdentity;
    if (num.a11 % n || num.a12 % n || num.a21 % n || num.a22 % n) return std::nullopt;
    Mat2Z K{num.a11 / n, num.a12 / n, num.a21 / n, num.a22 / n};
    if (K.det() != (sign > 0 ? -1 : 1) || K.tr() != n) return std::nullopt;
    return NKDecomposition{n, K};
}

}  // namespace solv
