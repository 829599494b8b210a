#pragma once

/**
 * @file affine.hpp
 * @brief Exact 5x5 affine realization over Q(sqrt(T^2-4)).
 *
 * After conjugating the standard representation by the eigenbasis block, every
 * group element becomes the 5x5 matrix
 *
 *     [ e  r12 r13  0   z  ]
 *     [ 0  m11 m12  0   x  ]
 *     [ 0  m21 m22  0   y  ]
 *     [ 0   0   0   s  l*L ]
 *     [ 0   0   0   0   1  ]
 *
 * with e, s in {+1,-1}, an integral middle block, rational translation (x,y),
 * and L = ln(lambda) kept as a formal symbol: the column of zeros above s
 * guarantees the log slot never mixes into the Q(sqrt(d)) entries, so l is an
 * exact rational multiple of L. The first-row entries r12, r13, z live in
 * Q(sqrt(T^2-4)).
 *
 * Elements carry their context S; multiplying elements over different S is a
 * ContextMismatch.
 */

#include <solv/mat2.hpp>
#include <solv/quadratic.hpp>

#include <stdexcept>
#include <string>

namespace solv {

struct ContextMismatch : std::domain_error {
    ContextMismatch() : std::domain_error("AffineElem: operands have different contexts") {}
};

/// Exact eigenvalue data of an admissible S: lambda = (T + sqrt(T^2-4))/2 > 1.
struct EigenData {
    long long T = 0;
    QuadExt sqrt_disc;  // sqrt(T^2 - 4), square-free normalized
    QuadExt lambda;
};

inline EigenData eigen_data(const Mat2Z& S) {
    if (!is_admissible(S)) throw NotAdmissible();
    EigenData e;
    e.T = S.tr();
    e.sqrt_disc = quad_normalize(Rat(0), Rat(1), Int(e.T * e.T - 4));
    e.lambda = (QuadExt(Rat(e.T)) + e.sqrt_disc) / QuadExt(2);
    return e;
}

struct AffineElem {
    Mat2Z ctx;           // the S this element lives over
    int e = 1;           // (1,1) sign: determinant of the automorphism part
    QuadExt r12, r13;    // first-row pairing slots
    QuadExt z;           // (1,5) corner
    Mat2Z M;             // middle block
    Rat x, y;            // translation
    int s = 1;           // (4,4) sign
    Rat l;               // (4,5), as a multiple of ln(lambda)

    static AffineElem identity(const Mat2Z& S) {
        AffineElem g;
        g.ctx = S;
        return g;
    }

    bool is_identity() const {
        return e == 1 && r12.is_zero() && r13.is_zero() && z.is_zero() && M.is_identity() &&
               x == 0 && y == 0 && s == 1 && l == 0;
    }

    bool operator==(const AffineElem& o) const {
        return ctx == o.ctx && e == o.e && r12 == o.r12 && r13 == o.r13 && z == o.z &&
               M == o.M && x == o.x && y == o.y && s == o.s && l == o.l;
    }
    bool operator!=(const AffineElem& o) const { return !(*this == o); }

    /// Pairing of the first row with a translation column.
    QuadExt pair(const Rat& tx, const Rat& ty) const { return r12 * QuadExt(tx) + r13 * QuadExt(ty); }

    friend AffineElem operator*(const AffineElem& g, const AffineElem& h) {
        if (!(g.ctx == h.ctx)) throw ContextMismatch();
        AffineElem p;
        p.ctx = g.ctx;
        p.e = g.e * h.e;
        QuadExt ge{Rat(g.e)};
        p.r12 = ge * h.r12 + g.r12 * QuadExt(Rat(h.M.a11)) + g.r13 * QuadExt(Rat(h.M.a21));
        p.r13 = ge * h.r13 + g.r12 * QuadExt(Rat(h.M.a12)) + g.r13 * QuadExt(Rat(h.M.a22));
        p.z = ge * h.z + g.pair(h.x, h.y) + g.z;
        p.M = g.M * h.M;
        p.x = Rat(g.M.a11) * h.x + Rat(g.M.a12) * h.y + g.x;
        p.y = Rat(g.M.a21) * h.x + Rat(g.M.a22) * h.y + g.y;
        p.s = g.s * h.s;
        p.l = Rat(g.s) * h.l + g.l;
        return p;
    }

    AffineElem inverse() const {
        AffineElem p;
        p.ctx = ctx;
        p.e = e;
        p.M = M.inverse();
        p.x = -(Rat(p.M.a11) * x + Rat(p.M.a12) * y);
        p.y = -(Rat(p.M.a21) * x + Rat(p.M.a22) * y);
        p.s = s;
        p.l = -Rat(s) * l;
        QuadExt se{Rat(e)};
        p.r12 = -(se * (r12 * QuadExt(Rat(p.M.a11)) + r13 * QuadExt(Rat(p.M.a21))));
        p.r13 = -(se * (r12 * QuadExt(Rat(p.M.a12)) + r13 * QuadExt(Rat(p.M.a22))));
        p.z = -(se * z) - se * pair(p.x, p.y);
        return p;
    }

    AffineElem pow(long long n) const {
        AffineElem base = n < 0 ? inverse() : *this;
        long long k = n < 0 ? -n : n;
        AffineElem acc = identity(ctx);
        while (k > 0) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    /// Rational power of a unipotent element (trivial automorphism part):
    /// r -> a r, x -> a x, z -> a z + (a(a-1)/2) * (r . x).
    AffineElem rat_pow(const Rat& a) const {
        if (!(e == 1 && M.is_identity() && s == 1 && l == 0))
            throw std::domain_error("rat_pow: element is not unipotent");
        AffineElem p = identity(ctx);
        QuadExt qa{a};
        p.r12 = qa * r12;
        p.r13 = qa * r13;
        p.x = a * x;
        p.y = a * y;
        p.z = qa * z + QuadExt(a * (a - 1) / 2) * pair(x, y);
        return p;
    }

    /// 5x5 grid of exact entries, with the formal ln(lambda) annotation.
    std::string str() const {
        auto q = [](const QuadExt& v) { return v.str(); };
        auto rr = [](const Rat& v) { return to_string(v); };
        std::string out;
        out += "[" + std::to_string(e) + ", " + q(r12) + ", " + q(r13) + ", 0, " + q(z) + "]\n";
        out += "[0, " + std::to_string(M.a11) + ", " + std::to_string(M.a12) + ", 0, " + rr(x) +
               "]\n";
        out += "[0, " + std::to_string(M.a21) + ", " + std::to_string(M.a22) + ", 0, " + rr(y) +
               "]\n";
        out += "[0, 0, 0, " + std::to_string(s) + ", " + rr(l) + "*ln(lambda)]\n";
        out += "[0, 0, 0, 0, 1]";
        return out;
    }
};

}  // namespace solv
