#pragma once

/**
 * @file quadratic.hpp
 * @brief Exact arithmetic in real quadratic extensions Q(sqrt(d)).
 *
 * A QuadExt is a + b*sqrt(d) with rational a, b and a square-free integer
 * d > 1; purely rational values are normalized to the sentinel d = 1 so that
 * equality is component-wise. Construction from a non-square-free radicand
 * folds the square factor into b (sqrt(1152) becomes 24*sqrt(2)).
 *
 * Ordering tests are exact sign computations (compare a^2 with b^2*d),
 * never floating point. Division rationalizes by the conjugate.
 */

#include <solv/rational.hpp>

#include <stdexcept>
#include <string>

namespace solv {

struct MixedFields : std::domain_error {
    MixedFields() : std::domain_error("QuadExt: operands lie in different quadratic fields") {}
};
struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("QuadExt: division by zero") {}
};

/// Square-free kernel: d_raw = f^2 * kernel with kernel square-free.
inline void squarefree_split(const Int& d_raw, Int& kernel, Int& factor) {
    if (d_raw <= 0) throw std::domain_error("squarefree_split: radicand must be positive");
    kernel = 1;
    factor = 1;
    Int n = d_raw;
    for (Int p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
            n /= p * p;
            factor *= p;
        }
        if (n % p == 0) {
            n /= p;
            kernel *= p;
        }
    }
    kernel *= n;
}

class QuadExt {
    Rat a_;  // rational part
    Rat b_;  // coefficient of sqrt(d)
    Int d_;  // square-free, > 1; sentinel 1 when b_ == 0

    void normalize() {
        if (b_ == 0) d_ = 1;
        if (d_ == 1) {
            a_ += b_;
            b_ = 0;
        }
    }

  public:
    QuadExt() : a_(0), b_(0), d_(1) {}
    QuadExt(const Rat& a) : a_(a), b_(0), d_(1) {}
    QuadExt(int a) : a_(a), b_(0), d_(1) {}

    /// a + b*sqrt(d_raw); d_raw need not be square-free.
    QuadExt(const Rat& a, const Rat& b, const Int& d_raw) : a_(a), b_(b), d_(1) {
        Int kernel, factor;
        squarefree_split(d_raw, kernel, factor);
        b_ *= Rat(factor);
        d_ = kernel;
        normalize();
    }

    const Rat& rational_part() const { return a_; }
    const Rat& radical_part() const { return b_; }
    const Int& d() const { return d_; }

    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    /// Rational value; throws if a radical part is present.
    const Rat& as_rat() const {
        if (b_ != 0) throw std::domain_error("QuadExt: not rational");
        return a_;
    }

    bool operator==(const QuadExt& o) const { return a_ == o.a_ && b_ == o.b_ && d_ == o.d_; }
    bool operator!=(const QuadExt& o) const { return !(*this == o); }

    QuadExt operator-() const {
        QuadExt r = *this;
        r.a_ = -r.a_;
        r.b_ = -r.b_;
        return r;
    }

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
        QuadExt r;
        r.a_ = x.a_ + y.a_;
        if (x.b_ == 0) {
            r.b_ = y.b_;
            r.d_ = y.d_;
        } else if (y.b_ == 0) {
            r.b_ = x.b_;
            r.d_ = x.d_;
        } else if (x.d_ == y.d_) {
            r.b_ = x.b_ + y.b_;
            r.d_ = x.d_;
        } else {
            throw MixedFields();
        }
        r.normalize();
        return r;
    }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) { return x + (-y); }

    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        QuadExt r;
        if (x.b_ != 0 && y.b_ != 0 && x.d_ != y.d_) throw MixedFields();
        const Int d = x.b_ != 0 ? x.d_ : y.d_;
        r.a_ = x.a_ * y.a_ + x.b_ * y.b_ * Rat(d);
        r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
        r.d_ = d;
        r.normalize();
        return r;
    }

    QuadExt conjugate() const {
        QuadExt r = *this;
        r.b_ = -r.b_;
        return r;
    }

    /// a^2 - b^2 d, the field norm.
    Rat norm() const { return a_ * a_ - b_ * b_ * Rat(d_); }

    friend QuadExt operator/(const QuadExt& x, const QuadExt& y) {
        if (y.is_zero()) throw DivisionByZero();
        if (y.b_ == 0) {
            QuadExt r = x;
            r.a_ /= y.a_;
            r.b_ /= y.a_;
            return r;
        }
        if (x.b_ != 0 && x.d_ != y.d_) throw MixedFields();
        QuadExt num = x * y.conjugate();
        Rat n = y.norm();  // nonzero: d square-free > 1 is irrational
        num.a_ /= n;
        num.b_ /= n;
        num.normalize();
        return num;
    }

    QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
    QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }
    QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }
    QuadExt& operator/=(const QuadExt& o) { return *this = *this / o; }

    /// Exact sign of a + b*sqrt(d): -1, 0, +1.
    int sign() const {
        if (b_ == 0) return a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
        if (a_ == 0) return b_ > 0 ? 1 : -1;
        if (a_ > 0 && b_ > 0) return 1;
        if (a_ < 0 && b_ < 0) return -1;
        // Opposite signs: compare a^2 with b^2 d; the larger magnitude wins.
        Rat lhs = a_ * a_, rhs = b_ * b_ * Rat(d_);
        if (lhs == rhs) return 0;  // impossible for irrational sqrt(d), kept for safety
        return lhs > rhs ? (a_ > 0 ? 1 : -1) : (b_ > 0 ? 1 : -1);
    }

    bool operator<(const QuadExt& o) const { return (*this - o).sign() < 0; }
    bool operator>(const QuadExt& o) const { return (*this - o).sign() > 0; }

    std::string str() const {
        if (b_ == 0) return to_string(a_);
        std::string s;
        if (a_ != 0) s = to_string(a_) + (b_ > 0 ? "+" : "");
        s += (b_ == 1 ? "" : b_ == -1 ? "-" : to_string(b_) + "*");
        s += "sqrt(" + d_.str() + ")";
        return s;
    }
};

/// Canonicalize a + b*sqrt(d_raw) (d_raw >= 1, not necessarily square-free).
inline QuadExt quad_normalize(const Rat& a, const Rat& b, const Int& d_raw) {
    return QuadExt(a, b, d_raw);
}

}  // namespace solv
