#pragma once

#include <vector>

#include "symdyn/interval.hpp"

namespace symdyn {

namespace detail {
inline BigInt isqrt_floor(const BigInt& n) {
    if (n < 0) throw domain_error("isqrt of negative");
    if (n == 0) return 0;
    BigInt x = n, y = (x + 1) / 2;
    while (y < x) { x = y; y = (x + n / x) / 2; }
    return x;
}
}  // namespace detail

// Exact quadratic surd (a + b*sqrt(d)) / c with integer a, b, c, d >= 0,
// c > 0 after normalization. Field operations require matching radicands;
// rational values use d = 0 and combine with any field.
class QuadraticSurd {
public:
    QuadraticSurd() : a_(0), b_(0), c_(1), d_(0) {}
    QuadraticSurd(BigInt a, BigInt b, BigInt c, BigInt d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        normalize();
    }
    static QuadraticSurd from_int(const BigInt& n) { return QuadraticSurd(n, 0, 1, 0); }
    static QuadraticSurd from_rational(const BigRat& q) {
        return QuadraticSurd(numerator(q), 0, denominator(q), 0);
    }

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& c() const { return c_; }
    const BigInt& d() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    QuadraticSurd operator+(const QuadraticSurd& o) const {
        BigInt d = merged_d(o);
        return QuadraticSurd(a_ * o.c_ + o.a_ * c_, b_ * o.c_ + o.b_ * c_, c_ * o.c_, d);
    }
    QuadraticSurd operator-(const QuadraticSurd& o) const {
        BigInt d = merged_d(o);
        return QuadraticSurd(a_ * o.c_ - o.a_ * c_, b_ * o.c_ - o.b_ * c_, c_ * o.c_, d);
    }
    QuadraticSurd operator*(const QuadraticSurd& o) const {
        BigInt d = merged_d(o);
        return QuadraticSurd(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, c_ * o.c_, d);
    }
    QuadraticSurd operator/(const QuadraticSurd& o) const {
        BigInt d = merged_d(o);
        // 1/((a+b sqrt d)/c) = c (a - b sqrt d) / (a^2 - b^2 d)
        BigInt denom = o.a_ * o.a_ - o.b_ * o.b_ * d;
        if (denom == 0) throw domain_error("division by zero surd");
        QuadraticSurd inv(o.c_ * o.a_, -o.c_ * o.b_, denom, d);
        return *this * inv;
    }

    // Exact sign of (a + b*sqrt(d)) / c with c > 0.
    int sign() const {
        if (b_ == 0) return a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
        if (a_ == 0) return b_ > 0 ? 1 : -1;
        if (a_ > 0 && b_ > 0) return 1;
        if (a_ < 0 && b_ < 0) return -1;
        // a and b have opposite signs: compare a^2 with b^2 d.
        BigInt lhs = a_ * a_, rhs = b_ * b_ * d_;
        int big = lhs == rhs ? 0 : (lhs > rhs ? 1 : -1);
        if (a_ > 0) return big == 0 ? 0 : (big > 0 ? 1 : -1);
        return big == 0 ? 0 : (big > 0 ? -1 : 1);
    }
    int cmp(const QuadraticSurd& o) const { return (*this - o).sign(); }
    bool operator==(const QuadraticSurd& o) const {
        if (d_ != 0 && o.d_ != 0 && d_ != o.d_)
            return is_rational() && o.is_rational() && cmp_rational(o);
        return cmp(o) == 0;
    }

    Interval to_interval() const {
        Interval num = Interval::from_int(a_) + Interval::from_int(b_) * Interval::sqrt_int(d_);
        return num / Interval::from_int(c_);
    }

private:
    bool cmp_rational(const QuadraticSurd& o) const {
        return a_ * o.c_ == o.a_ * c_;
    }
    BigInt merged_d(const QuadraticSurd& o) const {
        if (b_ == 0 || d_ == 0) return o.d_;
        if (o.b_ == 0 || o.d_ == 0) return d_;
        if (d_ != o.d_) throw domain_error("surd field mismatch");
        return d_;
    }
    void normalize() {
        if (c_ == 0) throw domain_error("zero denominator in surd");
        if (c_ < 0) { a_ = -a_; b_ = -b_; c_ = -c_; }
        if (d_ == 0) b_ = 0;
        if (b_ != 0) {
            BigInt r = detail::isqrt_floor(d_);
            if (r * r == d_) { a_ += b_ * r; b_ = 0; d_ = 0; }
        }
        if (b_ == 0) d_ = 0;
        BigInt g = gcd(gcd(abs(a_), abs(b_)), c_);
        if (g > 1) { a_ /= g; b_ /= g; c_ /= g; }
    }

    BigInt a_, b_, c_, d_;
};

// 2x2 integer matrix acting as a Moebius transform x -> (p x + q)/(r x + s).
struct Mobius {
    BigInt p{1}, q{0}, r{0}, s{1};

    static Mobius identity() { return {}; }
    static Mobius digit(long a) { return {BigInt(a), BigInt(1), BigInt(1), BigInt(0)}; }

    Mobius operator*(const Mobius& o) const {
        return {p * o.p + q * o.r, p * o.q + q * o.s,
                r * o.p + s * o.r, r * o.q + s * o.s};
    }
    QuadraticSurd apply(const QuadraticSurd& x) const {
        QuadraticSurd num = QuadraticSurd::from_int(p) * x + QuadraticSurd::from_int(q);
        QuadraticSurd den = QuadraticSurd::from_int(r) * x + QuadraticSurd::from_int(s);
        return num / den;
    }
};

// Value of the purely periodic continued fraction [a0; a1, ..., a_{k-1},
// a0, a1, ...]. All digits must be positive.
inline QuadraticSurd periodic_cf_value(const std::vector<long>& period) {
    if (period.empty()) throw input_error("empty continued-fraction period");
    Mobius m;
    for (long a : period) {
        if (a <= 0) throw domain_error("continued-fraction digit must be positive");
        m = m * Mobius::digit(a);
    }
    // Fixed point of x = (p x + q)/(r x + s): r x^2 + (s - p) x - q = 0.
    // r >= 1 because every digit matrix has positive entries after one step.
    BigInt A = m.r, B = m.s - m.p, C = -m.q;
    BigInt disc = B * B - 4 * A * C;
    return QuadraticSurd(-B, 1, 2 * A, disc);  // positive root: value > 1
}

// Value of [w0; w1, ..., w_{m-1}, tail] for positive digits w.
inline QuadraticSurd cf_with_prefix(const std::vector<long>& prefix, const QuadraticSurd& tail) {
    Mobius m;
    for (long a : prefix) {
        if (a <= 0) throw domain_error("continued-fraction digit must be positive");
        m = m * Mobius::digit(a);
    }
    return m.apply(tail);
}

}  // namespace symdyn
