#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "symdyn/errors.hpp"

namespace symdyn {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Working precision for enclosure arithmetic, in bits. 128 minimum; the
// SYMDYN_PREC_BITS environment variable or set_precision_bits raises it.
inline mpfr_prec_t& precision_bits_ref() {
    static mpfr_prec_t bits = [] {
        mpfr_prec_t p = 128;
        if (const char* env = std::getenv("SYMDYN_PREC_BITS")) {
            long v = std::atol(env);
            if (v >= 128 && v <= 16384) p = static_cast<mpfr_prec_t>(v);
        }
        return p;
    }();
    return bits;
}

inline mpfr_prec_t precision_bits() { return precision_bits_ref(); }

inline void set_precision_bits(long bits) {
    if (bits < 128) throw input_error("precision must be at least 128 bits");
    precision_bits_ref() = static_cast<mpfr_prec_t>(bits);
}

// RAII wrapper around mpfr_t. Every arithmetic helper takes an explicit
// rounding direction so Interval can round outward.
class BigFloat {
public:
    BigFloat() { mpfr_init2(v_, precision_bits()); mpfr_set_zero(v_, 1); }
    explicit BigFloat(long x) { mpfr_init2(v_, precision_bits()); mpfr_set_si(v_, x, MPFR_RNDN); }
    explicit BigFloat(double x) { mpfr_init2(v_, precision_bits()); mpfr_set_d(v_, x, MPFR_RNDN); }

    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, precision_bits()); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(BigFloat o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_bigint(const BigInt& n, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_set_str(r.v_, n.str().c_str(), 10, rnd);
        return r;
    }
    static BigFloat from_rational(const BigRat& q, mpfr_rnd_t rnd) {
        BigFloat num = from_bigint(numerator(q), rnd);
        BigFloat den = from_bigint(denominator(q),
                                   rnd == MPFR_RNDU ? MPFR_RNDD : MPFR_RNDU);
        BigFloat r;
        mpfr_div(r.v_, num.v_, den.v_, rnd);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }
    int cmp(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const BigFloat& o) const { return cmp(o) < 0; }
    bool operator<=(const BigFloat& o) const { return cmp(o) <= 0; }
    bool operator==(const BigFloat& o) const { return cmp(o) == 0; }

    std::string str(int digits = 40) const {
        char fmt[32];
        std::snprintf(fmt, sizeof(fmt), "%%.%dRe", digits);
        char buf[128];
        mpfr_snprintf(buf, sizeof(buf), fmt, v_);
        return std::string(buf);
    }

    friend BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t r) {
        BigFloat out; mpfr_add(out.v_, a.v_, b.v_, r); return out;
    }
    friend BigFloat sub(const BigFloat& a, const BigFloat& b, mpfr_rnd_t r) {
        BigFloat out; mpfr_sub(out.v_, a.v_, b.v_, r); return out;
    }
    friend BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t r) {
        BigFloat out; mpfr_mul(out.v_, a.v_, b.v_, r); return out;
    }
    friend BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t r) {
        BigFloat out; mpfr_div(out.v_, a.v_, b.v_, r); return out;
    }
    friend BigFloat sqrt(const BigFloat& a, mpfr_rnd_t r) {
        BigFloat out; mpfr_sqrt(out.v_, a.v_, r); return out;
    }
    friend BigFloat neg(const BigFloat& a) {
        BigFloat out; mpfr_neg(out.v_, a.v_, MPFR_RNDN); return out;
    }
    friend BigFloat abs_rnd(const BigFloat& a, mpfr_rnd_t r) {
        BigFloat out; mpfr_abs(out.v_, a.v_, r); return out;
    }

private:
    mpfr_t v_;
};

inline BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
inline BigFloat min(const BigFloat& a, const BigFloat& b) { return a < b ? a : b; }

// Closed interval [lo, hi] with outward rounding; the invariant lo <= hi
// holds for every value produced here.
class Interval {
public:
    Interval() : lo_(0L), hi_(0L) {}
    explicit Interval(long x) : lo_(x), hi_(x) {}
    Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (hi_ < lo_) throw domain_error("interval endpoints out of order");
    }

    static Interval from_int(const BigInt& n) {
        return Interval(BigFloat::from_bigint(n, MPFR_RNDD),
                        BigFloat::from_bigint(n, MPFR_RNDU));
    }
    static Interval from_rational(const BigRat& q) {
        return Interval(BigFloat::from_rational(q, MPFR_RNDD),
                        BigFloat::from_rational(q, MPFR_RNDU));
    }
    // sqrt of a nonnegative integer, outward.
    static Interval sqrt_int(const BigInt& n) {
        if (n < 0) throw domain_error("sqrt of negative integer");
        return Interval(sqrt(BigFloat::from_bigint(n, MPFR_RNDD), MPFR_RNDD),
                        sqrt(BigFloat::from_bigint(n, MPFR_RNDU), MPFR_RNDU));
    }

    const BigFloat& lo() const { return lo_; }
    const BigFloat& hi() const { return hi_; }
    double width() const { return sub(hi_, lo_, MPFR_RNDU).to_double(); }
    double mid() const { return (lo_.to_double() + hi_.to_double()) / 2.0; }
    bool contains(const BigFloat& x) const { return lo_ <= x && x <= hi_; }
    bool contains(double x) const { return contains(BigFloat(x)); }
    bool intersects(const Interval& o) const { return !(hi_ < o.lo_) && !(o.hi_ < lo_); }

    Interval operator+(const Interval& o) const {
        return Interval(add(lo_, o.lo_, MPFR_RNDD), add(hi_, o.hi_, MPFR_RNDU));
    }
    Interval operator-(const Interval& o) const {
        return Interval(sub(lo_, o.hi_, MPFR_RNDD), sub(hi_, o.lo_, MPFR_RNDU));
    }
    Interval operator*(const Interval& o) const {
        const BigFloat* as[2] = {&lo_, &hi_};
        const BigFloat* bs[2] = {&o.lo_, &o.hi_};
        BigFloat lo = mul(lo_, o.lo_, MPFR_RNDD);
        BigFloat hi = mul(lo_, o.lo_, MPFR_RNDU);
        for (auto* a : as)
            for (auto* b : bs) {
                lo = min(lo, mul(*a, *b, MPFR_RNDD));
                hi = max(hi, mul(*a, *b, MPFR_RNDU));
            }
        return Interval(lo, hi);
    }
    Interval operator/(const Interval& o) const {
        if (o.lo_.sign() <= 0 && o.hi_.sign() >= 0)
            throw domain_error("interval division by interval containing zero");
        const BigFloat* as[2] = {&lo_, &hi_};
        const BigFloat* bs[2] = {&o.lo_, &o.hi_};
        BigFloat lo = div(lo_, o.lo_, MPFR_RNDD);
        BigFloat hi = div(lo_, o.lo_, MPFR_RNDU);
        for (auto* a : as)
            for (auto* b : bs) {
                lo = min(lo, div(*a, *b, MPFR_RNDD));
                hi = max(hi, div(*a, *b, MPFR_RNDU));
            }
        return Interval(lo, hi);
    }

    // Hull of two intervals (used when merging sup candidates).
    static Interval hull(const Interval& a, const Interval& b) {
        return Interval(min(a.lo_, b.lo_), max(a.hi_, b.hi_));
    }
    // Enclosure of max(a, b) as real numbers.
    static Interval vmax(const Interval& a, const Interval& b) {
        return Interval(max(a.lo_, b.lo_), max(a.hi_, b.hi_));
    }

    // Grow the upper end by a nonnegative double (tail-error absorption).
    Interval widen_hi(double eps) const {
        return Interval(lo_, add(hi_, BigFloat(eps), MPFR_RNDU));
    }

private:
    BigFloat lo_, hi_;
};

}  // namespace symdyn
