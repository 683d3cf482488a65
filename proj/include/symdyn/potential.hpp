#pragma once

#include <cmath>
#include <functional>
#include <map>

#include "symdyn/sequence.hpp"
#include "symdyn/surd.hpp"

namespace symdyn {

// Enclosure of a potential value with provenance of the bound.
struct ValueEnclosure {
    Interval value;
    long margin = 0;       // window half-size used for sup/limsup scans
    double tail_var = 0;   // variation bound absorbed into the upper end

    double width() const { return value.width(); }
};

enum class PotentialKind { locally_constant, cf_sum, cf_product };

// Potential on sequences: locally constant with an exact rational table on
// (2r+1)-windows, or one of the two continued-fraction potentials
//   cf_sum:      [d0; d1, d2, ...] + [0; d-1, d-2, ...]
//   cf_product:  [d0; d1, d2, ...] * [d-1; d-2, d-3, ...]
// where the digit of a symbol is its name parsed as a positive integer.
class Potential {
public:
    static Potential locally_constant(const Sft& sft, long radius,
                                      std::map<Word, BigRat> table) {
        Potential p;
        p.kind_ = PotentialKind::locally_constant;
        p.radius_ = radius;
        p.table_ = std::move(table);
        for (const Word& w : enumerate_words(sft, 2 * radius + 1))
            if (!p.table_.count(w))
                throw input_error("table misses admissible window " + word_to_string(sft, w));
        BigRat lo = p.table_.begin()->second, hi = lo;
        for (const auto& [w, v] : p.table_) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        p.table_spread_ = hi - lo;
        return p;
    }

    // Indicator-style potential: `high` on the cylinder C_{-r}(w), `low` off it.
    static Potential cylinder_indicator(const Sft& sft, const Word& w, BigRat high, BigRat low) {
        if (w.size() % 2 == 0) throw input_error("indicator word must have odd length");
        long r = (static_cast<long>(w.size()) - 1) / 2;
        std::map<Word, BigRat> table;
        for (const Word& u : enumerate_words(sft, 2 * r + 1)) table[u] = u == w ? high : low;
        return locally_constant(sft, r, std::move(table));
    }

    static Potential cf_sum(const Sft& sft) { return cf_make(sft, PotentialKind::cf_sum); }
    static Potential cf_product(const Sft& sft) { return cf_make(sft, PotentialKind::cf_product); }

    PotentialKind kind() const { return kind_; }
    long radius() const { return radius_; }
    long max_digit() const { return max_digit_; }
    const std::map<Word, BigRat>& table() const { return table_; }

    BigRat table_value(const Word& window) const {
        auto it = table_.find(window);
        if (it == table_.end()) throw input_error("window not covered by potential table");
        return it->second;
    }

    // Certified bound on |p(theta) - p(zeta)| over pairs agreeing on [-n, n].
    double var_bound(long n) const {
        if (kind_ == PotentialKind::locally_constant) {
            if (n >= radius_) return 0.0;
            return static_cast<double>(table_spread_) * (1 + 1e-15);
        }
        if (kind_ == PotentialKind::cf_sum) {
            // Each side is a [0; ...] tail with n pinned fractional digits.
            return 2 * detail_fractional_width(n);
        }
        // Product of [d0; ...] and [d-1; ...]: agreement on [-n, n] pins n
        // fractional digits forward but only n-1 backward; both factors are
        // bounded by max_digit + 1.
        return static_cast<double>(max_digit_ + 1) *
               (detail_fractional_width(n) + detail_fractional_width(n - 1));
    }

    long digit(Symbol s) const {
        long d = digits_.at(static_cast<size_t>(s));
        if (d <= 0) throw domain_error("symbol is not a positive digit: " + names_.at(static_cast<size_t>(s)));
        return d;
    }

    bool is_locally_constant() const { return kind_ == PotentialKind::locally_constant; }

private:
    // Width of the cylinder of [0; a_1, a_2, ...] once a_1..a_k are pinned:
    // 1/(q_k (q_k + q_{k-1})) with q_k >= F_{k+1}; all-ones digits are the
    // worst case.
    static double detail_fractional_width(long k) {
        if (k <= 0) return 1.0;
        double f_prev = 1, f_cur = 1;  // F_1, F_2
        for (long i = 2; i <= k + 1; ++i) {
            double nx = f_prev + f_cur;
            f_prev = f_cur;
            f_cur = nx;
            if (f_cur > 1e300) break;
        }
        return std::min((1 + 1e-12) / (f_cur * (f_cur + f_prev)), 1.0);
    }

    static Potential cf_make(const Sft& sft, PotentialKind kind) {
        Potential p;
        p.kind_ = kind;
        p.names_ = sft.names();
        p.digits_.resize(static_cast<size_t>(sft.size()), -1);
        for (Symbol s = 0; s < sft.size(); ++s) {
            const std::string& n = sft.name(s);
            try {
                size_t used = 0;
                long d = std::stol(n, &used);
                if (used == n.size() && d > 0) {
                    p.digits_[static_cast<size_t>(s)] = d;
                    p.max_digit_ = std::max(p.max_digit_, d);
                }
            } catch (...) {
                // flagged on use
            }
        }
        return p;
    }

    PotentialKind kind_ = PotentialKind::cf_sum;
    long radius_ = 0;
    std::map<Word, BigRat> table_;
    BigRat table_spread_ = 0;
    std::vector<long> digits_;
    std::vector<std::string> names_;
    long max_digit_ = 0;
};

namespace detail {

// Forward continued-fraction value [d(i0); d(i0+1), ...] of an eventually
// periodic digit stream, as an exact quadratic surd.
inline QuadraticSurd cf_forward(const Potential& p, const Seq& seq, long i0) {
    long tail_at = std::max(i0, seq.right_start());
    std::vector<long> prefix;
    for (long i = i0; i < tail_at; ++i) prefix.push_back(p.digit(seq.at(i)));
    long period = static_cast<long>(seq.right_period().size());
    std::vector<long> tail;
    for (long i = tail_at; i < tail_at + period; ++i) tail.push_back(p.digit(seq.at(i)));
    return cf_with_prefix(prefix, periodic_cf_value(tail));
}

// Backward value over digits d(i0), d(i0-1), ...: the left tail reversed.
inline QuadraticSurd cf_backward(const Potential& p, const Seq& seq, long i0) {
    long tail_until = std::min(i0, seq.origin() - 1);
    std::vector<long> prefix;
    for (long i = i0; i > tail_until; --i) prefix.push_back(p.digit(seq.at(i)));
    long period = static_cast<long>(seq.left_period().size());
    std::vector<long> tail;
    for (long i = tail_until; i > tail_until - period; --i) tail.push_back(p.digit(seq.at(i)));
    return cf_with_prefix(prefix, periodic_cf_value(tail));
}

}  // namespace detail

// Exact evaluation at the two-surd level, combined into an enclosure.
inline ValueEnclosure evaluate(const Potential& p, const Seq& theta) {
    ValueEnclosure out;
    switch (p.kind()) {
        case PotentialKind::locally_constant: {
            Word window = theta.window(-p.radius(), p.radius());
            out.value = Interval::from_rational(p.table_value(window));
            return out;
        }
        case PotentialKind::cf_sum: {
            QuadraticSurd fwd = detail::cf_forward(p, theta, 0);
            // [0; d(-1), d(-2), ...] = 1 / [d(-1); d(-2), ...], exact in the
            // backward surd's field.
            QuadraticSurd bwd = QuadraticSurd::from_int(1) / detail::cf_backward(p, theta, -1);
            out.value = fwd.to_interval() + bwd.to_interval();
            return out;
        }
        case PotentialKind::cf_product: {
            QuadraticSurd fwd = detail::cf_forward(p, theta, 0);
            QuadraticSurd bwd = detail::cf_backward(p, theta, -1);
            out.value = fwd.to_interval() * bwd.to_interval();
            return out;
        }
    }
    throw domain_error("unreachable potential kind");
}

}  // namespace symdyn
