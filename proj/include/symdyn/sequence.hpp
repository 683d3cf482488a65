#pragma once

#include <numeric>
#include <string>

#include "symdyn/sft.hpp"

namespace symdyn {

// Bi-infinite eventually periodic sequence: left_period repeats toward
// -infinity, core sits at [origin, origin+|core|), right_period repeats
// from origin+|core| on. Periodic points and every splice the toolkit
// needs stay inside this class, so all orbit computations are exact.
class EventuallyPeriodicSequence {
public:
    EventuallyPeriodicSequence(Word left_period, Word core, Word right_period, long origin)
        : left_(std::move(left_period)), core_(std::move(core)),
          right_(std::move(right_period)), origin_(origin) {
        if (left_.empty() || right_.empty())
            throw input_error("periods must be nonempty");
    }

    static EventuallyPeriodicSequence periodic(const Word& w, long origin = 0) {
        if (w.empty()) throw input_error("empty period");
        return EventuallyPeriodicSequence(w, {}, w, origin);
    }
    static EventuallyPeriodicSequence constant(Symbol s) { return periodic(Word{s}); }

    const Word& left_period() const { return left_; }
    const Word& core() const { return core_; }
    const Word& right_period() const { return right_; }
    long origin() const { return origin_; }

    // Index of the first right-periodic position.
    long right_start() const { return origin_ + static_cast<long>(core_.size()); }

    Symbol at(long i) const {
        if (i >= right_start()) {
            long off = i - right_start();
            return right_[static_cast<size_t>(off % static_cast<long>(right_.size()))];
        }
        if (i >= origin_) return core_[static_cast<size_t>(i - origin_)];
        long d = origin_ - 1 - i;  // distance back from the last left-period slot
        long p = static_cast<long>(left_.size());
        return left_[static_cast<size_t>(p - 1 - (d % p))];
    }

    Word window(long lo, long hi) const {  // inclusive ends
        Word w;
        w.reserve(static_cast<size_t>(hi - lo + 1));
        for (long i = lo; i <= hi; ++i) w.push_back(at(i));
        return w;
    }

    bool purely_periodic() const {
        if (!core_.empty() || left_.size() != right_.size()) return false;
        // Same word, compared with the phase induced by the layout: the
        // sequence is periodic iff at(i) == at(i + p) everywhere.
        long p = static_cast<long>(right_.size());
        for (long i = origin_ - p; i < origin_ + p; ++i)
            if (at(i) != at(i + p)) return false;
        return true;
    }

private:
    Word left_, core_, right_;
    long origin_;
};

using Seq = EventuallyPeriodicSequence;

// Rebuild an equal sequence whose core covers exactly [lo, hi]. Exact as
// long as lo <= origin and hi >= right_start() - 1 (the periodic regimes
// outside [lo, hi] are genuine).
inline Seq rebase(const Seq& s, long lo, long hi) {
    lo = std::min(lo, s.origin());
    hi = std::max(hi, s.right_start() - 1);
    long lp = static_cast<long>(s.left_period().size());
    long rp = static_cast<long>(s.right_period().size());
    return Seq(s.window(lo - lp, lo - 1), s.window(lo, hi), s.window(hi + 1, hi + rp), lo);
}

// sigma^j: at(i) of the result equals at(i + j) of the input.
inline Seq shift(const Seq& s, long j) {
    return Seq(s.left_period(), s.core(), s.right_period(), s.origin() - j);
}

// Exact equality as maps Z -> symbols. It suffices to agree on a window
// covering both cores padded by one full lcm of the periods on each side.
inline bool same_sequence(const Seq& a, const Seq& b) {
    long lo = std::min(a.origin(), b.origin());
    long hi = std::max(a.right_start(), b.right_start());
    long lcm_l = std::lcm(static_cast<long>(a.left_period().size()),
                          static_cast<long>(b.left_period().size()));
    long lcm_r = std::lcm(static_cast<long>(a.right_period().size()),
                          static_cast<long>(b.right_period().size()));
    for (long i = lo - lcm_l; i <= hi + lcm_r; ++i)
        if (a.at(i) != b.at(i)) return false;
    return true;
}

// First index in [lo, hi] where the two sequences differ, or nullopt.
inline std::optional<long> first_difference(const Seq& a, const Seq& b, long lo, long hi) {
    for (long i = lo; i <= hi; ++i)
        if (a.at(i) != b.at(i)) return i;
    return std::nullopt;
}

inline bool is_admissible(const Sft& sft, const Seq& s) {
    long lo = s.origin() - static_cast<long>(s.left_period().size()) - 1;
    long hi = s.right_start() + static_cast<long>(s.right_period().size());
    for (long i = lo; i < hi; ++i)
        if (!sft.admissible_pair(s.at(i), s.at(i + 1))) return false;
    return true;
}

// Cylinder C_m(w) = { theta : theta_{m-1+i} = w_i, 1 <= i <= |w| }.
struct Cylinder {
    long start = 0;
    Word word;

    bool contains(const Seq& s) const {
        for (size_t i = 0; i < word.size(); ++i)
            if (s.at(start + static_cast<long>(i)) != word[i]) return false;
        return true;
    }
};

// Splice: agrees with `past` on indices <= 0 and with `future` on >= 1.
inline Seq splice_at_origin(const Seq& past, const Seq& future) {
    long lo = std::min(past.origin(), 0L);
    long hi = std::max(future.right_start() - 1, 0L);
    long lp = static_cast<long>(past.left_period().size());
    long rp = static_cast<long>(future.right_period().size());
    Word core = past.window(lo, 0);
    if (hi >= 1) {
        Word tail = future.window(1, hi);
        core.insert(core.end(), tail.begin(), tail.end());
    }
    return Seq(past.window(lo - lp, lo - 1), std::move(core),
               future.window(hi + 1, hi + rp), lo);
}

// Bracket [zeta, theta] = (theta^-*, zeta^+), defined when theta_0 = zeta_0.
inline Seq bracket(const Seq& zeta, const Seq& theta) {
    if (theta.at(0) != zeta.at(0))
        throw domain_error("bracket requires matching symbols at index 0");
    return splice_at_origin(theta, zeta);
}

namespace detail {
// Verify zeta^- = theta^- exactly (all indices <= upto).
inline void require_same_past(const Seq& theta, const Seq& zeta, long upto, const char* who) {
    long lo = std::min(theta.origin(), zeta.origin());
    long lcm_l = std::lcm(static_cast<long>(theta.left_period().size()),
                          static_cast<long>(zeta.left_period().size()));
    long from = std::min(lo - lcm_l, upto);
    // Beyond the representable window both sides are periodic; agreement on
    // one full lcm window implies agreement everywhere left of it.
    for (long i = upto; i >= from; --i)
        if (theta.at(i) != zeta.at(i))
            throw domain_error(std::string(who) + ": sequences differ at index " + std::to_string(i));
    // Also the tails must keep matching past the core region.
    long tail_lo = from - lcm_l;
    for (long i = from - 1; i >= tail_lo; --i)
        if (theta.at(i) != zeta.at(i))
            throw domain_error(std::string(who) + ": sequences differ at index " + std::to_string(i));
}
// Verify xi^+ = theta^+ and xi_0 = theta_0.
inline void require_same_future(const Seq& theta, const Seq& xi, const char* who) {
    long hi = std::max(theta.right_start(), xi.right_start());
    long lcm_r = std::lcm(static_cast<long>(theta.right_period().size()),
                          static_cast<long>(xi.right_period().size()));
    for (long i = 0; i <= hi + 2 * lcm_r; ++i)
        if (theta.at(i) != xi.at(i))
            throw domain_error(std::string(who) + ": sequences differ at index " + std::to_string(i));
}
}  // namespace detail

// Symbolic unstable holonomy h^u_{theta,zeta}(xi) = [zeta, xi], defined for
// zeta in W^u_loc(theta) and xi in W^s_loc(theta).
inline Seq unstable_holonomy(const Seq& theta, const Seq& zeta, const Seq& xi) {
    detail::require_same_past(theta, zeta, 0, "unstable_holonomy: zeta not in W^u_loc(theta)");
    detail::require_same_future(theta, xi, "unstable_holonomy: xi not in W^s_loc(theta)");
    return bracket(zeta, xi);
}

}  // namespace symdyn
