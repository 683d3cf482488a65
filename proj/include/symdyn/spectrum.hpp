#pragma once

#include <thread>

#include "symdyn/avoidance.hpp"
#include "symdyn/potential.hpp"

namespace symdyn {

// sup over all integer shifts of the potential along theta's orbit.
// Exact for purely periodic sequences; otherwise the far-shift regime is
// absorbed into the enclosure through the variation bound at the chosen
// margin.
inline ValueEnclosure markov_value(const Potential& p, const Seq& theta, double tol = 1e-30) {
    if (theta.purely_periodic()) {
        long period = static_cast<long>(theta.right_period().size());
        ValueEnclosure out = evaluate(p, theta);
        for (long j = 1; j < period; ++j)
            out.value = Interval::vmax(out.value, evaluate(p, shift(theta, j)).value);
        return out;
    }

    if (!(tol > 0)) throw input_error("tolerance must be positive");
    long margin = -1;
    for (long n = 0; n <= 10000; ++n)
        if (p.var_bound(n) < tol / 2) { margin = n; break; }
    if (margin < 0)
        throw domain_error("variation bound cannot reach the requested tolerance; enlarge the margin cap");

    ValueEnclosure out;
    out.margin = margin;
    double var = p.var_bound(margin);
    out.tail_var = var;

    long lo_j = theta.origin() - margin - 1;
    long hi_j = theta.right_start() + margin + 1;
    Interval acc = evaluate(p, shift(theta, lo_j)).value;
    for (long j = lo_j + 1; j <= hi_j; ++j)
        acc = Interval::vmax(acc, evaluate(p, shift(theta, j)).value);

    // Both periodic tails: their full orbits are hit in the limits.
    Interval tails = [&] {
        Seq right = Seq::periodic(theta.right_period());
        Interval t = evaluate(p, right).value;
        for (long j = 1; j < static_cast<long>(theta.right_period().size()); ++j)
            t = Interval::vmax(t, evaluate(p, shift(right, j)).value);
        Seq left = Seq::periodic(theta.left_period());
        for (long j = 0; j < static_cast<long>(theta.left_period().size()); ++j)
            t = Interval::vmax(t, evaluate(p, shift(left, j)).value);
        return t;
    }();

    acc = Interval::vmax(acc, tails);
    // Far shifts agree with a tail rotation on [-margin, margin], so their
    // values cannot exceed the tail maximum by more than var.
    out.value = Interval(acc.lo(), Interval::vmax(acc, tails.widen_hi(var)).hi());
    return out;
}

// limsup along the forward orbit: the maximum over the rotations of the
// purely periodic sequence spun from the right period. Finitely many
// exact evaluations.
inline ValueEnclosure lagrange_value(const Potential& p, const Seq& theta) {
    Seq tail = Seq::periodic(theta.right_period());
    ValueEnclosure out = evaluate(p, tail);
    for (long j = 1; j < static_cast<long>(theta.right_period().size()); ++j)
        out.value = Interval::vmax(out.value, evaluate(p, shift(tail, j)).value);
    return out;
}

// ---------------------------------------------------------------------------
// Periodic-orbit enumeration.

inline Word least_rotation(const Word& w) {
    Word best = w;
    Word rot = w;
    for (size_t i = 1; i < w.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

inline bool primitive_word(const Word& w) {
    for (size_t d = 1; d < w.size(); ++d) {
        if (w.size() % d != 0) continue;
        bool rep = true;
        for (size_t i = d; i < w.size() && rep; ++i) rep = w[i] == w[i % d];
        if (rep) return false;
    }
    return true;
}

// All primitive cyclically-admissible words of length <= max_period, one
// representative per rotation class (the lexicographically least).
inline std::vector<Word> enumerate_orbits(const Sft& sft, long max_period) {
    std::set<Word> orbits;
    Word cur;
    auto rec = [&](auto&& self, long len) -> void {
        if (static_cast<long>(cur.size()) == len) {
            if (!sft.admissible_pair(cur.back(), cur.front())) return;
            Word canon = least_rotation(cur);
            if (primitive_word(canon)) orbits.insert(canon);
            return;
        }
        for (Symbol s = 0; s < sft.size(); ++s) {
            if (!cur.empty() && !sft.admissible_pair(cur.back(), s)) continue;
            // Canonical representatives start at their least symbol.
            if (!cur.empty() && s < cur.front()) continue;
            cur.push_back(s);
            self(self, len);
            cur.pop_back();
        }
    };
    for (long len = 1; len <= max_period; ++len) rec(rec, len);
    return {orbits.begin(), orbits.end()};
}

struct SpectrumEntry {
    Word orbit;  // lexicographically least rotation
    long period = 0;
    ValueEnclosure value;
};

struct SpectrumSample {
    std::vector<SpectrumEntry> entries;  // sorted by value midpoint
    double dedup_tol = 1e-12;
};

// Inner approximation of the Lagrange/Markov spectrum by periodic orbits:
// every periodic point's Markov value is both a Lagrange and a Markov
// value, so the sample is contained in L cap M.
inline SpectrumSample enumerate_spectrum(const Sft& sft, const Potential& p, long max_period,
                                         double dedup_tol = 1e-12, int threads = 1) {
    if (!is_transitive(sft))
        throw domain_error("spectrum enumeration expects a transitive shift");
    if (max_period < 1) throw input_error("max period must be >= 1");

    std::vector<Word> orbits = enumerate_orbits(sft, max_period);
    std::vector<std::optional<SpectrumEntry>> slots(orbits.size());

    auto work = [&](size_t begin, size_t step) {
        for (size_t i = begin; i < orbits.size(); i += step) {
            SpectrumEntry e;
            e.orbit = orbits[i];
            e.period = static_cast<long>(orbits[i].size());
            e.value = markov_value(p, Seq::periodic(orbits[i]));
            slots[i] = std::move(e);
        }
    };
    int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(work, static_cast<size_t>(t), static_cast<size_t>(nthreads));
        for (auto& th : pool) th.join();
    }

    std::vector<SpectrumEntry> entries;
    entries.reserve(slots.size());
    for (auto& s : slots) entries.push_back(std::move(*s));
    std::sort(entries.begin(), entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        double ma = a.value.value.mid(), mb = b.value.value.mid();
        if (ma != mb) return ma < mb;
        if (a.period != b.period) return a.period < b.period;
        return a.orbit < b.orbit;
    });

    SpectrumSample out;
    out.dedup_tol = dedup_tol;
    for (auto& e : entries) {
        if (!out.entries.empty()) {
            const auto& prev = out.entries.back().value.value;
            const auto& curv = e.value.value;
            bool same = prev.intersects(curv) ||
                        std::abs(curv.mid() - prev.mid()) <= dedup_tol;
            if (same) continue;  // keep the earlier (shorter-period) witness
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// SDH2 gap check (hypothesis of the limsup mechanism).

struct Sdh2Report {
    long n = 0;
    bool holds = false;
    std::optional<BigRat> sup_off;  // empty when C_{-n}(a) is the whole shift
    BigRat inf_on = 0;
    long max_gluing_len = 0;
    bool side_condition_ok = false;  // n > 3 max|c| + 1
    std::optional<Symbol> fixed_symbol;
    bool fixed_point_ok = true;      // a != s^{2n+1}
};

// Exact gap check for locally constant potentials with radius <= n: both
// sup over the complement of C_{-n}(a) and inf over it reduce to finitely
// many table lookups on admissible (2n+1)-words over the essential part.
inline Sdh2Report check_sdh2(const Sft& sft, const Potential& p, const Word& a,
                             std::optional<Symbol> fixed_symbol = std::nullopt) {
    if (!p.is_locally_constant())
        throw domain_error("exact SDH2 check requires a locally constant potential");
    if (a.size() % 2 == 0) throw input_error("word a must have odd length");
    long n = (static_cast<long>(a.size()) - 1) / 2;
    if (p.radius() > n)
        throw domain_error("potential window exceeds the cylinder radius; cannot certify exactly");
    if (!is_admissible(sft, a)) throw input_error("word a must be admissible");
    if (count_words(sft, 2 * n + 1) > 2000000)
        throw resource_error("too many windows to enumerate exactly");

    Sdh2Report rep;
    rep.n = n;

    long r = p.radius();
    auto center_value = [&](const Word& w) {
        Word slice(w.begin() + (n - r), w.begin() + (n + r + 1));
        return p.table_value(slice);
    };

    rep.inf_on = center_value(a);
    for (const Word& w : enumerate_words(sft, 2 * n + 1)) {
        bool essential = true;
        for (Symbol s : w) essential = essential && sft.essential(s);
        if (!essential || w == a) continue;
        BigRat v = center_value(w);
        if (!rep.sup_off || v > *rep.sup_off) rep.sup_off = v;
    }
    rep.holds = !rep.sup_off || *rep.sup_off < rep.inf_on;

    GluingTable table(sft);
    rep.max_gluing_len = table.max_len();
    rep.side_condition_ok = n > 3 * table.max_len() + 1;

    if (!fixed_symbol) {
        for (Symbol s = 0; s < sft.size(); ++s)
            if (sft.admissible_pair(s, s)) { fixed_symbol = s; break; }
    }
    rep.fixed_symbol = fixed_symbol;
    if (fixed_symbol) {
        bool constant = true;
        for (Symbol s : a) constant = constant && (s == *fixed_symbol);
        rep.fixed_point_ok = !constant;
    }
    return rep;
}

}  // namespace symdyn
