#pragma once

#include <memory>
#include <mutex>

#include "symdyn/spectrum.hpp"

namespace symdyn {

namespace detail {

// Output agrees with theta's past left of the inserted word, shows `middle`
// with its star_offset-th symbol at position 0, then theta's future.
inline Seq insert_at_origin(const Seq& theta, const Word& middle, long star_offset) {
    long L = std::min(theta.origin(), 0L);
    long R = std::max(theta.right_start() - 1, 0L);
    long lp = static_cast<long>(theta.left_period().size());
    long rp = static_cast<long>(theta.right_period().size());
    Word core = theta.window(L, 0);
    core.insert(core.end(), middle.begin(), middle.end());
    Word right_piece = theta.window(1, R);
    core.insert(core.end(), right_piece.begin(), right_piece.end());
    long origin = L - star_offset - 1;  // theta(L) sits star_offset+1 left of the star
    return Seq(theta.window(L - lp, L - 1), std::move(core),
               theta.window(R + 1, R + rp), origin);
}

}  // namespace detail

// H_a: splice (gluing, a, gluing) into theta at the origin, centering a.
// Output tails equal theta's; the star sits on a's middle symbol.
inline Seq h_a(const Sft& sft, const GluingTable& table, const Word& a, const Seq& theta) {
    if (a.size() % 2 == 0) throw input_error("word a must have odd length");
    if (!is_admissible(sft, a)) throw input_error("word a must be admissible");
    if (!is_admissible(sft, theta)) throw input_error("sequence must be admissible");
    long n = (static_cast<long>(a.size()) - 1) / 2;
    const Word& e = table.word(theta.at(0), a.front());
    const Word& f = table.word(a.back(), theta.at(1));
    Word middle = e;
    middle.insert(middle.end(), a.begin(), a.end());
    middle.insert(middle.end(), f.begin(), f.end());
    return detail::insert_at_origin(theta, middle, static_cast<long>(e.size()) + n);
}

// Holonomy decomposition of H_a: H_a(theta) = sigma^k h^u_{xi, sigma^-k
// H_a(xi)}(theta) for theta in W^s_loc(xi) inside the same length-2
// cylinder. The working value is k = |e| + n + 1: the splice displaces
// a's center by |e| + n gluing-and-word slots plus the slot of theta_0
// itself. k_override substitutes a foreign k (negative controls).
struct HolonomyDecomposition {
    long k = 0;
    bool pass = false;
};

inline HolonomyDecomposition holonomy_decomposition_check(
    const Sft& sft, const GluingTable& table, const Word& a, const Word& d, const Seq& xi,
    const Seq& theta, long window = 50, std::optional<long> k_override = std::nullopt) {
    if (d.size() != 2 || !sft.admissible_pair(d[0], d[1]))
        throw input_error("d must be an admissible pair");
    if (xi.at(0) != d[0] || xi.at(1) != d[1] || theta.at(0) != d[0] || theta.at(1) != d[1])
        throw domain_error("xi and theta must lie in C_0(d)");
    detail::require_same_future(xi, theta, "holonomy_decomposition: theta not in W^s_loc(xi)");

    long n = (static_cast<long>(a.size()) - 1) / 2;
    const Word& e = table.word(d[0], a.front());
    HolonomyDecomposition out;
    out.k = k_override.value_or(static_cast<long>(e.size()) + n + 1);

    Seq lhs = h_a(sft, table, a, theta);
    Seq zeta = shift(h_a(sft, table, a, xi), -out.k);
    Seq rhs = shift(splice_at_origin(theta, zeta), out.k);
    out.pass = !first_difference(lhs, rhs, -window, window).has_value();
    return out;
}

// Block layout of the one-sided concatenation H-tilde: tau_k blocks and
// their gluing joints, with the index windows the limsup argument scans.
// I_k starts one slot left of the printed formula so the translated
// windows l(k) + I_k tile [s_1, infinity) without gaps; the middle
// window [-2n-l, 2n+m] is unchanged.
struct BlockLayout {
    long n = 0, l = 0, m = 0;
    std::vector<long> tau_start;  // s_k, k = 0..horizon
    std::vector<long> c_len;      // |c_k|, k >= 1 (c_len[0] unused)

    long l_of(long k) const { return tau_start.at(static_cast<size_t>(k)) + k + 1 + l + n; }
    std::pair<long, long> I(long k) const {
        return {-(n + l) - k - 1, (n + m) + k + 1 + c_len.at(static_cast<size_t>(k + 1))};
    }
    std::pair<long, long> I_minus(long k) const { return {-(n + l) - k - 1, -2 * n - l - 1}; }
    std::pair<long, long> I_plus(long k) const {
        return {2 * n + m + 1, (n + m) + k + 1 + c_len.at(static_cast<size_t>(k + 1))};
    }
    std::pair<long, long> middle() const { return {-2 * n - l, 2 * n + m}; }
    long horizon() const { return static_cast<long>(tau_start.size()) - 1; }
};

// The auxiliary sequence H-tilde(theta): theta's past, then
// tau_0, c_1, tau_1, c_2, ... with tau_k = (theta_{-k..0}, e, a, f,
// theta_{1..k+1}) and c_k gluing theta_k to theta_{-k}. Lazily extended,
// internally synchronized, deterministic.
class HTildeSequence {
public:
    HTildeSequence(const GluingTable& table, Word a, Seq theta)
        : table_(&table), a_(std::move(a)), theta_(std::move(theta)),
          state_(std::make_unique<State>()) {
        n_ = (static_cast<long>(a_.size()) - 1) / 2;
        e_ = table_->word(theta_.at(0), a_.front());
        f_ = table_->word(a_.back(), theta_.at(1));
        s0_ = -(n_ + static_cast<long>(e_.size()) + 1);
        state_->blocks.push_back(Block{s0_, tau_word(0)});
    }

    HTildeSequence(HTildeSequence&&) noexcept = default;
    HTildeSequence& operator=(HTildeSequence&&) noexcept = default;

    long n() const { return n_; }
    const Word& a() const { return a_; }
    const Word& e() const { return e_; }
    const Word& f() const { return f_; }
    const Seq& source() const { return theta_; }

    Symbol at(long i) const {
        if (i <= s0_) return theta_.at(i - s0_);
        std::lock_guard<std::mutex> lock(state_->mu);
        auto& blocks = state_->blocks;
        while (blocks.back().start + static_cast<long>(blocks.back().symbols.size()) <= i)
            extend_locked();
        size_t lo = 0, hi = blocks.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi + 1) / 2;
            if (blocks[mid].start <= i) lo = mid;
            else hi = mid - 1;
        }
        const Block& b = blocks[lo];
        return b.symbols.at(static_cast<size_t>(i - b.start));
    }

    Word window(long lo, long hi) const {
        Word w;
        for (long i = lo; i <= hi; ++i) w.push_back(at(i));
        return w;
    }

    // tau_k and c_k lengths are known without materializing the stream.
    long tau_len(long k) const {
        return 2 * k + 2 * n_ + 3 + static_cast<long>(e_.size()) + static_cast<long>(f_.size());
    }
    const Word& c_word(long k) const { return table_->word(theta_.at(k), theta_.at(-k)); }

    BlockLayout layout(long horizon) const {
        BlockLayout lay;
        lay.n = n_;
        lay.l = static_cast<long>(e_.size());
        lay.m = static_cast<long>(f_.size());
        lay.c_len.assign(1, 0);
        lay.tau_start.assign(1, s0_);
        for (long k = 1; k <= horizon + 1; ++k) {
            lay.c_len.push_back(static_cast<long>(c_word(k).size()));
            lay.tau_start.push_back(lay.tau_start.back() + tau_len(k - 1) + lay.c_len.back());
        }
        lay.tau_start.resize(static_cast<size_t>(horizon) + 1);
        return lay;
    }

private:
    struct Block {
        long start;
        Word symbols;
    };
    struct State {
        std::mutex mu;
        std::vector<Block> blocks;  // block 0 = tau_0; block k = c_k + tau_k
        long next_k = 1;
    };

    Word tau_word(long k) const {
        Word w = theta_.window(-k, 0);
        w.insert(w.end(), e_.begin(), e_.end());
        w.insert(w.end(), a_.begin(), a_.end());
        w.insert(w.end(), f_.begin(), f_.end());
        Word tail = theta_.window(1, k + 1);
        w.insert(w.end(), tail.begin(), tail.end());
        return w;
    }

    void extend_locked() const {
        long k = state_->next_k++;
        const Block& prev = state_->blocks.back();
        long pos = prev.start + static_cast<long>(prev.symbols.size());
        Word blk = c_word(k);
        Word tau = tau_word(k);
        blk.insert(blk.end(), tau.begin(), tau.end());
        state_->blocks.push_back(Block{pos, std::move(blk)});
    }

    const GluingTable* table_;
    Word a_;
    Seq theta_;
    long n_ = 0;
    Word e_, f_;
    long s0_ = 0;
    std::unique_ptr<State> state_;
};

struct HTildeResult {
    HTildeSequence stream;
    BlockLayout layout;
};

// Build H-tilde with its layout, enforcing the §3 preconditions: theta
// inside the avoidance set of a's big factors, the gluing-scale side
// condition, and layout self-checks up to the horizon.
inline HTildeResult h_tilde(const Sft& sft, const GluingTable& table, const Word& a,
                            const Seq& theta, long horizon = 50) {
    if (a.size() % 2 == 0 || a.size() < 3) throw input_error("word a must have odd length >= 3");
    if (!is_admissible(sft, a)) throw input_error("word a must be admissible");
    if (!is_admissible(sft, theta)) throw input_error("sequence must be admissible");
    long n = (static_cast<long>(a.size()) - 1) / 2;
    if (!(n > 3 * table.max_len() + 1))
        throw domain_error("side condition n > 3 max|c| + 1 fails: n = " + std::to_string(n) +
                           ", max|c| = " + std::to_string(table.max_len()));
    WOneThird w = w_one_third(a);
    if (auto hit = find_forbidden_occurrence(theta, w.minimal_core))
        throw domain_error("theta leaves the avoidance set: forbidden factor at index " +
                           std::to_string(hit->index));

    HTildeResult out{HTildeSequence(table, a, theta), BlockLayout{}};
    out.layout = out.stream.layout(horizon);

    // Layout self-checks: the a-copy really sits at l(k), and the translated
    // windows tile [s_1, ...) consecutively.
    for (long k = 0; k <= std::min(horizon, 12L); ++k) {
        long lk = out.layout.l_of(k);
        if (out.stream.window(lk - n, lk + n) != a)
            throw domain_error("layout self-check failed: no a-copy at l(" + std::to_string(k) + ")");
    }
    for (long k = 1; k < horizon; ++k) {
        auto [ilo, ihi] = out.layout.I(k);
        long lo = out.layout.l_of(k) + ilo;
        long hi = out.layout.l_of(k) + ihi;
        if (lo != out.layout.tau_start.at(static_cast<size_t>(k)))
            throw domain_error("layout tiling broken at k = " + std::to_string(k));
        if (hi + 1 != out.layout.l_of(k + 1) + out.layout.I(k + 1).first)
            throw domain_error("layout windows do not abut at k = " + std::to_string(k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numerical verifier of the limsup mechanism.

struct Prop34PerK {
    long k = 0;
    long argmax_offset = 0;  // j with maximal value over I_k (first found)
    bool in_middle = false;
};

struct Prop34Report {
    bool pass = false;
    long j0 = 0;
    BigRat limsup = 0;
    bool cylinder_member = false;
    bool argmax_ok = false;        // every scanned k had its argmax in the middle
    bool stabilization_ok = false; // middle values froze at the predicted thresholds
    bool witness_ok = false;       // periodic witness reproduces the limsup exactly
    long k_lo = 0, k_hi = 0;
    std::pair<long, long> certificate_window{0, 0};
    Word witness_period;
    std::vector<Prop34PerK> per_k;
};

// Verify the limsup mechanism for a locally constant potential: scan every
// window l(k) + I_k of H-tilde, check the maximum lands in the
// k-independent middle, check middle values stabilize to the H_a values,
// and certify sigma^{j0} H_a(theta) lands in C_{-n}(a).
inline Prop34Report verify_prop34(const Sft& sft, const GluingTable& table, const Word& a,
                                  const Potential& p, const Seq& theta, long k_max = 50) {
    Sdh2Report gap = check_sdh2(sft, p, a);
    if (!gap.holds) throw domain_error("SDH2 gap hypothesis fails for this potential");
    if (!gap.side_condition_ok) throw domain_error("side condition n > 3 max|c| + 1 fails");
    long n = gap.n;
    long r = p.radius();

    HTildeResult ht = h_tilde(sft, table, a, theta, k_max + 1);
    const BlockLayout& lay = ht.layout;
    auto [mid_lo, mid_hi] = lay.middle();

    Prop34Report rep;
    rep.k_lo = 4 * n + 1;
    rep.k_hi = k_max;
    if (rep.k_lo > rep.k_hi)
        throw input_error("k_max must exceed 4n + 1 = " + std::to_string(4 * n + 1));

    auto g_at = [&](long pos) { return p.table_value(ht.stream.window(pos - r, pos + r)); };

    rep.argmax_ok = true;
    for (long k = rep.k_lo; k <= rep.k_hi; ++k) {
        auto [ilo, ihi] = lay.I(k);
        long base = lay.l_of(k);
        Prop34PerK pk;
        pk.k = k;
        std::optional<BigRat> best;
        for (long j = ilo; j <= ihi; ++j) {
            BigRat v = g_at(base + j);
            if (!best || v > *best) { best = v; pk.argmax_offset = j; }
        }
        pk.in_middle = pk.argmax_offset >= mid_lo && pk.argmax_offset <= mid_hi;
        rep.argmax_ok = rep.argmax_ok && pk.in_middle;
        rep.per_k.push_back(pk);
    }

    // Stabilization: beyond k*(j) the window around j + l(k) is filled by
    // H_a(theta)-agreeing symbols, so the locally constant value freezes.
    Seq ha = h_a(sft, table, a, theta);
    auto g_ha = [&](long j) { return p.table_value(ha.window(j - r, j + r)); };
    rep.stabilization_ok = true;
    for (long j = mid_lo; j <= mid_hi; ++j) {
        long need_left = -(j - r) - (n + lay.l + 1);   // k >= this for the left fill
        long need_right = (j + r) - (n + lay.m + 1);   // and this for the right fill
        long kstar = std::max({0L, need_left, need_right});
        BigRat limit = g_ha(j);
        for (long k = std::max(rep.k_lo, kstar); k <= rep.k_hi; ++k)
            if (g_at(lay.l_of(k) + j) != limit) { rep.stabilization_ok = false; break; }
        if (!rep.stabilization_ok) break;
    }

    // j0 = argmax of the limit values over the middle window.
    std::optional<BigRat> best;
    for (long j = mid_lo; j <= mid_hi; ++j) {
        BigRat v = g_ha(j);
        if (!best || v > *best) { best = v; rep.j0 = j; }
    }
    rep.limsup = *best;
    rep.cylinder_member = ha.window(rep.j0 - n, rep.j0 + n) == a;
    rep.certificate_window = {-(n + r + 1), n + r + 1};

    // Periodic witness: one (tau_K, glue-back) super-block repeated. Its
    // Lagrange value must reproduce the limsup exactly.
    {
        long K = rep.k_hi;
        Word period = ht.stream.window(lay.tau_start.at(static_cast<size_t>(K)),
                                       lay.tau_start.at(static_cast<size_t>(K)) + ht.stream.tau_len(K) - 1);
        const Word& back = table.word(theta.at(K + 1), theta.at(-K));
        period.insert(period.end(), back.begin(), back.end());
        rep.witness_period = period;
        Seq witness = Seq::periodic(period);
        if (!is_admissible(sft, witness)) throw domain_error("witness construction inadmissible");
        std::optional<BigRat> wmax;
        for (long j = 0; j < static_cast<long>(period.size()); ++j) {
            BigRat v = p.table_value(witness.window(j - r, j + r));
            if (!wmax || v > *wmax) wmax = v;
        }
        rep.witness_ok = *wmax == rep.limsup;
    }

    rep.pass = rep.argmax_ok && rep.stabilization_ok && rep.cylinder_member && rep.witness_ok;
    return rep;
}

// Off-middle suppression: the radius-n window at any off-middle offset of
// any scanned block shares a factor of length >= floor(|a|/3) with
// (theta_{-k}, ..., theta_k). Exposed for the property suite.
inline bool off_middle_suppressed(const HTildeResult& ht, long k) {
    const BlockLayout& lay = ht.layout;
    long n = lay.n;
    long q = (2 * n + 1) / 3;
    Word theta_word = ht.stream.source().window(-k, k);
    auto check_range = [&](std::pair<long, long> range) {
        for (long j = range.first; j <= range.second; ++j) {
            Word w = ht.stream.window(lay.l_of(k) + j - n, lay.l_of(k) + j + n);
            bool shares = false;
            for (long start = 0; start + q <= static_cast<long>(w.size()) && !shares; ++start) {
                Word sub(w.begin() + start, w.begin() + start + q);
                shares = contains_factor(theta_word, sub);
            }
            if (!shares) return false;
        }
        return true;
    };
    return check_range(lay.I_minus(k)) && check_range(lay.I_plus(k));
}

}  // namespace symdyn
