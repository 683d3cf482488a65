#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/errors.hpp"
#include "symdyn/interval.hpp"

namespace symdyn {

using Symbol = int;
using Word = std::vector<Symbol>;

// Subshift of finite type: ordered alphabet plus 0/1 transition matrix.
// Immutable after construction. Symbols that admit no bi-infinite path are
// flagged as non-essential but kept in the alphabet so word counts and
// file round-trips stay faithful.
class Sft {
public:
    Sft(std::vector<std::string> names, std::vector<std::vector<bool>> transitions)
        : names_(std::move(names)), trans_(std::move(transitions)) {
        const size_t n = names_.size();
        if (n == 0) throw input_error("alphabet must be nonempty");
        if (trans_.size() != n) throw input_error("transition matrix row count != alphabet size");
        for (const auto& row : trans_)
            if (row.size() != n) throw input_error("transition matrix is not square");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (names_[i] == names_[j]) throw input_error("duplicate symbol: " + names_[i]);
        compute_essential();
    }

    // Full shift over the given symbols.
    static Sft full_shift(std::vector<std::string> names) {
        size_t n = names.size();
        return Sft(std::move(names), std::vector<std::vector<bool>>(n, std::vector<bool>(n, true)));
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(Symbol s) const { return names_.at(static_cast<size_t>(s)); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::vector<bool>>& transitions() const { return trans_; }

    Symbol symbol(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<Symbol>(i);
        throw input_error("unknown symbol: " + name);
    }
    bool has(Symbol s) const { return s >= 0 && s < size(); }

    bool admissible_pair(Symbol a, Symbol b) const {
        check_symbol(a);
        check_symbol(b);
        return trans_[static_cast<size_t>(a)][static_cast<size_t>(b)];
    }

    bool essential(Symbol s) const { check_symbol(s); return essential_[static_cast<size_t>(s)]; }
    std::vector<Symbol> essential_symbols() const {
        std::vector<Symbol> out;
        for (Symbol s = 0; s < size(); ++s)
            if (essential_[static_cast<size_t>(s)]) out.push_back(s);
        return out;
    }

    std::vector<Symbol> successors(Symbol a) const {
        check_symbol(a);
        std::vector<Symbol> out;
        for (Symbol b = 0; b < size(); ++b)
            if (trans_[static_cast<size_t>(a)][static_cast<size_t>(b)]) out.push_back(b);
        return out;
    }

private:
    void check_symbol(Symbol s) const {
        if (!has(s)) throw input_error("symbol index out of range");
    }
    // Iteratively prune symbols lacking an admissible successor or
    // predecessor; the survivors carry bi-infinite paths.
    void compute_essential() {
        const int n = size();
        essential_.assign(static_cast<size_t>(n), true);
        bool changed = true;
        while (changed) {
            changed = false;
            for (Symbol s = 0; s < n; ++s) {
                if (!essential_[static_cast<size_t>(s)]) continue;
                bool out = false, in = false;
                for (Symbol t = 0; t < n; ++t) {
                    if (!essential_[static_cast<size_t>(t)]) continue;
                    out |= trans_[static_cast<size_t>(s)][static_cast<size_t>(t)];
                    in |= trans_[static_cast<size_t>(t)][static_cast<size_t>(s)];
                }
                if (!out || !in) {
                    essential_[static_cast<size_t>(s)] = false;
                    changed = true;
                }
            }
        }
    }

    std::vector<std::string> names_;
    std::vector<std::vector<bool>> trans_;
    std::vector<bool> essential_;
};

inline std::string word_to_string(const Sft& sft, const Word& w) {
    bool compact = true;
    for (const auto& n : sft.names())
        if (n.size() != 1) { compact = false; break; }
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i && !compact) out += '-';
        out += sft.name(w[i]);
    }
    return out;
}

inline Word parse_word(const Sft& sft, const std::string& text) {
    Word w;
    if (text.find('-') != std::string::npos || text.find(',') != std::string::npos) {
        std::string cur;
        for (char ch : text + ",") {
            if (ch == '-' || ch == ',') {
                if (!cur.empty()) w.push_back(sft.symbol(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
    } else {
        for (char ch : text) w.push_back(sft.symbol(std::string(1, ch)));
    }
    if (w.empty()) throw input_error("empty word");
    return w;
}

// A word is admissible iff every consecutive pair is; single symbols
// always are. Unknown symbols are input errors.
inline bool is_admissible(const Sft& sft, const Word& w) {
    if (w.empty()) throw input_error("empty word has no admissibility verdict");
    for (Symbol s : w)
        if (!sft.has(s)) throw input_error("word contains unknown symbol index");
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (!sft.admissible_pair(w[i], w[i + 1])) return false;
    return true;
}

struct TransitivityReport {
    bool transitive = false;
    int essential_count = 0;
    std::vector<Symbol> non_essential;
    std::string reason;
};

namespace detail {
// Strongly connected components over a symbol subset, Tarjan-free
// (double BFS per node is fine at alphabet scale).
inline bool strongly_connected(const Sft& sft, const std::vector<Symbol>& nodes) {
    if (nodes.empty()) return false;
    std::vector<bool> keep(static_cast<size_t>(sft.size()), false);
    for (Symbol s : nodes) keep[static_cast<size_t>(s)] = true;
    auto reach = [&](Symbol from, bool forward) {
        std::vector<bool> seen(static_cast<size_t>(sft.size()), false);
        std::vector<Symbol> stack{from};
        seen[static_cast<size_t>(from)] = true;
        while (!stack.empty()) {
            Symbol u = stack.back();
            stack.pop_back();
            for (Symbol v = 0; v < sft.size(); ++v) {
                if (!keep[static_cast<size_t>(v)] || seen[static_cast<size_t>(v)]) continue;
                bool edge = forward ? sft.admissible_pair(u, v) : sft.admissible_pair(v, u);
                if (edge) { seen[static_cast<size_t>(v)] = true; stack.push_back(v); }
            }
        }
        return seen;
    };
    auto fwd = reach(nodes[0], true);
    auto bwd = reach(nodes[0], false);
    for (Symbol s : nodes)
        if (!fwd[static_cast<size_t>(s)] || !bwd[static_cast<size_t>(s)]) return false;
    return true;
}
}  // namespace detail

inline TransitivityReport transitivity_report(const Sft& sft) {
    TransitivityReport rep;
    auto ess = sft.essential_symbols();
    rep.essential_count = static_cast<int>(ess.size());
    for (Symbol s = 0; s < sft.size(); ++s)
        if (!sft.essential(s)) rep.non_essential.push_back(s);
    if (ess.empty()) {
        rep.transitive = false;
        rep.reason = "empty essential part";
        return rep;
    }
    rep.transitive = detail::strongly_connected(sft, ess);
    if (!rep.transitive) rep.reason = "essential part is not strongly connected";
    return rep;
}

inline bool is_transitive(const Sft& sft) { return transitivity_report(sft).transitive; }

// Period of the essential strongly connected graph: gcd over edges of
// level(u) + 1 - level(v) for a BFS level labeling.
inline long graph_period(const Sft& sft) {
    auto ess = sft.essential_symbols();
    if (ess.empty()) return 0;
    std::vector<long> level(static_cast<size_t>(sft.size()), -1);
    std::vector<Symbol> queue{ess[0]};
    level[static_cast<size_t>(ess[0])] = 0;
    size_t head = 0;
    while (head < queue.size()) {
        Symbol u = queue[head++];
        for (Symbol v : sft.successors(u)) {
            if (!sft.essential(v)) continue;
            if (level[static_cast<size_t>(v)] < 0) {
                level[static_cast<size_t>(v)] = level[static_cast<size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    long g = 0;
    for (Symbol u : ess)
        for (Symbol v : sft.successors(u)) {
            if (!sft.essential(v)) continue;
            long diff = level[static_cast<size_t>(u)] + 1 - level[static_cast<size_t>(v)];
            g = std::gcd(g, diff < 0 ? -diff : diff);
        }
    return g;
}

// Mixing = transitive + aperiodic (gcd of cycle lengths is 1). The
// positive-power characterization is kept in the tests as an oracle.
inline bool is_mixing(const Sft& sft) {
    if (!is_transitive(sft)) return false;
    return graph_period(sft) == 1;
}

// Smallest m with B^m entrywise positive, or nullopt when none exists up
// to the Wielandt bound (n-1)^2 + 1.
inline std::optional<long> mixing_power(const Sft& sft) {
    const int n = sft.size();
    std::vector<std::vector<bool>> pw = sft.transitions();
    long bound = static_cast<long>(n - 1) * (n - 1) + 1;
    for (long m = 1; m <= bound; ++m) {
        bool all = true;
        for (const auto& row : pw)
            for (bool e : row) all = all && e;
        if (all) return m;
        // pw <- pw * B
        std::vector<std::vector<bool>> next(static_cast<size_t>(n),
                                            std::vector<bool>(static_cast<size_t>(n), false));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (!pw[static_cast<size_t>(i)][static_cast<size_t>(k)]) continue;
                for (int j = 0; j < n; ++j)
                    if (sft.transitions()[static_cast<size_t>(k)][static_cast<size_t>(j)])
                        next[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
            }
        pw = std::move(next);
    }
    return std::nullopt;
}

// Shortest word c with (alpha, c, beta) admissible; empty when the pair
// itself is admissible. Among equal-length connectors the
// lexicographically least (canonical symbol order) is returned.
inline Word shortest_gluing_word(const Sft& sft, Symbol alpha, Symbol beta) {
    if (!sft.has(alpha) || !sft.has(beta)) throw input_error("gluing endpoints unknown");
    if (sft.admissible_pair(alpha, beta)) return {};
    // BFS over paths alpha -> ... -> v; per node keep the lexicographically
    // least symbol path of minimal length. Processing each level in sorted
    // path order makes the first assignment the least one.
    std::vector<bool> visited(static_cast<size_t>(sft.size()), false);
    std::vector<std::pair<Word, Symbol>> frontier;  // (path after alpha incl. node, node)
    for (Symbol v : sft.successors(alpha)) {
        frontier.push_back({Word{v}, v});
        visited[static_cast<size_t>(v)] = true;
    }
    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<std::pair<Word, Symbol>> next;
        for (const auto& [path, u] : frontier) {
            if (sft.admissible_pair(u, beta)) return path;  // c = path (interior word)
        }
        for (const auto& [path, u] : frontier) {
            for (Symbol v : sft.successors(u)) {
                if (visited[static_cast<size_t>(v)]) continue;
                visited[static_cast<size_t>(v)] = true;
                Word p = path;
                p.push_back(v);
                next.push_back({std::move(p), v});
            }
        }
        frontier = std::move(next);
    }
    throw domain_error("no gluing word connects " + sft.name(alpha) + " to " + sft.name(beta));
}

// One fixed shortest gluing word per ordered symbol pair, with the
// deterministic tie-break of shortest_gluing_word. Requires transitivity.
class GluingTable {
public:
    explicit GluingTable(const Sft& sft) : n_(sft.size()) {
        words_.resize(static_cast<size_t>(n_) * n_);
        for (Symbol a = 0; a < n_; ++a)
            for (Symbol b = 0; b < n_; ++b) {
                Word c = shortest_gluing_word(sft, a, b);
                max_len_ = std::max(max_len_, static_cast<long>(c.size()));
                words_[static_cast<size_t>(a) * n_ + b] = std::move(c);
            }
    }

    const Word& word(Symbol a, Symbol b) const {
        return words_.at(static_cast<size_t>(a) * n_ + b);
    }
    long max_len() const { return max_len_; }

    // Replace one entry, e.g. with a valid but non-minimal gluing word.
    // Breaks the minimality invariant on purpose; negative controls only.
    void override_word(Symbol a, Symbol b, Word c) {
        words_.at(static_cast<size_t>(a) * n_ + b) = std::move(c);
        max_len_ = 0;
        for (const auto& w : words_) max_len_ = std::max(max_len_, static_cast<long>(w.size()));
    }

private:
    int n_;
    long max_len_ = 0;
    std::vector<Word> words_;
};

// Exact word counts via big-integer matrix powers.
class WordCounter {
public:
    explicit WordCounter(const Sft& sft) : n_(sft.size()) {
        base_.assign(static_cast<size_t>(n_) * n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                base_[static_cast<size_t>(i) * n_ + j] = sft.transitions()[static_cast<size_t>(i)][static_cast<size_t>(j)] ? 1 : 0;
    }

    // (B^{len-1})_{alpha,beta} = number of admissible words of length len
    // starting at alpha and ending at beta.
    BigInt count_between(Symbol alpha, Symbol beta, long len) const {
        if (len < 1) throw input_error("word length must be >= 1");
        auto m = power(len - 1);
        return m[static_cast<size_t>(alpha) * n_ + beta];
    }
    BigInt count_total(long len) const {
        if (len < 1) throw input_error("word length must be >= 1");
        auto m = power(len - 1);
        BigInt total = 0;
        for (const auto& e : m) total += e;
        return total;
    }

private:
    std::vector<BigInt> mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) const {
        std::vector<BigInt> out(static_cast<size_t>(n_) * n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                const BigInt& aik = a[static_cast<size_t>(i) * n_ + k];
                if (aik == 0) continue;
                for (int j = 0; j < n_; ++j)
                    out[static_cast<size_t>(i) * n_ + j] += aik * b[static_cast<size_t>(k) * n_ + j];
            }
        return out;
    }
    std::vector<BigInt> power(long e) const {
        std::vector<BigInt> result(static_cast<size_t>(n_) * n_, 0);
        for (int i = 0; i < n_; ++i) result[static_cast<size_t>(i) * n_ + i] = 1;
        std::vector<BigInt> b = base_;
        while (e > 0) {
            if (e & 1) result = mul(result, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return result;
    }

    int n_;
    std::vector<BigInt> base_;
};

inline BigInt count_words(const Sft& sft, long len) {
    return WordCounter(sft).count_total(len);
}

// Explicit enumeration of admissible words (test oracle and small-scale
// machinery; callers keep len modest).
inline std::vector<Word> enumerate_words(const Sft& sft, long len) {
    if (len < 1) throw input_error("word length must be >= 1");
    std::vector<Word> out;
    Word cur;
    auto rec = [&](auto&& self, long remaining) -> void {
        if (remaining == 0) { out.push_back(cur); return; }
        for (Symbol s = 0; s < sft.size(); ++s) {
            if (!cur.empty() && !sft.admissible_pair(cur.back(), s)) continue;
            cur.push_back(s);
            self(self, remaining - 1);
            cur.pop_back();
        }
    };
    rec(rec, len);
    return out;
}

// Presentation of a subshift built from concatenations of a finite word
// family F: super-alphabet F, transition (a,b) admissible iff the
// concatenated word a.b is admissible in the ambient shift.
struct TowerPresentation {
    Sft base;                     // shift on the super-alphabet F
    long k = 0;                   // uniform word length (0 when mixed)
    std::vector<Word> embedding;  // F-symbol -> ambient word
};

inline TowerPresentation higher_block_recode(const Sft& sft, const std::vector<Word>& family) {
    if (family.empty()) throw input_error("empty word family");
    std::vector<Word> f;
    for (const auto& w : family) {
        if (!is_admissible(sft, w)) throw input_error("family word not admissible: " + word_to_string(sft, w));
        if (std::find(f.begin(), f.end(), w) == f.end()) f.push_back(w);
    }
    long k = static_cast<long>(f.front().size());
    for (const auto& w : f)
        if (static_cast<long>(w.size()) != k) { k = 0; break; }

    std::vector<std::string> names;
    names.reserve(f.size());
    for (const auto& w : f) names.push_back(word_to_string(sft, w));
    const size_t m = f.size();
    std::vector<std::vector<bool>> trans(m, std::vector<bool>(m, false));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            Word cat = f[i];
            cat.insert(cat.end(), f[j].begin(), f[j].end());
            trans[i][j] = is_admissible(sft, cat);
        }
    return TowerPresentation{Sft(std::move(names), std::move(trans)), k, std::move(f)};
}

// Tower of size k over a base shift: alphabet {(j, alpha)}, stepping the
// level j cyclically and consulting the base matrix at the wrap.
struct Tower {
    Sft sft;                        // the tower shift itself
    TowerPresentation presentation;  // base over F = {((0,a),...,(k-1,a))}
    long k = 1;
};

inline Tower build_tower(const Sft& base, long k) {
    if (k < 1) throw input_error("tower height must be >= 1");
    const int n = base.size();
    std::vector<std::string> names;
    for (long j = 0; j < k; ++j)
        for (int a = 0; a < n; ++a)
            names.push_back(std::to_string(j) + ":" + base.name(a));
    auto idx = [n](long j, int a) { return static_cast<size_t>(j) * n + a; };
    std::vector<std::vector<bool>> trans(names.size(), std::vector<bool>(names.size(), false));
    for (long j = 0; j < k; ++j)
        for (int a = 0; a < n; ++a)
            for (long i = 0; i < k; ++i)
                for (int b = 0; b < n; ++b) {
                    bool adm = (j < k - 1 && i == j + 1 && b == a) ||
                               (j == k - 1 && i == 0 && base.admissible_pair(a, b));
                    trans[idx(j, a)][idx(i, b)] = adm;
                }
    Sft tower(std::move(names), std::move(trans));
    std::vector<Word> family;
    family.reserve(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
        Word w;
        for (long j = 0; j < k; ++j) w.push_back(static_cast<Symbol>(idx(j, a)));
        family.push_back(std::move(w));
    }
    TowerPresentation pres = higher_block_recode(tower, family);
    return Tower{std::move(tower), std::move(pres), k};
}

// Level of a tower symbol as produced by build_tower ("j:name").
inline long tower_level(const Sft& tower, Symbol s) {
    const std::string& n = tower.name(s);
    auto pos = n.find(':');
    if (pos == std::string::npos) throw input_error("symbol lacks tower level: " + n);
    return std::stol(n.substr(0, pos));
}

// Return-word family: all b of length l - 2m + 1 such that
// 0^{2m-1} b 0^{2m-1} is admissible, together with the presentation on
// F = { 0^{2m-1} b }.
struct ReturnWords {
    std::vector<Word> words;  // the b's
    TowerPresentation presentation;
};

inline ReturnWords return_word_presentation(const Sft& sft, long zero_block_len, long l,
                                            Symbol zero) {
    if (zero_block_len < 1 || zero_block_len % 2 == 0)
        throw input_error("zero block length must be odd and positive");
    long m = (zero_block_len + 1) / 2;
    if (l <= 2 * m) throw input_error("block length must exceed 2m");
    if (!sft.admissible_pair(zero, zero))
        throw input_error("designated symbol lacks a self-loop: " + sft.name(zero));

    const long blen = l - 2 * m + 1;
    Word zeros(static_cast<size_t>(zero_block_len), zero);
    std::vector<Word> bs;
    Word cur;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<long>(cur.size()) == blen) {
            Word probe = zeros;
            probe.insert(probe.end(), cur.begin(), cur.end());
            probe.insert(probe.end(), zeros.begin(), zeros.end());
            if (is_admissible(sft, probe)) bs.push_back(cur);
            return;
        }
        for (Symbol s = 0; s < sft.size(); ++s) {
            if (!cur.empty() && !sft.admissible_pair(cur.back(), s)) continue;
            if (cur.empty() && !sft.admissible_pair(zero, s)) continue;
            cur.push_back(s);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);

    std::vector<Word> family;
    family.reserve(bs.size());
    for (const auto& b : bs) {
        Word w = zeros;
        w.insert(w.end(), b.begin(), b.end());
        family.push_back(std::move(w));
    }
    if (family.empty()) throw domain_error("no return words for given parameters");
    return ReturnWords{std::move(bs), higher_block_recode(sft, family)};
}

}  // namespace symdyn
