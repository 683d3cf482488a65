#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "symdyn/avoidance.hpp"

using namespace symdyn;

namespace {

Sft full3() { return Sft::full_shift({"0", "1", "2"}); }
Sft full2() { return Sft::full_shift({"0", "1"}); }

Sft random_mixing_sft(std::mt19937& rng, int n, double density = 0.7) {
    for (;;) {
        std::bernoulli_distribution coin(density);
        std::vector<std::vector<bool>> t(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n)));
        for (auto& row : t)
            for (size_t j = 0; j < row.size(); ++j) row[j] = coin(rng);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
        Sft s(std::move(names), std::move(t));
        if (is_mixing(s) && static_cast<int>(s.essential_symbols().size()) == n) return s;
    }
}

Word random_admissible_word(std::mt19937& rng, const Sft& sft, long len) {
    for (;;) {
        Word w;
        w.push_back(static_cast<Symbol>(rng() % static_cast<unsigned long>(sft.size())));
        while (static_cast<long>(w.size()) < len) {
            auto succ = sft.successors(w.back());
            if (succ.empty()) break;
            w.push_back(succ[rng() % succ.size()]);
        }
        if (static_cast<long>(w.size()) == len) return w;
    }
}

}  // namespace

TEST_CASE("w_one_third factor sets") {
    Sft s = full3();
    Word a = parse_word(s, "000111222");
    WOneThird w = w_one_third(a);
    REQUIRE(w.threshold == 3);
    REQUIRE(w.minimal_core.words.size() == 7);
    REQUIRE(w.full.words.size() == 28);

    std::set<Word> core(w.minimal_core.words.begin(), w.minimal_core.words.end());
    std::set<Word> expect;
    for (const char* t : {"000", "001", "011", "111", "112", "122", "222"})
        expect.insert(parse_word(s, t));
    REQUIRE(core == expect);

    // Degenerate short word: threshold 1 forbids single symbols.
    Sft s2 = full2();
    WOneThird w2 = w_one_third(parse_word(s2, "01010"));
    REQUIRE(w2.threshold == 1);
    std::set<Word> core2(w2.minimal_core.words.begin(), w2.minimal_core.words.end());
    REQUIRE(core2 == std::set<Word>{Word{0}, Word{1}});

    REQUIRE_THROWS_AS(w_one_third(Word{0, 1}), input_error);
}

TEST_CASE("minimize removes factor-redundant words") {
    ForbiddenSet fs{{Word{0, 1}, Word{0, 1, 0}, Word{1, 1, 1}, Word{1, 1, 1}}, false};
    ForbiddenSet m = minimize(fs);
    REQUIRE(m.minimal);
    REQUIRE(m.words.size() == 2);  // 010 contains 01; duplicate dropped
}

TEST_CASE("avoidance presentation keeps the period-3 cycle") {
    Sft s = full3();
    WOneThird w = w_one_third(parse_word(s, "000111222"));
    AvoidanceSft av = build_avoidance_sft(s, w.minimal_core);
    REQUIRE_FALSE(av.empty_subshift);
    REQUIRE(av.presentation.size() == 9);  // all 2-words are states

    // 012, 120, 201 are allowed merged windows: the 0->1->2->0 cycle lifts.
    auto idx = [&](const char* t) { return av.presentation.symbol(t); };
    REQUIRE(av.presentation.admissible_pair(idx("01"), idx("12")));
    REQUIRE(av.presentation.admissible_pair(idx("12"), idx("20")));
    REQUIRE(av.presentation.admissible_pair(idx("20"), idx("01")));
}

TEST_CASE("forbidding every symbol empties the subshift") {
    Sft s = full2();
    AvoidanceSft av = build_avoidance_sft(s, ForbiddenSet{{Word{0}, Word{1}}, true});
    REQUIRE(av.empty_subshift);
}

TEST_CASE("empty forbidden set reproduces the ambient shift") {
    Sft g({"0", "1"}, {{true, true}, {true, false}});
    AvoidanceSft av = build_avoidance_sft(g, ForbiddenSet{{}, true});
    REQUIRE(av.presentation.size() == 2);
    for (Symbol a = 0; a < 2; ++a)
        for (Symbol b = 0; b < 2; ++b) {
            Symbol pa = av.presentation.symbol(g.name(a));
            Symbol pb = av.presentation.symbol(g.name(b));
            REQUIRE(av.presentation.admissible_pair(pa, pb) == g.admissible_pair(a, b));
        }
}

TEST_CASE("empty outcome reports a killer word") {
    // Forbid both 2-windows that could follow a 0 and everything after 1.
    Sft s = full2();
    ForbiddenSet fs{{Word{0, 0}, Word{0, 1}, Word{1, 0}, Word{1, 1}}, true};
    AvoidanceSft av = build_avoidance_sft(s, fs);
    REQUIRE(av.empty_subshift);
    REQUIRE(av.last_killer.has_value());
    REQUIRE_FALSE(av.reject_counts.empty());
}

TEST_CASE("language equivalence against brute force") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        Sft s = random_mixing_sft(rng, n);
        long alen = 6 + static_cast<long>(rng() % 7);  // 6..12
        Word a = random_admissible_word(rng, s, alen);
        WOneThird w = w_one_third(a);
        AvoidanceSft av = build_avoidance_sft(s, w.minimal_core);
        for (long L : {2L, 4L, 6L, 8L}) {
            auto brute = factor_avoiding_language(s, w.minimal_core, L);
            auto lang = avoidance_language(av, L);
            REQUIRE(lang == brute);
        }
    }
}

TEST_CASE("minimal core and full set give the same language") {
    std::mt19937 rng(515);
    for (int trial = 0; trial < 10; ++trial) {
        Sft s = random_mixing_sft(rng, 2 + static_cast<int>(rng() % 2));
        Word a = random_admissible_word(rng, s, 6 + static_cast<long>(rng() % 4));
        WOneThird w = w_one_third(a);
        AvoidanceSft core = build_avoidance_sft(s, w.minimal_core);
        AvoidanceSft full = build_avoidance_sft(s, w.full);
        for (long L : {3L, 5L, 8L})
            REQUIRE(avoidance_language(core, L) == avoidance_language(full, L));
    }
}

TEST_CASE("monotonicity: larger forbidden sets shrink the language") {
    std::mt19937 rng(616);
    for (int trial = 0; trial < 15; ++trial) {
        Sft s = random_mixing_sft(rng, 2);
        Word a = random_admissible_word(rng, s, 7);
        Word b = random_admissible_word(rng, s, 7);
        WOneThird wa = w_one_third(a);
        ForbiddenSet bigger = wa.minimal_core;
        WOneThird wb = w_one_third(b);
        for (const auto& w : wb.minimal_core.words) bigger.words.push_back(w);
        bigger.minimal = false;
        AvoidanceSft small_av = build_avoidance_sft(s, wa.minimal_core);
        AvoidanceSft big_av = build_avoidance_sft(s, bigger);
        for (long L : {4L, 8L}) {
            auto small_lang = avoidance_language(small_av, L);
            auto big_lang = avoidance_language(big_av, L);
            for (const auto& w : big_lang) REQUIRE(small_lang.count(w) == 1);
        }
    }
}

TEST_CASE("prop 3.1 condition scan on the full 2-shift") {
    // 2^(k-1) > 6 k^2 first holds at k = 11.
    long first = 0;
    for (long k = 1; k <= 40 && first == 0; ++k) {
        BigInt lhs = BigInt(1) << (k - 1);
        if (lhs > BigInt(6) * k * k) first = k;
    }
    REQUIRE(first == 11);

    Sft s = full2();
    // |a| = 33 = 3*1*11 triggers the condition exactly at k = 11.
    std::mt19937 rng(33);
    Word a = random_admissible_word(rng, s, 33);
    Prop31Report rep = check_prop31(s, a);
    REQUIRE(rep.m == 1);
    REQUIRE(rep.k == 11);
    REQUIRE_FALSE(rep.k_adjusted);
    REQUIRE(rep.condition_holds);
    REQUIRE(rep.transitive);
}

TEST_CASE("prop 3.1 on the 000111222 example") {
    Sft s = full3();
    Prop31Report rep = check_prop31(s, parse_word(s, "000111222"));
    REQUIRE(rep.m == 1);
    REQUIRE(rep.k == 3);
    REQUIRE_FALSE(rep.condition_holds);  // 9 > 54 fails
    REQUIRE(rep.transitive);             // yet the subshift is transitive
    REQUIRE(rep.forbidden_minimal_count == 7);
}

TEST_CASE("prop 3.1 rejects non-mixing ambient shifts") {
    Sft two_cycle({"0", "1"}, {{false, true}, {true, false}});
    REQUIRE_THROWS_AS(check_prop31(two_cycle, Word{0, 1, 0}), domain_error);
}

TEST_CASE("prop 3.1 soundness sweep: condition implies transitive") {
    std::mt19937 rng(808);
    int tested = 0;
    while (tested < 60) {
        int n = 3 + static_cast<int>(rng() % 2);  // alphabets 3..4
        Sft s = random_mixing_sft(rng, n, 0.85);
        if (*mixing_power(s) != 1) continue;
        // Smallest k with n^(k-1) > 6 k^2, word length 3k (m = 1).
        long k = 1;
        while (true) {
            BigInt lhs = 1;
            for (long i = 0; i < k - 1; ++i) lhs *= n;
            if (lhs > BigInt(6) * k * k) break;
            ++k;
        }
        long alen = 3 * k + 1 - ((3 * k + 1) % 2 == 0 ? 1 : 0);  // odd, >= 3k
        if (alen < 3 * k) alen = 3 * k + (3 * k % 2 == 0 ? 1 : 0);
        Word a = random_admissible_word(rng, s, alen);
        Prop31Report rep = check_prop31(s, a);
        if (!rep.condition_holds) continue;
        REQUIRE(rep.transitive);
        ++tested;
    }
}

TEST_CASE("prop 3.2 reduces to prop 3.1 at height 1") {
    Sft s = full2();
    Tower t = build_tower(s, 1);
    std::mt19937 rng(99);
    Word a = random_admissible_word(rng, t.sft, 9);
    Prop32Report rep = check_prop32(t, a);
    REQUIRE(rep.alignment_shift == 0);
    REQUIRE(rep.base_word.size() == 9);
    REQUIRE(rep.decomposition_ok);

    // Same verdicts as running prop 3.1 directly on the decoded word.
    Word direct;
    for (Symbol b : rep.base_word) direct.push_back(b);
    Prop31Report base = check_prop31(t.presentation.base, direct);
    REQUIRE(base.condition_holds == rep.base_report.condition_holds);
    REQUIRE(base.transitive == rep.base_report.transitive);
}

TEST_CASE("prop 3.2 on a height-2 tower over the full 2-shift") {
    Tower t = build_tower(Sft::full_shift({"0", "1"}), 2);
    // Word of length 2*(2n+1): walk the tower graph from level 0.
    std::mt19937 rng(7070);
    Word a;
    for (int attempt = 0; attempt < 1000 && a.empty(); ++attempt) {
        Word w = random_admissible_word(rng, t.sft, 14);
        if (tower_level(t.sft, w[0]) == 0) a = w;
    }
    REQUIRE_FALSE(a.empty());
    Prop32Report rep = check_prop32(t, a);
    REQUIRE(rep.full_alignment);
    REQUIRE(rep.base_word.size() == 7);
    REQUIRE(rep.decomposition_ok);
    REQUIRE(rep.states > 0);
    REQUIRE(rep.transitive);

    // Length not divisible by the height is an input error.
    REQUIRE_THROWS_AS(check_prop32(t, Word(a.begin(), a.begin() + 13)), input_error);
}
