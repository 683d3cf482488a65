#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "symdyn/spectrum.hpp"

using namespace symdyn;

namespace {

Sft digits12() { return Sft::full_shift({"1", "2"}); }
Sft digits19() {
    std::vector<std::string> names;
    for (int d = 1; d <= 9; ++d) names.push_back(std::to_string(d));
    return Sft::full_shift(names);
}

Interval sqrt_of(long n) { return Interval::sqrt_int(n); }

// Truncated continued fraction [d(i0); d(i0+1), ..., d(i0+terms)] evaluated
// backward in high precision.
BigFloat truncated_cf(const Seq& seq, const Potential& p, long i0, long terms, int dir) {
    BigFloat x(static_cast<long>(p.digit(seq.at(i0 + dir * terms))));
    for (long k = terms - 1; k >= 0; --k) {
        BigFloat d(static_cast<long>(p.digit(seq.at(i0 + dir * k))));
        x = add(d, div(BigFloat(1L), x, MPFR_RNDN), MPFR_RNDN);
    }
    return x;
}

// Independent deep-truncation oracle for the cf_sum potential.
BigFloat cf_sum_oracle(const Seq& seq, const Potential& p, long terms = 10000) {
    BigFloat fwd = truncated_cf(seq, p, 0, terms, +1);
    BigFloat bwd = truncated_cf(seq, p, -1, terms, -1);
    return add(fwd, div(BigFloat(1L), bwd, MPFR_RNDN), MPFR_RNDN);
}

}  // namespace

TEST_CASE("cf_sum on constant sequences") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);

    Seq ones = Seq::constant(s.symbol("1"));
    ValueEnclosure v1 = evaluate(p, ones);
    REQUIRE(v1.width() < 1e-20);
    Interval root5 = sqrt_of(5);
    REQUIRE(v1.value.intersects(root5));

    Seq twos = Seq::constant(s.symbol("2"));
    ValueEnclosure v2 = evaluate(p, twos);
    Interval twor2 = Interval(2L) * sqrt_of(2);
    REQUIRE(v2.value.intersects(twor2));
    REQUIRE(v2.width() < 1e-20);
}

TEST_CASE("locally constant evaluation is exact") {
    Sft s = Sft::full_shift({"0", "1"});
    Potential p = Potential::cylinder_indicator(s, parse_word(s, "0"), 1, 0);
    // theta_0 = 0 hits the cylinder C_0((0)).
    Seq in_cyl(Word{1}, Word{0}, Word{1}, 0);
    ValueEnclosure v = evaluate(p, in_cyl);
    REQUIRE(v.value.lo() == v.value.hi());
    REQUIRE(v.value.contains(BigFloat(1L)));

    Seq out_cyl = Seq::constant(1);
    REQUIRE(evaluate(p, out_cyl).value.contains(BigFloat(0L)));
}

TEST_CASE("two-symbol window indicator") {
    Sft s = Sft::full_shift({"0", "1"});
    // Indicator of C_0((0,1)) has even length; realize it as a radius-1
    // table that reads theta_{-1..1} and ignores theta_{-1}.
    std::map<Word, BigRat> table;
    for (const Word& w : enumerate_words(s, 3)) table[w] = (w[1] == 0 && w[2] == 1) ? 1 : 0;
    Potential p = Potential::locally_constant(s, 1, table);
    Seq hit(Word{1}, Word{0, 1}, Word{0}, 0);
    REQUIRE(evaluate(p, hit).value.contains(BigFloat(1L)));
}

TEST_CASE("cf digits must be positive") {
    Sft s = Sft::full_shift({"0", "1"});
    Potential p = Potential::cf_sum(s);
    REQUIRE_THROWS_AS(evaluate(p, Seq::constant(s.symbol("0"))), domain_error);
}

TEST_CASE("var_bound is honored by random agreeing pairs") {
    Sft s = digits19();
    std::mt19937 rng(606);
    for (PotentialKind kind : {PotentialKind::cf_sum, PotentialKind::cf_product}) {
        Potential p = kind == PotentialKind::cf_sum ? Potential::cf_sum(s) : Potential::cf_product(s);
        int trials = 0;
        while (trials < 1100) {
            long n = 1 + static_cast<long>(rng() % 30);
            // Common window [-n, n], independent periodic tails beyond it.
            auto rand_word = [&](long len) {
                Word w;
                for (long i = 0; i < len; ++i) w.push_back(static_cast<Symbol>(rng() % 9));
                return w;
            };
            Word common = rand_word(2 * n + 1);
            Seq a(rand_word(3 + rng() % 3), common, rand_word(3 + rng() % 3), -n);
            Seq b(rand_word(3 + rng() % 3), common, rand_word(3 + rng() % 3), -n);
            double diff = std::abs((evaluate(p, a).value - evaluate(p, b).value).mid());
            REQUIRE(diff <= p.var_bound(n));
            ++trials;
        }
        // Monotone nonincreasing and decaying.
        for (long n = 1; n < 40; ++n) REQUIRE(p.var_bound(n + 1) <= p.var_bound(n));
        REQUIRE(p.var_bound(40) < 1e-15);
    }
}

TEST_CASE("closed form agrees with 10000-term truncated iteration") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);
    for (const Word& orbit : enumerate_orbits(s, 6)) {
        Seq seq = Seq::periodic(orbit);
        ValueEnclosure closed = evaluate(p, seq);
        BigFloat iter = cf_sum_oracle(seq, p);
        BigFloat gap = abs_rnd(sub(iter, closed.value.lo(), MPFR_RNDN), MPFR_RNDU);
        REQUIRE(gap.to_double() < 1e-20);
    }
}

TEST_CASE("markov value of a lone 2 among 1s") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);
    Seq theta(Word{s.symbol("1")}, Word{s.symbol("2")}, Word{s.symbol("1")}, 0);
    ValueEnclosure mv = markov_value(p, theta);
    // Attained at the core position: [2; 1,1,...] + [0; 1,1,...] = 1 + sqrt5.
    Interval expect = Interval(1L) + sqrt_of(5);
    REQUIRE(mv.value.intersects(expect));
    REQUIRE(mv.width() < 1e-20);

    // Deep-truncation oracle at the attaining shift.
    BigFloat oracle = cf_sum_oracle(theta, p);
    REQUIRE(std::abs(sub(oracle, mv.value.lo(), MPFR_RNDN).to_double()) < 1e-25);
}

TEST_CASE("markov value is exactly shift invariant") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);
    Seq theta(Word{s.symbol("1"), s.symbol("2")}, Word{s.symbol("2"), s.symbol("2")},
              Word{s.symbol("1")}, -1);
    ValueEnclosure base = markov_value(p, theta);
    for (long j = -10; j <= 10; ++j) {
        ValueEnclosure shifted = markov_value(p, shift(theta, j));
        REQUIRE(shifted.value.lo() == base.value.lo());
        REQUIRE(shifted.value.hi() == base.value.hi());
    }
}

TEST_CASE("markov value of a shift-invariant sequence") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);
    ValueEnclosure mv = markov_value(p, Seq::constant(s.symbol("1")));
    REQUIRE(mv.value.intersects(sqrt_of(5)));
}

TEST_CASE("lagrange value ignores core and left tail") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);
    Seq theta(Word{s.symbol("2")}, Word{s.symbol("2"), s.symbol("2")}, Word{s.symbol("1")}, 0);
    ValueEnclosure lv = lagrange_value(p, theta);
    REQUIRE(lv.value.intersects(sqrt_of(5)));
    REQUIRE(lv.width() < 1e-20);
}

TEST_CASE("lagrange value of a period-2 tail takes the orbit maximum") {
    Sft s = digits12();
    Potential p = Potential::cf_sum(s);
    Word period{s.symbol("1"), s.symbol("2")};
    Seq theta(Word{s.symbol("1")}, Word{}, period, 0);
    ValueEnclosure lv = lagrange_value(p, theta);
    Seq pure = Seq::periodic(period);
    Interval a = evaluate(p, pure).value;
    Interval b = evaluate(p, shift(pure, 1)).value;
    REQUIRE(lv.value.intersects(Interval::vmax(a, b)));
    REQUIRE(a.mid() <= lv.value.mid());
    REQUIRE(b.mid() <= lv.value.mid());
}

TEST_CASE("lagrange never exceeds markov") {
    Sft s = digits12();
    std::mt19937 rng(77);
    for (PotentialKind kind : {PotentialKind::cf_sum, PotentialKind::cf_product}) {
        Potential p = kind == PotentialKind::cf_sum ? Potential::cf_sum(s) : Potential::cf_product(s);
        for (int t = 0; t < 40; ++t) {
            auto rand_word = [&](long len) {
                Word w;
                for (long i = 0; i < len; ++i) w.push_back(static_cast<Symbol>(rng() % 2));
                return w;
            };
            Seq theta(rand_word(1 + rng() % 3), rand_word(rng() % 4), rand_word(1 + rng() % 3), 0);
            ValueEnclosure lv = lagrange_value(p, theta);
            ValueEnclosure mv = markov_value(p, theta);
            REQUIRE(lv.value.lo() <= mv.value.hi());
        }
    }
}

TEST_CASE("locally constant potential with support off the tail") {
    Sft s = Sft::full_shift({"0", "1"});
    Potential p = Potential::cylinder_indicator(s, parse_word(s, "010"), 1, 0);
    // Right tail all zeros never shows 010 centered; lagrange = base value 0.
    Seq theta(Word{1}, Word{0, 1, 0}, Word{0}, -1);
    REQUIRE(lagrange_value(p, theta).value.contains(BigFloat(0L)));
    // But the Markov value sees the core window once.
    REQUIRE(markov_value(p, theta).value.contains(BigFloat(1L)));
}
