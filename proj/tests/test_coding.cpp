#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "ldacs/coding.hpp"

using namespace ldacs;

namespace {

Bits random_bits(std::mt19937_64& rng, int n) {
    Bits b(size_t(n), 0);
    for (auto& x : b) x = uint8_t(rng() & 1);
    return b;
}

Bits bits_of(uint32_t v, int n) {
    Bits b(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) b[size_t(i)] = uint8_t((v >> i) & 1);
    return b;
}

// Straight shift-register encoder, written out independently of the library.
Bits ref_encode(const Bits& in, bool tail) {
    Bits u = in;
    if (tail) u.insert(u.end(), 6, 0);
    Bits out;
    unsigned reg = 0;  // bit k holds u[t-k]
    for (uint8_t b : u) {
        reg = ((reg << 1) | b) & 0x7f;
        int a = 0, c = 0;
        for (int k = 0; k < 7; ++k) {
            const int bit = (reg >> k) & 1;
            a ^= bit & ((kG0 >> (6 - k)) & 1);
            c ^= bit & ((kG1 >> (6 - k)) & 1);
        }
        out.push_back(uint8_t(a));
        out.push_back(uint8_t(c));
    }
    return out;
}

}  // namespace

TEST_CASE("scrambler sequence and involution") {
    const Bits& seq = default_scrambler_sequence();
    REQUIRE(seq.size() == 24);
    // 802.11a all-ones seed starts 0000 1110 1111 0010 1100 1001
    const Bits head = {0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 1};
    CHECK(seq == head);
    CHECK(lfsr_sequence(127 * 2).size() == 254);
    Bits long_seq = lfsr_sequence(254);
    CHECK(std::equal(long_seq.begin(), long_seq.begin() + 127, long_seq.begin() + 127));
    CHECK(scramble(Bits(24, 0), seq) == seq);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        Bits x = random_bits(rng, 24);
        CHECK(descramble(scramble(x, seq), seq) == x);
    }
    CHECK_THROWS_AS(scramble(Bits(23, 0), seq), ContractViolation);
}

TEST_CASE("encoder impulse response") {
    Bits imp(24, 0);
    imp[0] = 1;
    Bits c = conv_encode(imp, Termination::Truncated);
    REQUIRE(c.size() == 48);
    Bits a, b;
    for (int t = 0; t < 7; ++t) {
        a.push_back(c[size_t(2 * t)]);
        b.push_back(c[size_t(2 * t + 1)]);
    }
    CHECK(a == Bits{1, 0, 1, 1, 0, 1, 1});
    CHECK(b == Bits{1, 1, 1, 1, 0, 0, 1});
    CHECK(conv_encode(Bits(24, 0), Termination::ZeroTail) == Bits(60, 0));
}

TEST_CASE("encoder matches shift register and is linear") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        Bits x = random_bits(rng, 24), y = random_bits(rng, 24);
        CHECK(conv_encode(x, Termination::ZeroTail) == ref_encode(x, true));
        CHECK(conv_encode(x, Termination::Truncated) == ref_encode(x, false));
        Bits s(24);
        for (int k = 0; k < 24; ++k) s[size_t(k)] = x[size_t(k)] ^ y[size_t(k)];
        Bits cx = conv_encode(x), cy = conv_encode(y), cs = conv_encode(s);
        for (size_t k = 0; k < cs.size(); ++k) CHECK(cs[k] == (cx[k] ^ cy[k]));
    }
}

TEST_CASE("viterbi round trip, exhaustive over 10-bit messages") {
    for (uint32_t v = 0; v < 1024; ++v) {
        Bits m = bits_of(v, 10);
        CHECK(viterbi_decode(conv_encode(m, Termination::ZeroTail), Termination::ZeroTail) == m);
        CHECK(viterbi_decode(conv_encode(m, Termination::Truncated), Termination::Truncated) == m);
    }
}

TEST_CASE("viterbi equals brute-force maximum likelihood") {
    std::mt19937_64 rng(3);
    for (int len : {6, 9, 12}) {
        std::vector<Bits> book;
        for (uint32_t v = 0; v < (1u << len); ++v) book.push_back(ref_encode(bits_of(v, len), true));
        for (int trial = 0; trial < 40; ++trial) {
            Bits r = random_bits(rng, 2 * (len + 6));
            int best = 1 << 30;
            for (const auto& c : book) best = std::min(best, hamming(c, r));
            Bits d = viterbi_decode(r, Termination::ZeroTail);
            CHECK(hamming(ref_encode(d, true), r) == best);
        }
    }
}

TEST_CASE("single bit errors are corrected") {
    std::mt19937_64 rng(4);
    Bits m = random_bits(rng, 24);
    for (auto term : {Termination::ZeroTail, Termination::Truncated}) {
        const Bits c = conv_encode(m, term);
        // with truncation the last few coded bits are weakly protected
        const size_t span = term == Termination::ZeroTail ? c.size() : c.size() - 12;
        for (size_t k = 0; k < span; ++k) {
            Bits r = c;
            r[k] ^= 1;
            CHECK(viterbi_decode(r, term) == m);
        }
    }
}

TEST_CASE("interleaver") {
    InterleaverTable t = default_interleaver();
    REQUIRE(t.size() == 48);
    CHECK(is_permutation(t));
    CHECK(t[1] == 3);
    CHECK(t[16] == 1);
    InterleaverTable inv = invert(t);
    CHECK(inv[3] == 1);
    for (int k = 0; k < 48; ++k) CHECK(inv[size_t(t[size_t(k)])] == k);
    std::mt19937_64 rng(5);
    Bits x = random_bits(rng, 48);
    Bits y = interleave(x, t);
    CHECK(y[3] == x[1]);
    CHECK(deinterleave(y, t) == x);
    CHECK(interleave(x, identity_interleaver()) == x);
    CHECK_FALSE(is_permutation({0, 0, 1}));
}
