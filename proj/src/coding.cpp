#include "ldacs/coding.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace ldacs {

Bits lfsr_sequence(int n, unsigned seed) {
    unsigned s = seed & 0x7f;
    Bits out(n);
    for (int i = 0; i < n; ++i) {
        // taps x^7 and x^4 are register bits 6 and 3
        unsigned fb = ((s >> 6) ^ (s >> 3)) & 1;
        s = ((s << 1) | fb) & 0x7f;
        out[i] = uint8_t(fb);
    }
    return out;
}

const Bits& default_scrambler_sequence() {
    static const Bits seq = lfsr_sequence(kFrameBits);
    return seq;
}

Bits scramble(const Bits& frame, const Bits& seq) {
    require(frame.size() == seq.size(), "scramble: length mismatch");
    Bits out(frame.size());
    for (size_t i = 0; i < frame.size(); ++i) out[i] = (frame[i] ^ seq[i]) & 1;
    return out;
}

Bits descramble(const Bits& frame, const Bits& seq) { return scramble(frame, seq); }

namespace {

inline uint8_t parity(unsigned v) { return uint8_t(std::popcount(v) & 1); }

// Register word: bit 6 is the current input, bit 0 the input six steps back.
inline void branch(unsigned state, unsigned u, unsigned& next, uint8_t& o0, uint8_t& o1) {
    unsigned w = (u << 6) | state;
    o0 = parity(w & kG0);
    o1 = parity(w & kG1);
    next = w >> 1;
}

}  // namespace

Bits conv_encode(const Bits& bits, Termination term) {
    Bits in = bits;
    if (term == Termination::ZeroTail) in.insert(in.end(), kTailBits, 0);
    Bits out;
    out.reserve(in.size() * 2);
    unsigned state = 0;
    for (uint8_t b : in) {
        uint8_t o0, o1;
        branch(state, b & 1u, state, o0, o1);
        out.push_back(o0);
        out.push_back(o1);
    }
    return out;
}

Bits viterbi_decode(const Bits& coded, Termination term) {
    require(coded.size() % 2 == 0, "viterbi_decode: odd coded length");
    const int steps = int(coded.size() / 2);
    constexpr int S = 64;
    constexpr int INF = std::numeric_limits<int>::max() / 4;

    // precomputed trellis: for each (state, input) the next state and output pair
    static const auto trellis = [] {
        std::array<std::array<std::array<unsigned, 3>, 2>, S> t{};
        for (unsigned s = 0; s < S; ++s)
            for (unsigned u = 0; u < 2; ++u) {
                unsigned nx;
                uint8_t a, b;
                branch(s, u, nx, a, b);
                t[s][u] = {nx, a, b};
            }
        return t;
    }();

    std::array<int, S> metric;
    metric.fill(INF);
    metric[0] = 0;
    // survivor: predecessor state for each (step, state)
    std::vector<std::array<uint8_t, S>> pred(steps);

    for (int t = 0; t < steps; ++t) {
        std::array<int, S> nm;
        nm.fill(INF);
        const uint8_t r0 = coded[2 * t] & 1, r1 = coded[2 * t + 1] & 1;
        for (unsigned s = 0; s < S; ++s) {
            if (metric[s] >= INF) continue;
            for (unsigned u = 0; u < 2; ++u) {
                const auto& e = trellis[s][u];
                int m = metric[s] + (e[1] != r0) + (e[2] != r1);
                // strict < keeps the lowest-numbered predecessor on ties
                if (m < nm[e[0]]) {
                    nm[e[0]] = m;
                    pred[t][e[0]] = uint8_t(s);
                }
            }
        }
        metric = nm;
    }

    unsigned state = 0;
    if (term == Termination::Truncated)
        state = unsigned(std::min_element(metric.begin(), metric.end()) - metric.begin());

    Bits decoded(steps);
    for (int t = steps - 1; t >= 0; --t) {
        decoded[t] = uint8_t((state >> 5) & 1);  // newest input sits in bit 5
        state = pred[t][state];
    }
    if (term == Termination::ZeroTail) {
        require(steps >= kTailBits, "viterbi_decode: shorter than the tail");
        decoded.resize(steps - kTailBits);
    }
    return decoded;
}

InterleaverTable default_interleaver() {
    InterleaverTable t(kCodedBits);
    for (int k = 0; k < kCodedBits; ++k) t[k] = (kCodedBits / 16) * (k % 16) + k / 16;
    return t;
}

InterleaverTable identity_interleaver(int n) {
    InterleaverTable t(n);
    for (int k = 0; k < n; ++k) t[k] = k;
    return t;
}

bool is_permutation(const InterleaverTable& t) {
    std::vector<char> seen(t.size(), 0);
    for (int p : t) {
        if (p < 0 || size_t(p) >= t.size() || seen[p]) return false;
        seen[p] = 1;
    }
    return true;
}

InterleaverTable invert(const InterleaverTable& t) {
    InterleaverTable inv(t.size());
    for (size_t k = 0; k < t.size(); ++k) inv[t[k]] = int(k);
    return inv;
}

Bits interleave(const Bits& bits, const InterleaverTable& table) {
    require(bits.size() == size_t(kCodedBits) && table.size() == bits.size(),
            "interleave: expects 48 bits");
    Bits out(bits.size());
    for (size_t k = 0; k < bits.size(); ++k) out[table[k]] = bits[k];
    return out;
}

Bits deinterleave(const Bits& bits, const InterleaverTable& table) {
    require(bits.size() == size_t(kCodedBits) && table.size() == bits.size(),
            "deinterleave: expects 48 bits");
    Bits out(bits.size());
    for (size_t k = 0; k < bits.size(); ++k) out[k] = bits[table[k]];
    return out;
}

int hamming(const Bits& a, const Bits& b) {
    require(a.size() == b.size(), "hamming: length mismatch");
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (a[i] & 1) != (b[i] & 1);
    return d;
}

}  // namespace ldacs
