#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ldacs/numeric.hpp"

namespace ldacs {

constexpr int kFrameBits = 24;
constexpr int kCodedBits = 48;
constexpr int kConstraintLength = 7;
constexpr int kTailBits = kConstraintLength - 1;
constexpr unsigned kG0 = 0133;
constexpr unsigned kG1 = 0171;

// 802.11a scrambler LFSR x^7 + x^4 + 1 run from the given 7-bit state.
Bits lfsr_sequence(int n, unsigned seed = 0x7f);
// The 24-bit sequence frozen from the all-ones seed.
const Bits& default_scrambler_sequence();

Bits scramble(const Bits& frame, const Bits& seq);
Bits descramble(const Bits& frame, const Bits& seq);

enum class Termination {
    ZeroTail,   // six flush bits appended, decoder ends in state 0
    Truncated,  // no tail: 24 bits -> 48 coded bits, decoder picks the best end state
};

Bits conv_encode(const Bits& bits, Termination term = Termination::ZeroTail);
Bits viterbi_decode(const Bits& coded, Termination term = Termination::ZeroTail);

using InterleaverTable = std::vector<int>;

InterleaverTable default_interleaver();  // i = 3*(k mod 16) + floor(k/16)
InterleaverTable identity_interleaver(int n = kCodedBits);
bool is_permutation(const InterleaverTable& t);
InterleaverTable invert(const InterleaverTable& t);

Bits interleave(const Bits& bits, const InterleaverTable& table);
Bits deinterleave(const Bits& bits, const InterleaverTable& table);

int hamming(const Bits& a, const Bits& b);

}  // namespace ldacs
