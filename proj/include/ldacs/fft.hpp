#pragma once

#include "ldacs/numeric.hpp"

namespace ldacs {

// Forward DFT without scaling.
CVec fft(const CVec& x);
// Inverse DFT including the 1/N factor, so fft(ifft(x)) == x.
CVec ifft(const CVec& x);

CVec fft64(const CVec& x);
CVec ifft64(const CVec& x);

// Swap halves: shifted (DC in the middle) <-> natural DFT order.
CVec fftshift(const CVec& x);
CVec ifftshift(const CVec& x);

}  // namespace ldacs
