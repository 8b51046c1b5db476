#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldacs {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using Bits = std::vector<uint8_t>;

// Raised when a caller breaks an operation's precondition (wrong length etc).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

void require(bool cond, const char* what);

// Two's-complement format: 1 sign bit, word_length-1-frac_bits integer bits.
struct FxFormat {
    int word_length = 16;
    int frac_bits = 14;

    bool valid() const;
    int64_t max_code() const { return (int64_t(1) << (word_length - 1)) - 1; }
    int64_t min_code() const { return -(int64_t(1) << (word_length - 1)); }
    double resolution() const;
    double max_value() const;
    double min_value() const;
    std::string str() const;  // "Q1.14/16"

    bool operator==(const FxFormat&) const = default;
};

bool valid_word_length(int wl);
FxFormat signal_format(int wl);  // frac = wl - 2
FxFormat coeff_format(int wl);   // frac = wl - 1
FxFormat parse_format(const std::string& s);

using i128 = __int128;

int64_t saturate(i128 v, const FxFormat& f);
// v / 2^shift, ties to even
i128 round_shift(i128 v, int shift);

int64_t quantize(double x, const FxFormat& f);
double dequantize(int64_t code, const FxFormat& f);
int64_t fx_add(int64_t a, int64_t b, const FxFormat& f);
int64_t fx_mul(int64_t a, int64_t b, const FxFormat& f);
int64_t fx_mul_mixed(int64_t a, const FxFormat& fa, int64_t b, const FxFormat& fb,
                     const FxFormat& out);
// rescale an accumulator holding acc_frac fraction bits into `out`
int64_t fx_requantize(i128 acc, int acc_frac, const FxFormat& out);

struct FxComplex {
    int64_t re = 0;
    int64_t im = 0;
    bool operator==(const FxComplex&) const = default;
};

FxComplex quantize(cplx z, const FxFormat& f);
cplx dequantize(FxComplex z, const FxFormat& f);

// Snap every sample to the format grid. The results are exact doubles for
// every supported format, so fixed-point stages can pass plain CVec around.
void quantize_inplace(CVec& v, const FxFormat& f);
CVec quantized(CVec v, const FxFormat& f);
double quantize_value(double x, const FxFormat& f);

}  // namespace ldacs
