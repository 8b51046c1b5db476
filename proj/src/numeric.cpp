#include "ldacs/numeric.hpp"

#include <cfenv>
#include <cmath>
#include <cstdio>
#include <regex>

namespace ldacs {

void require(bool cond, const char* what) {
    if (!cond) throw ContractViolation(what);
}

bool valid_word_length(int wl) { return wl == 8 || wl == 16 || wl == 32; }

bool FxFormat::valid() const {
    return valid_word_length(word_length) && frac_bits >= 0 && frac_bits <= word_length - 1;
}

double FxFormat::resolution() const { return std::ldexp(1.0, -frac_bits); }
double FxFormat::max_value() const { return dequantize(max_code(), *this); }
double FxFormat::min_value() const { return dequantize(min_code(), *this); }

std::string FxFormat::str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "Q%d.%d/%d", word_length - 1 - frac_bits, frac_bits,
                  word_length);
    return buf;
}

FxFormat signal_format(int wl) {
    require(valid_word_length(wl), "word length must be 8, 16 or 32");
    return {wl, wl - 2};
}

FxFormat coeff_format(int wl) {
    require(valid_word_length(wl), "word length must be 8, 16 or 32");
    return {wl, wl - 1};
}

FxFormat parse_format(const std::string& s) {
    static const std::regex re(R"(Q(\d+)\.(\d+)/(\d+))");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw std::invalid_argument("bad format string: " + s);
    int ib = std::stoi(m[1]), fb = std::stoi(m[2]), wl = std::stoi(m[3]);
    FxFormat f{wl, fb};
    if (!f.valid() || ib + fb + 1 != wl)
        throw std::invalid_argument("inconsistent format string: " + s);
    return f;
}

int64_t saturate(i128 v, const FxFormat& f) {
    if (v > f.max_code()) return f.max_code();
    if (v < f.min_code()) return f.min_code();
    return static_cast<int64_t>(v);
}

i128 round_shift(i128 v, int shift) {
    if (shift <= 0) return v << (-shift);
    i128 q = v >> shift;  // floor
    i128 rem = v - (q << shift);
    i128 half = i128(1) << (shift - 1);
    if (rem > half || (rem == half && (q & 1))) ++q;
    return q;
}

int64_t quantize(double x, const FxFormat& f) {
    if (std::isnan(x)) return 0;
    double s = std::ldexp(x, f.frac_bits);
    if (s >= double(f.max_code())) return f.max_code();
    if (s <= double(f.min_code())) return f.min_code();
    // nearbyint honours the default ties-to-even mode
    return static_cast<int64_t>(std::nearbyint(s));
}

double dequantize(int64_t code, const FxFormat& f) { return std::ldexp(double(code), -f.frac_bits); }

int64_t fx_add(int64_t a, int64_t b, const FxFormat& f) { return saturate(i128(a) + b, f); }

int64_t fx_mul(int64_t a, int64_t b, const FxFormat& f) {
    return saturate(round_shift(i128(a) * b, f.frac_bits), f);
}

int64_t fx_mul_mixed(int64_t a, const FxFormat& fa, int64_t b, const FxFormat& fb,
                     const FxFormat& out) {
    return fx_requantize(i128(a) * b, fa.frac_bits + fb.frac_bits, out);
}

int64_t fx_requantize(i128 acc, int acc_frac, const FxFormat& out) {
    return saturate(round_shift(acc, acc_frac - out.frac_bits), out);
}

FxComplex quantize(cplx z, const FxFormat& f) { return {quantize(z.real(), f), quantize(z.imag(), f)}; }

cplx dequantize(FxComplex z, const FxFormat& f) { return {dequantize(z.re, f), dequantize(z.im, f)}; }

double quantize_value(double x, const FxFormat& f) { return dequantize(quantize(x, f), f); }

void quantize_inplace(CVec& v, const FxFormat& f) {
    for (auto& z : v) z = {quantize_value(z.real(), f), quantize_value(z.imag(), f)};
}

CVec quantized(CVec v, const FxFormat& f) {
    quantize_inplace(v, f);
    return v;
}

}  // namespace ldacs
