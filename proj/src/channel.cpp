#include "ldacs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldacs/rng.hpp"

namespace ldacs {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double doppler_freq_exact(double fc, double v) { return fc * (v * kKtasToMps) / kLightSpeed; }

double doppler_freq(double fc, double v) { return std::round(doppler_freq_exact(fc, v)); }

ChannelProfile channel_preset(const std::string& name) {
    ChannelProfile p;
    p.name = name;
    if (name == "APT") {
        p.max_delay_s = 3e-6, p.acceleration = 5, p.harmonics = 8, p.velocity_ktas = 200;
    } else if (name == "TMA") {
        p.max_delay_s = 20e-6, p.acceleration = 50, p.harmonics = 8, p.velocity_ktas = 300;
    } else if (name == "ENR") {
        p.max_delay_s = 15e-6, p.acceleration = 50, p.harmonics = 25, p.velocity_ktas = 600;
    } else if (name == "none") {
        return p;
    } else {
        throw std::invalid_argument("unknown channel preset '" + name + "'");
    }
    p.doppler_hz = doppler_freq(kCarrierHz, p.velocity_ktas);
    return p;
}

const std::vector<std::string>& channel_preset_names() {
    static const std::vector<std::string> n = {"APT", "TMA", "ENR"};
    return n;
}

int tap_span(double max_delay_s, double fs) {
    // guard against 15e-6 * 1.1e6 landing a hair above 16.5 etc.
    return int(std::ceil(max_delay_s * fs - 1e-9));
}

TapLayout tap_layout(const ChannelProfile& p, double fs, double last_tap_db, int max_taps) {
    TapLayout t;
    const int span = std::max(0, tap_span(p.max_delay_s, fs));
    const int n = std::min(max_taps, span + 1);
    for (int i = 0; i < n; ++i) {
        int d = n == 1 ? 0 : int(std::lround(double(span) * i / (n - 1)));
        if (!t.delays.empty() && t.delays.back() == d) continue;
        t.delays.push_back(d);
    }
    double total = 0;
    for (int d : t.delays) {
        double pw = span ? std::pow(10.0, last_tap_db / 10.0 * d / span) : 1.0;
        t.powers.push_back(pw);
        total += pw;
    }
    for (auto& pw : t.powers) pw /= total;
    return t;
}

CVec apply_channel(const CVec& x, const ChannelProfile& p, double fs, uint64_t seed, double last_tap_db) {
    const TapLayout taps = tap_layout(p, fs, last_tap_db);
    const int M = std::max(1, p.harmonics);
    Rng rng(seed);
    std::uniform_real_distribution<double> U(0.0, 2 * kPi);
    CVec y(x.size(), 0.0);
    for (size_t t = 0; t < taps.delays.size(); ++t) {
        std::vector<cplx> z(M), rot(M);
        for (int m = 0; m < M; ++m) {
            double theta = U(rng), phi = U(rng);
            z[m] = std::polar(1.0, phi);
            rot[m] = std::polar(1.0, 2 * kPi * p.doppler_hz * std::cos(theta) / fs);
        }
        const double amp = std::sqrt(taps.powers[t] / M);
        const size_t d = size_t(taps.delays[t]);
        for (size_t n = 0; n < x.size(); ++n) {
            cplx g = 0;
            for (int m = 0; m < M; ++m) {
                g += z[m];
                z[m] *= rot[m];
            }
            if (n >= d) y[n] += amp * g * x[n - d];
        }
    }
    return y;
}

namespace {

// Lowpass prototype for band-limiting the oversampled DME carrier.
std::vector<double> antialias_taps(int os) {
    const int len = 64 * os + 1, mid = len / 2;
    const double fc = 0.45 / os;  // cycles per oversampled sample
    std::vector<double> h(len);
    for (int k = 0; k < len; ++k) {
        double t = k - mid;
        double s = t == 0 ? 2 * fc : std::sin(2 * kPi * fc * t) / (kPi * t);
        double w = 0.42 - 0.5 * std::cos(2 * kPi * k / (len - 1)) + 0.08 * std::cos(4 * kPi * k / (len - 1));
        h[k] = s * w;
    }
    return h;
}

}  // namespace

CVec dme_pairs(size_t n, double fs, const DmeConfig& c, const std::vector<double>& onsets, double offset_hz,
               const std::vector<double>& phases) {
    const bool complex_carrier = offset_hz != 0.0;
    const int os = complex_carrier ? 4 : 1;
    const double fr = fs * os;
    const double amp = c.amplitude_scale * c.reference_amplitude;
    const double sig = 1.0 / std::sqrt(c.alpha);
    const double reach = std::max(9 * sig, 1.0 / fs);
    const size_t no = n * os;
    std::vector<double> h;
    long pad = 0;
    if (complex_carrier) {
        h = antialias_taps(os);
        pad = long(h.size() / 2);
    }
    // oversampled grid extended by the filter half-length on both sides
    CVec s(no + 2 * pad, 0.0);
    for (size_t i = 0; i < onsets.size(); ++i) {
        const double t0 = onsets[i];
        const double psi = i < phases.size() ? phases[i] : 0.0;
        for (double tc : {t0, t0 + c.pulse_spacing_s}) {
            long a = long(std::floor((tc - reach) * fr)), b = long(std::ceil((tc + reach) * fr));
            for (long k = std::max(a, -pad); k <= std::min(b, long(no) + pad - 1); ++k) {
                double t = double(k) / fr;
                double g = amp * std::exp(-c.alpha * (t - tc) * (t - tc) / 2);
                s[k + pad] += complex_carrier ? std::polar(g, 2 * kPi * offset_hz * t + psi) : cplx(g, 0.0);
            }
        }
    }
    if (!complex_carrier) return s;
    CVec out(n, 0.0);
    for (size_t m = 0; m < n; ++m) {
        const long c0 = long(m) * os + pad;  // index into s
        cplx acc = 0;
        for (size_t k = 0; k < h.size(); ++k) acc += h[k] * s[c0 + pad - long(k)];
        out[m] = acc;
    }
    return out;
}

CVec dme_interference(size_t n, double fs, const DmeConfig& c, uint64_t seed) {
    CVec total(n, 0.0);
    if (c.amplitude_scale == 0.0 || c.pair_rate_hz <= 0) return total;
    const double dur = double(n) / fs;
    const double lead = c.pulse_spacing_s + 10 / std::sqrt(c.alpha);
    for (size_t st = 0; st < c.offsets_hz.size(); ++st) {
        Rng rng(derive_seed({seed, st}));
        std::exponential_distribution<double> gap(c.pair_rate_hz);
        std::uniform_real_distribution<double> U(0.0, 2 * kPi);
        std::vector<double> onsets, phases;
        for (double t = -lead + gap(rng); t < dur; t += gap(rng)) {
            onsets.push_back(t);
            phases.push_back(U(rng));
        }
        CVec s = dme_pairs(n, fs, c, onsets, c.offsets_hz[st], phases);
        for (size_t i = 0; i < n; ++i) total[i] += s[i];
    }
    return total;
}

double mean_power(const CVec& x) {
    if (x.empty()) return 0;
    double p = 0;
    for (const auto& v : x) p += std::norm(v);
    return p / double(x.size());
}

CVec awgn(const CVec& x, double snr_db, uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return x;
    return awgn(x, snr_db, seed, mean_power(x));
}

CVec awgn(const CVec& x, double snr_db, uint64_t seed, double p) {
    if (std::isinf(snr_db) && snr_db > 0) return x;
    require(p > 0, "awgn: zero-power input with finite SNR");
    const double sd = std::sqrt(p / std::pow(10.0, snr_db / 10.0) / 2);
    Rng rng(seed);
    std::normal_distribution<double> N(0.0, sd);
    CVec y(x);
    for (auto& v : y) {
        double a = N(rng);
        double b = N(rng);
        v += cplx(a, b);
    }
    return y;
}

CVec afe_impairments(const CVec& x, double std_rad, double gain, uint64_t seed) {
    require(gain > 0, "afe_impairments: gain must be positive");
    Rng rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    CVec y(x.size());
    double phi = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (std_rad > 0) phi += std_rad * N(rng);
        y[i] = gain * std::polar(1.0, phi) * x[i];
    }
    return y;
}

}  // namespace ldacs
