#include "ldacs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ldacs/fft.hpp"

namespace ldacs {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

Spectrum psd_welch(const std::vector<CVec>& records, double fs, int seg, double overlap) {
    require(fs > 0, "psd_welch: fs must be positive");
    require(seg > 1, "psd_welch: segment too short");
    require(overlap >= 0 && overlap < 1, "psd_welch: overlap must lie in [0, 1)");
    const int hop = std::max(1, int(std::lround(seg * (1 - overlap))));
    std::vector<double> w(seg);
    double u = 0;
    for (int k = 0; k < seg; ++k) {
        w[k] = 0.5 - 0.5 * std::cos(2 * kPi * k / seg);  // periodic Hann
        u += w[k] * w[k];
    }
    std::vector<double> acc(seg, 0.0);
    int count = 0;
    for (const auto& x : records) {
        for (size_t a = 0; a + seg <= x.size(); a += hop) {
            CVec s(seg);
            for (int k = 0; k < seg; ++k) s[k] = x[a + k] * w[k];
            CVec X = fft(s);
            for (int k = 0; k < seg; ++k) acc[k] += std::norm(X[k]);
            ++count;
        }
    }
    require(count > 0, "psd_welch: fewer samples than one segment");
    Spectrum sp;
    sp.resolution = fs / seg;
    sp.segments = count;
    sp.freqs.resize(seg);
    sp.power_db.resize(seg);
    for (int i = 0; i < seg; ++i) {
        const int k = (i + seg / 2) % seg;  // shift DC to the centre
        sp.freqs[i] = (i - seg / 2) * sp.resolution;
        sp.power_db[i] = 10 * std::log10(std::max(acc[k] / count / (u * fs), 1e-300));
    }
    return sp;
}

Spectrum psd_welch(const CVec& x, double fs, int seg, double overlap) {
    require(seg <= int(x.size()), "psd_welch: segment longer than input");
    return psd_welch(std::vector<CVec>{x}, fs, seg, overlap);
}

double integrated_power(const Spectrum& s) {
    double p = 0;
    for (double d : s.power_db) p += std::pow(10.0, d / 10);
    return p * s.resolution;
}

namespace {

std::vector<double> densities_in(const Spectrum& s, const std::vector<Band>& bands) {
    std::vector<double> v;
    for (size_t i = 0; i < s.freqs.size(); ++i)
        for (const auto& b : bands)
            if (s.freqs[i] >= b.lo && s.freqs[i] <= b.hi) {
                v.push_back(std::pow(10.0, s.power_db[i] / 10));
                break;
            }
    require(!v.empty(), "spectrum band selects no bins");
    return v;
}

}  // namespace

double mean_density_db(const Spectrum& s, const std::vector<Band>& bands) {
    auto v = densities_in(s, bands);
    double m = 0;
    for (double d : v) m += d;
    return 10 * std::log10(m / v.size());
}

double peak_density_db(const Spectrum& s, const std::vector<Band>& bands) {
    auto v = densities_in(s, bands);
    return 10 * std::log10(*std::max_element(v.begin(), v.end()));
}

double oob_attenuation(const Spectrum& s, const Band& in, const std::vector<Band>& oob) {
    require(in.hi >= in.lo, "oob_attenuation: empty in-band interval");
    for (const auto& b : oob) {
        require(b.hi >= b.lo, "oob_attenuation: empty out-of-band interval");
        require(b.hi < in.lo || b.lo > in.hi, "oob_attenuation: intervals overlap");
    }
    return mean_density_db(s, {in}) - peak_density_db(s, oob);
}

double oob_attenuation(const Spectrum& s, const Band& in, const Band& oob) {
    return oob_attenuation(s, in, std::vector<Band>{oob});
}

Band inband_region(double bw) { return {-bw / 2, bw / 2}; }

std::vector<Band> oob_regions(double fs, double stop_edge, double resolution) {
    const double start = stop_edge * fs / 2 + 2 * resolution;
    return {{-fs / 2, -start}, {start, fs / 2}};
}

BerRecord ber(const Bits& tx, const Bits& rx) {
    require(tx.size() == rx.size(), "ber: length mismatch");
    BerRecord r;
    r.bits_total = long(tx.size());
    for (size_t i = 0; i < tx.size(); ++i) r.bits_error += (tx[i] & 1) != (rx[i] & 1);
    r.ber = r.bits_total ? double(r.bits_error) / r.bits_total : 0.0;
    auto ci = wilson_interval(r.bits_error, r.bits_total);
    r.ci_low = ci.low, r.ci_high = ci.high;
    return r;
}

void accumulate(BerRecord& into, const BerRecord& add) {
    into.bits_total += add.bits_total;
    into.bits_error += add.bits_error;
    into.ber = into.bits_total ? double(into.bits_error) / into.bits_total : 0.0;
    auto ci = wilson_interval(into.bits_error, into.bits_total);
    into.ci_low = ci.low, into.ci_high = ci.high;
}

Interval wilson_interval(long k, long n, double z) {
    if (n <= 0) return {0.0, 1.0};
    const double p = double(k) / n, z2 = z * z;
    const double den = 1 + z2 / n;
    const double c = (p + z2 / (2 * n)) / den;
    const double h = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / den;
    return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& rows) {
    os << "kind,word_length,channel,snr_db,dme,variant,bits_total,bits_error,ber,ci_low,ci_high\n";
    for (const auto& r : rows)
        os << r.kind << ',' << r.word_length << ',' << r.channel << ',' << fmt("%g", r.snr_db) << ','
           << (r.dme ? 1 : 0) << ',' << r.variant << ',' << r.bits_total << ',' << r.bits_error << ','
           << fmt("%.6e", r.ber) << ',' << fmt("%.6e", r.ci_low) << ',' << fmt("%.6e", r.ci_high) << '\n';
}

void write_psd_csv(std::ostream& os, const std::vector<LabelledSpectrum>& rows) {
    os << "kind,word_length,shaping_word_length,bandwidth_hz,freq_hz,power_db\n";
    for (const auto& r : rows)
        for (size_t i = 0; i < r.spectrum.freqs.size(); ++i)
            os << r.kind << ',' << r.word_length << ',' << r.shaping_word_length << ','
               << fmt("%.0f", r.bandwidth_hz) << ',' << fmt("%.3f", r.spectrum.freqs[i]) << ','
               << fmt("%.4f", r.spectrum.power_db[i]) << '\n';
}

}  // namespace ldacs
