#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ldacs/numeric.hpp"

namespace ldacs {

struct Spectrum {
    std::vector<double> freqs;     // Hz, [-fs/2, fs/2)
    std::vector<double> power_db;  // dB re 1/Hz
    double resolution = 0;         // bin spacing, Hz
    int segments = 0;
};

// Hann-windowed Welch average. Density is scaled so that sum(P) * resolution equals
// the mean power of the input.
Spectrum psd_welch(const CVec& x, double fs, int segment_len = 256, double overlap = 0.5);
// Same estimator with the periodograms of every record pooled.
Spectrum psd_welch(const std::vector<CVec>& records, double fs, int segment_len = 256, double overlap = 0.5);

double integrated_power(const Spectrum& s);

struct Band {
    double lo, hi;  // Hz, inclusive
};

// Linear-mean in-band density over peak out-of-band density, in dB.
double oob_attenuation(const Spectrum& s, const Band& inband, const std::vector<Band>& oob);
double oob_attenuation(const Spectrum& s, const Band& inband, const Band& oob);
// Linear-mean density over the bands, in dB.
double mean_density_db(const Spectrum& s, const std::vector<Band>& bands);
double peak_density_db(const Spectrum& s, const std::vector<Band>& bands);

// In-band is the occupied bandwidth. The out-of-band region starts two bins past the
// shaping filter's stop edge (stop_edge in Nyquist units) and runs to fs/2 on both sides.
Band inband_region(double bandwidth_hz);
std::vector<Band> oob_regions(double fs, double stop_edge, double resolution);

struct BerRecord {
    std::string kind;
    int word_length = 0;
    std::string channel = "none";
    double snr_db = 0;
    bool dme = false;
    std::string variant = "V1";
    long bits_total = 0;
    long bits_error = 0;
    double ber = 0;
    double ci_low = 0, ci_high = 0;
};

BerRecord ber(const Bits& tx, const Bits& rx);
void accumulate(BerRecord& into, const BerRecord& add);

struct Interval {
    double low, high;
};
// Wilson score interval for k successes in n trials.
Interval wilson_interval(long k, long n, double z = 1.959963984540054);

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& rows);

struct LabelledSpectrum {
    std::string kind;
    int word_length = 0;
    int shaping_word_length = 0;
    double bandwidth_hz = 0;
    Spectrum spectrum;
};
void write_psd_csv(std::ostream& os, const std::vector<LabelledSpectrum>& rows);

}  // namespace ldacs
