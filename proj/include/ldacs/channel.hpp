#pragma once

#include <string>
#include <vector>

#include "ldacs/numeric.hpp"

namespace ldacs {

constexpr double kCarrierHz = 1215e6;
constexpr double kKtasToMps = 0.5144;
constexpr double kLightSpeed = 3e8;

// F_D = fc * v / c with v in KTAS; the rounded value is what the channel uses.
double doppler_freq_exact(double fc, double v_ktas);
double doppler_freq(double fc, double v_ktas);

struct ChannelProfile {
    std::string name = "none";
    double max_delay_s = 0;
    double acceleration = 0;  // recorded only; the fading model is stationary
    int harmonics = 8;
    double velocity_ktas = 0;
    double doppler_hz = 0;
};

ChannelProfile channel_preset(const std::string& name);  // APT, TMA, ENR
const std::vector<std::string>& channel_preset_names();

int tap_span(double max_delay_s, double fs);

struct TapLayout {
    std::vector<int> delays;
    std::vector<double> powers;  // sums to 1
};

// Up to 9 taps spread over [0, span]; exponential decay reaching last_tap_db at the
// maximum delay.
TapLayout tap_layout(const ChannelProfile& p, double fs, double last_tap_db = -20.0, int max_taps = 9);

// Tapped delay line, each tap a sum-of-sinusoids Rayleigh process. Output keeps
// the input length.
CVec apply_channel(const CVec& x, const ChannelProfile& p, double fs, uint64_t seed,
                   double last_tap_db = -20.0);

struct DmeConfig {
    double pulse_spacing_s = 12e-6;
    double alpha = 4.5e11;  // s^-2
    double amplitude_scale = 0.2;
    double reference_amplitude = 1.0;  // pulse peak before scaling
    double pair_rate_hz = 2700;        // pairs per second per station
    // One station per entry. 0 keeps the pulses real at baseband; any other
    // offset gives a complex carrier band-limited to the receiver's Nyquist band.
    std::vector<double> offsets_hz = {0.0};
};

// Deterministic pairs at the given onsets for one station.
CVec dme_pairs(size_t n, double fs, const DmeConfig& cfg, const std::vector<double>& onsets_s,
               double offset_hz = 0.0, const std::vector<double>& phases = {});
CVec dme_interference(size_t n, double fs, const DmeConfig& cfg, uint64_t seed);

// Circular complex Gaussian noise at snr_db relative to the measured input power.
// snr_db = +inf disables the noise.
CVec awgn(const CVec& x, double snr_db, uint64_t seed);
// Same, with the reference power given instead of measured.
CVec awgn(const CVec& x, double snr_db, uint64_t seed, double signal_power);

// Random-walk phase noise plus a scalar gain.
CVec afe_impairments(const CVec& x, double phase_noise_std, double gain, uint64_t seed);

double mean_power(const CVec& x);

}  // namespace ldacs
