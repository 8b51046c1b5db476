#pragma once

#include <string>
#include <vector>

#include "ldacs/coding.hpp"
#include "ldacs/filter_design.hpp"
#include "ldacs/framing.hpp"
#include "ldacs/numeric.hpp"

namespace ldacs {

enum class WaveformKind { OFDM, WOLA, FOFDM };

std::string to_string(WaveformKind k);
WaveformKind parse_kind(const std::string& s);

constexpr int kPreambleLength = 320;
constexpr int kPreambleSlot = 80;

struct WaveformConfig {
    WaveformKind kind = WaveformKind::OFDM;
    int n = 64;
    int cp = 11;
    int w = 8;
    double bandwidth_hz = 732e3;
    int word_length = 32;
    int shaping_word_length = 0;  // 0: follow word_length
    int symbol_index = 1;
    int frames_per_burst = 36;
    int guard_samples = 240;
    double detector_threshold = 0.75;
    double rx_input_gain = 1.0;
    cplx pilot_value = {1.0, 0.0};
    FilterSpec filter_spec;

    // Optional overrides; empty means the built-in default.
    std::vector<double> filter_coeffs;
    CVec preamble;
    PatternTable patterns;
    Bits scrambler_seq;
    InterleaverTable interleaver;

    // 50 of 64 subcarriers span the bandwidth.
    double sample_rate() const { return bandwidth_hz * n / 50.0; }
    int shaping_wl() const { return shaping_word_length ? shaping_word_length : word_length; }
    FxFormat signal_fmt() const { return signal_format(word_length); }
    FxFormat shaping_fmt() const { return signal_format(shaping_wl()); }
    FxFormat shaping_coeff_fmt() const { return coeff_format(shaping_wl()); }
    int symbol_length() const { return kind == WaveformKind::WOLA ? n + cp + 2 * w : n + cp; }
    int symbol_hop() const { return kind == WaveformKind::WOLA ? n + cp + w : n + cp; }
    int data_length() const;
    int burst_length() const { return kPreambleLength + data_length() + guard_samples; }
};

// Throws std::invalid_argument describing the first problem.
void validate(const WaveformConfig& cfg);

// 802.11a-derived STS (10 x 16) and LTS (32 guard + 2 x 64), 320 samples.
CVec default_preamble();
const CVec& lts_time();
CVec parse_preamble(const std::string& text);
CVec load_preamble_file(const std::string& path);

CVec add_cp(const CVec& sym, int cp = 11);
CVec remove_cp(const CVec& sym, int cp = 11);
CVec wola_extend(const CVec& sym, int cp = 11, int w = 8);
// Real-valued reference versions (no quantisation).
CVec apply_tx_window(const CVec& sym, const std::vector<double>& window);
CVec wola_receive_ref(const CVec& seg, const WindowSpec& spec, const std::vector<double>& rx_window);
CVec overlap_add_ref(const std::vector<CVec>& syms, int hop);
CVec fir_ref(const CVec& x, const std::vector<double>& h);  // delay-compensated, same length

// Integer FIR used by both the frame-mode filter and the stream FIR block.
struct FxFir {
    std::vector<int64_t> taps;
    FxFormat in_fmt, coeff_fmt, out_fmt;
    int delay() const { return int(taps.size() - 1) / 2; }
    // window[k] holds x[m-k] (newest first); returns the undelayed output for x[m]
    cplx mac(const std::vector<FxComplex>& window) const;
};

struct Detection {
    bool found = false;
    long coarse = -1;
    long lts_start = -1;
    long data_start = -1;
};

Detection detect_preamble(const CVec& x, double threshold = 0.75);

struct RxResult {
    std::vector<Bits> frames;
    bool detected = false;
    long data_start = -1;
    int symbols_recovered = 0;
};

// Resolved chain resources plus every per-stage kernel. The frame-mode chain and
// the stream-mode wrappers call the same kernels, which keeps them bit-exact.
class Transceiver {
public:
    explicit Transceiver(WaveformConfig cfg);

    const WaveformConfig& config() const { return cfg_; }
    const SubcarrierMap& pattern(int frame_no) const;
    const std::vector<double>& filter_taps() const { return filter_; }
    const WolaWindows& windows() const { return windows_; }
    const CVec& preamble() const { return preamble_; }
    const FxFir& fir() const { return fir_; }
    const std::vector<int64_t>& tx_window_codes() const { return txw_codes_; }

    // transmitter stages
    Bits scramble_frame(const Bits& raw) const;
    Bits encode_frame(const Bits& scrambled) const;
    Bits interleave_frame(const Bits& coded) const;
    CVec bpsk(const Bits& bits) const;
    CVec map(const CVec& syms, int frame_no) const;
    CVec ifft_stage(const CVec& grid) const;
    CVec window_stage(const CVec& extended) const;  // 91 in, fixed-point product
    CVec ola_stage(const std::vector<CVec>& windowed) const;
    CVec preamble_stage(const CVec& data) const;  // preamble + data + guard
    CVec filter_stage(const CVec& x) const;

    // receiver stages
    CVec adc(const CVec& x) const;
    Detection detect(const CVec& x) const;
    std::vector<CVec> segments(const CVec& x, long data_start) const;
    CVec wola_rx_stage(const CVec& seg) const;
    CVec fft_stage(const CVec& td) const;
    CVec phase_demap(const CVec& grid, int frame_no) const;
    Bits bpsk_demod(const CVec& syms) const;
    Bits deinterleave_frame(const Bits& b) const;
    Bits decode_frame(const Bits& coded) const;
    Bits descramble_frame(const Bits& b) const;

    // symbol-level tail shared by frame and stream receivers: segment -> grid
    CVec segment_to_grid(const CVec& seg) const;

    CVec tx(const std::vector<Bits>& frames) const;
    RxResult rx(const CVec& stream) const;

private:
    WaveformConfig cfg_;
    FrameLayout layout_;
    Bits seq_;
    InterleaverTable il_;
    std::vector<double> filter_;
    FxFir fir_;
    WolaWindows windows_;
    std::vector<int64_t> txw_codes_, rxw_codes_;
    CVec preamble_;
};

CVec tx_chain(const WaveformConfig& cfg, const std::vector<Bits>& frames);
RxResult rx_chain(const WaveformConfig& cfg, const CVec& stream);

// Raw I/Q export: interleaved I, Q codes in the format's word width (1, 2 or 4 bytes),
// two's complement, little-endian.
std::string iq_bytes(const CVec& x, const FxFormat& f);
CVec parse_iq_bytes(const std::string& bytes, const FxFormat& f);
void write_iq_file(const std::string& path, const CVec& x, const FxFormat& f);

// The fixed 864-bit stimulus: 36 frames of 24 bits.
std::vector<Bits> stimulus_frames(uint64_t seed = 0x1DAC5, int frames = 36);
Bits flatten(const std::vector<Bits>& frames);

}  // namespace ldacs
