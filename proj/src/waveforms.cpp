#include "ldacs/waveforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ldacs/fft.hpp"
#include "ldacs/rng.hpp"

namespace ldacs {

std::string to_string(WaveformKind k) {
    switch (k) {
        case WaveformKind::OFDM: return "OFDM";
        case WaveformKind::WOLA: return "WOLA";
        case WaveformKind::FOFDM: return "FOFDM";
    }
    return "?";
}

WaveformKind parse_kind(const std::string& s) {
    std::string u;
    for (char c : s) u += char(std::toupper(static_cast<unsigned char>(c)));
    if (u == "OFDM" || u == "CP-OFDM") return WaveformKind::OFDM;
    if (u == "WOLA" || u == "WOLA-OFDM") return WaveformKind::WOLA;
    if (u == "FOFDM" || u == "F-OFDM") return WaveformKind::FOFDM;
    throw std::invalid_argument("unknown waveform kind '" + s + "'");
}

int WaveformConfig::data_length() const {
    if (kind == WaveformKind::WOLA) return frames_per_burst * symbol_hop() + w;
    return frames_per_burst * symbol_length();
}

void validate(const WaveformConfig& c) {
    auto bad = [](const std::string& m) { throw std::invalid_argument(m); };
    if (c.n != 64 || c.cp != 11) bad("N and CP are fixed at 64 and 11");
    if (c.w != 8) bad("WOLA taper W is fixed at 8");
    if (!valid_word_length(c.word_length)) bad("word_length must be 8, 16 or 32");
    if (c.shaping_word_length && !valid_word_length(c.shaping_word_length))
        bad("shaping_word_length must be 8, 16 or 32");
    if (!(c.bandwidth_hz > 0)) bad("bandwidth must be positive");
    if (c.frames_per_burst < 1) bad("frames_per_burst must be >= 1");
    if (c.guard_samples < 0) bad("guard_samples must be >= 0");
    if (!(c.detector_threshold > 0 && c.detector_threshold < 1)) bad("detector threshold must lie in (0,1)");
    if (!(c.rx_input_gain > 0)) bad("rx_input_gain must be positive");
    if (c.symbol_index < 0 || c.symbol_index >= kSymbolsPerFrame) bad("symbol_index outside 0..53");
    FrameLayout layout(c.patterns.empty() ? default_pattern_table(c.pilot_value) : c.patterns);
    if (layout.pattern_for_index(c.symbol_index).data_pos.size() != size_t(kCodedBits))
        bad("symbol_index " + std::to_string(c.symbol_index) +
            " does not carry 48 data subcarriers");
    if (!c.filter_coeffs.empty()) {
        const auto& h = c.filter_coeffs;
        if (h.size() % 2 == 0) bad("filter must have an odd number of taps");
        for (size_t k = 0; k < h.size(); ++k)
            if (h[k] != h[h.size() - 1 - k]) bad("filter coefficients must be symmetric");
    }
    if (!c.filter_spec.valid()) bad("invalid filter spec");
    if (!c.preamble.empty() && c.preamble.size() != size_t(kPreambleLength))
        bad("preamble must hold 320 samples");
    if (!c.scrambler_seq.empty() && c.scrambler_seq.size() != size_t(kFrameBits))
        bad("scrambler sequence must hold 24 bits");
    if (!c.interleaver.empty() && (c.interleaver.size() != size_t(kCodedBits) || !is_permutation(c.interleaver)))
        bad("interleaver must be a permutation of 0..47");
}

CVec default_preamble() {
    const CVec sts = ifft64(ifftshift(sts_grid()));
    const CVec& lts = lts_time();
    CVec p;
    p.reserve(kPreambleLength);
    for (int i = 0; i < 160; ++i) p.push_back(sts[i % 64]);
    for (int i = 32; i < 64; ++i) p.push_back(lts[i]);
    for (int r = 0; r < 2; ++r) p.insert(p.end(), lts.begin(), lts.end());
    return p;
}

const CVec& lts_time() {
    static const CVec t = ifft64(ifftshift(lts_grid()));
    return t;
}

CVec parse_preamble(const std::string& text) {
    CVec p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double re, im;
        if (!(ls >> re)) continue;
        if (!(ls >> im))
            throw std::invalid_argument("preamble line " + std::to_string(lineno) + ": expected 're im'");
        p.emplace_back(re, im);
    }
    if (p.size() != size_t(kPreambleLength))
        throw std::invalid_argument("preamble holds " + std::to_string(p.size()) + " samples, need 320");
    return p;
}

CVec load_preamble_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open preamble file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_preamble(ss.str());
}

CVec add_cp(const CVec& sym, int cp) {
    require(sym.size() == 64, "add_cp: symbol must hold 64 samples");
    CVec out(sym.end() - cp, sym.end());
    out.insert(out.end(), sym.begin(), sym.end());
    return out;
}

CVec remove_cp(const CVec& sym, int cp) {
    require(sym.size() == size_t(64 + cp), "remove_cp: symbol must hold 75 samples");
    return CVec(sym.begin() + cp, sym.end());
}

CVec wola_extend(const CVec& sym, int cp, int w) {
    require(sym.size() == 64, "wola_extend: symbol must hold 64 samples");
    CVec out(sym.end() - (cp + w), sym.end());
    out.insert(out.end(), sym.begin(), sym.end());
    out.insert(out.end(), sym.begin(), sym.begin() + w);
    return out;
}

CVec apply_tx_window(const CVec& sym, const std::vector<double>& window) {
    require(sym.size() == window.size(), "apply_tx_window: length mismatch");
    CVec out(sym.size());
    for (size_t k = 0; k < sym.size(); ++k) out[k] = sym[k] * window[k];
    return out;
}

CVec wola_receive_ref(const CVec& seg, const WindowSpec& s, const std::vector<double>& rxw) {
    require(seg.size() == size_t(s.tx_length()), "wola_receive: segment must hold 91 samples");
    const int head = s.rx_head_discard(), t = s.rx_taper();
    CVec y(s.rx_length());
    for (int k = 0; k < s.rx_length(); ++k) y[k] = seg[head + k] * rxw[k];
    CVec out(y.begin() + t, y.end());
    for (int k = 0; k < t; ++k) out[s.n - t + k] += y[k];
    return out;
}

CVec overlap_add_ref(const std::vector<CVec>& syms, int hop) {
    if (syms.empty()) return {};
    const size_t len = syms[0].size();
    CVec out((syms.size() - 1) * hop + len, 0.0);
    for (size_t s = 0; s < syms.size(); ++s)
        for (size_t k = 0; k < len; ++k) out[s * hop + k] += syms[s][k];
    return out;
}

CVec fir_ref(const CVec& x, const std::vector<double>& h) {
    const long D = long(h.size() - 1) / 2, L = long(x.size());
    CVec y(x.size(), 0.0);
    for (long n = 0; n < L; ++n) {
        cplx acc = 0;
        for (long k = 0; k < long(h.size()); ++k) {
            long i = n + D - k;
            if (i >= 0 && i < L) acc += h[k] * x[i];
        }
        y[n] = acc;
    }
    return y;
}

cplx FxFir::mac(const std::vector<FxComplex>& window) const {
    i128 ar = 0, ai = 0;
    for (size_t k = 0; k < taps.size(); ++k) {
        ar += i128(taps[k]) * window[k].re;
        ai += i128(taps[k]) * window[k].im;
    }
    const int af = in_fmt.frac_bits + coeff_fmt.frac_bits;
    return {dequantize(fx_requantize(ar, af, out_fmt), out_fmt),
            dequantize(fx_requantize(ai, af, out_fmt), out_fmt)};
}

Detection detect_preamble(const CVec& x, double threshold) {
    Detection d;
    const long n = long(x.size());
    const int lag = 16, plateau = 16;
    int run = 0;
    for (long i = 0; i + 2 * lag <= n; ++i) {
        cplx p = 0;
        double r = 0;
        for (int m = 0; m < lag; ++m) {
            p += x[i + m + lag] * std::conj(x[i + m]);
            r += std::norm(x[i + m + lag]);
        }
        double metric = r > 1e-300 ? std::norm(p) / (r * r) : 0.0;
        run = metric > threshold ? run + 1 : 0;
        if (run == plateau) {
            d.coarse = i - plateau + 1;
            break;
        }
    }
    if (d.coarse < 0) return d;

    // fine timing: matched filter against both LTS periods
    const CVec& lts = lts_time();
    const long lo = d.coarse, hi = std::min(n - 128, d.coarse + kPreambleLength + 64);
    double best = -1;
    for (long s = lo; s <= hi; ++s) {
        cplx c1 = 0, c2 = 0;
        for (int k = 0; k < 64; ++k) {
            c1 += x[s + k] * std::conj(lts[k]);
            c2 += x[s + 64 + k] * std::conj(lts[k]);
        }
        double m = std::norm(c1) + std::norm(c2);
        if (m > best) {
            best = m;
            d.lts_start = s;
        }
    }
    if (d.lts_start < 0) return d;
    d.data_start = d.lts_start + 128;
    d.found = true;
    return d;
}

Transceiver::Transceiver(WaveformConfig cfg)
    : cfg_(std::move(cfg)),
      layout_(cfg_.patterns.empty() ? default_pattern_table(cfg_.pilot_value) : cfg_.patterns) {
    validate(cfg_);
    seq_ = cfg_.scrambler_seq.empty() ? default_scrambler_sequence() : cfg_.scrambler_seq;
    il_ = cfg_.interleaver.empty() ? default_interleaver() : cfg_.interleaver;

    if (!cfg_.filter_coeffs.empty())
        filter_ = cfg_.filter_coeffs;
    else if (cfg_.filter_spec.order == FilterSpec{}.order && cfg_.filter_spec.cutoff == FilterSpec{}.cutoff &&
             cfg_.filter_spec.transition == FilterSpec{}.transition &&
             cfg_.filter_spec.grid_density == FilterSpec{}.grid_density)
        filter_ = default_fofdm_design().coeffs;
    else
        filter_ = design_lowpass_pm(cfg_.filter_spec).coeffs;

    fir_.in_fmt = cfg_.signal_fmt();
    fir_.coeff_fmt = cfg_.shaping_coeff_fmt();
    fir_.out_fmt = cfg_.shaping_fmt();
    fir_.taps = quantize_coeffs(filter_, fir_.coeff_fmt).codes;

    windows_ = design_rrc_window(WindowSpec{cfg_.n, cfg_.cp, cfg_.w});
    txw_codes_ = quantize_coeffs(windows_.tx, cfg_.shaping_coeff_fmt()).codes;
    rxw_codes_ = quantize_coeffs(windows_.rx, cfg_.shaping_coeff_fmt()).codes;

    preamble_ = quantized(cfg_.preamble.empty() ? default_preamble() : cfg_.preamble, cfg_.signal_fmt());
}

const SubcarrierMap& Transceiver::pattern(int) const { return layout_.pattern_for_index(cfg_.symbol_index); }

Bits Transceiver::scramble_frame(const Bits& raw) const { return scramble(raw, seq_); }
Bits Transceiver::encode_frame(const Bits& s) const { return conv_encode(s, Termination::Truncated); }
Bits Transceiver::interleave_frame(const Bits& c) const { return interleave(c, il_); }

CVec Transceiver::bpsk(const Bits& bits) const {
    CVec out(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) out[i] = (bits[i] & 1) ? -1.0 : 1.0;
    return out;  // +-1 is exact in every signal format
}

CVec Transceiver::map(const CVec& syms, int frame_no) const { return map_symbol(syms, pattern(frame_no)); }

CVec Transceiver::ifft_stage(const CVec& grid) const {
    return quantized(ifft64(ifftshift(grid)), cfg_.signal_fmt());
}

CVec Transceiver::window_stage(const CVec& ext) const {
    require(ext.size() == txw_codes_.size(), "window: extended symbol must hold 91 samples");
    const FxFormat in = cfg_.signal_fmt(), cf = cfg_.shaping_coeff_fmt(), out = cfg_.shaping_fmt();
    CVec y(ext.size());
    for (size_t k = 0; k < ext.size(); ++k) {
        FxComplex z = quantize(ext[k], in);
        y[k] = {dequantize(fx_mul_mixed(z.re, in, txw_codes_[k], cf, out), out),
                dequantize(fx_mul_mixed(z.im, in, txw_codes_[k], cf, out), out)};
    }
    return y;
}

CVec Transceiver::ola_stage(const std::vector<CVec>& syms) const {
    if (syms.empty()) return {};
    const FxFormat f = cfg_.shaping_fmt();
    const int hop = cfg_.symbol_hop();
    const size_t len = syms[0].size();
    std::vector<FxComplex> acc((syms.size() - 1) * hop + len);
    for (size_t s = 0; s < syms.size(); ++s)
        for (size_t k = 0; k < len; ++k) {
            FxComplex z = quantize(syms[s][k], f);
            auto& a = acc[s * hop + k];
            a = {fx_add(a.re, z.re, f), fx_add(a.im, z.im, f)};
        }
    CVec out(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) out[i] = dequantize(acc[i], f);
    return out;
}

CVec Transceiver::preamble_stage(const CVec& data) const {
    CVec out = preamble_;
    out.insert(out.end(), data.begin(), data.end());
    out.insert(out.end(), cfg_.guard_samples, cplx(0.0));
    return out;
}

CVec Transceiver::filter_stage(const CVec& x) const {
    const long L = long(x.size()), D = fir_.delay(), T = long(fir_.taps.size());
    std::vector<FxComplex> xc(L);
    for (long i = 0; i < L; ++i) xc[i] = quantize(x[i], fir_.in_fmt);
    const int af = fir_.in_fmt.frac_bits + fir_.coeff_fmt.frac_bits;
    CVec y(L);
    for (long n = 0; n < L; ++n) {
        i128 ar = 0, ai = 0;
        long k0 = std::max(0L, n + D - (L - 1)), k1 = std::min(T - 1, n + D);
        for (long k = k0; k <= k1; ++k) {
            const FxComplex& v = xc[n + D - k];
            ar += i128(fir_.taps[k]) * v.re;
            ai += i128(fir_.taps[k]) * v.im;
        }
        y[n] = {dequantize(fx_requantize(ar, af, fir_.out_fmt), fir_.out_fmt),
                dequantize(fx_requantize(ai, af, fir_.out_fmt), fir_.out_fmt)};
    }
    return y;
}

CVec Transceiver::adc(const CVec& x) const {
    CVec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * cfg_.rx_input_gain;
    return quantized(std::move(y), cfg_.signal_fmt());
}

Detection Transceiver::detect(const CVec& x) const { return detect_preamble(x, cfg_.detector_threshold); }

std::vector<CVec> Transceiver::segments(const CVec& x, long ds) const {
    std::vector<CVec> segs;
    const long len = cfg_.symbol_length(), hop = cfg_.symbol_hop();
    for (int s = 0; s < cfg_.frames_per_burst; ++s) {
        long a = ds + s * hop;
        if (a < 0 || a + len > long(x.size())) break;
        segs.emplace_back(x.begin() + a, x.begin() + a + len);
    }
    return segs;
}

CVec Transceiver::wola_rx_stage(const CVec& seg) const {
    const WindowSpec s{cfg_.n, cfg_.cp, cfg_.w};
    require(seg.size() == size_t(s.tx_length()), "wola_receive: segment must hold 91 samples");
    const FxFormat in = cfg_.signal_fmt(), cf = cfg_.shaping_coeff_fmt(), f = cfg_.shaping_fmt();
    const int head = s.rx_head_discard(), t = s.rx_taper();
    std::vector<FxComplex> y(s.rx_length());
    for (int k = 0; k < s.rx_length(); ++k) {
        FxComplex z = quantize(seg[head + k], in);
        y[k] = {fx_mul_mixed(z.re, in, rxw_codes_[k], cf, f), fx_mul_mixed(z.im, in, rxw_codes_[k], cf, f)};
    }
    CVec out(s.n);
    for (int j = 0; j < s.n; ++j) {
        FxComplex v = y[t + j];
        if (j >= s.n - t) {
            const FxComplex& h = y[j - (s.n - t)];
            v = {fx_add(v.re, h.re, f), fx_add(v.im, h.im, f)};
        }
        out[j] = dequantize(v, f);
    }
    return out;
}

CVec Transceiver::fft_stage(const CVec& td) const { return quantized(fftshift(fft64(td)), cfg_.signal_fmt()); }

CVec Transceiver::phase_demap(const CVec& grid, int frame_no) const {
    const SubcarrierMap& m = pattern(frame_no);
    cplx acc = 0;
    for (size_t i = 0; i < m.pilot_pos.size(); ++i) acc += grid[m.pilot_pos[i]] * std::conj(m.pilot_vals[i]);
    const cplx rot = std::abs(acc) > 0 ? std::conj(acc) / std::abs(acc) : cplx(1.0);
    CVec d = demap_symbol(grid, m);
    for (auto& v : d) v *= rot;
    return quantized(std::move(d), cfg_.signal_fmt());
}

Bits Transceiver::bpsk_demod(const CVec& syms) const {
    Bits b(syms.size());
    for (size_t i = 0; i < syms.size(); ++i) b[i] = syms[i].real() < 0 ? 1 : 0;
    return b;
}

Bits Transceiver::deinterleave_frame(const Bits& b) const { return deinterleave(b, il_); }
Bits Transceiver::decode_frame(const Bits& c) const { return viterbi_decode(c, Termination::Truncated); }
Bits Transceiver::descramble_frame(const Bits& b) const { return descramble(b, seq_); }

CVec Transceiver::segment_to_grid(const CVec& seg) const {
    if (cfg_.kind == WaveformKind::WOLA) return fft_stage(wola_rx_stage(seg));
    return fft_stage(remove_cp(seg, cfg_.cp));
}

CVec Transceiver::tx(const std::vector<Bits>& frames) const {
    require(frames.size() == size_t(cfg_.frames_per_burst), "tx: wrong number of frames");
    std::vector<CVec> syms;
    for (size_t f = 0; f < frames.size(); ++f) {
        require(frames[f].size() == size_t(kFrameBits), "tx: frames must hold 24 bits");
        CVec t = ifft_stage(map(bpsk(interleave_frame(encode_frame(scramble_frame(frames[f])))), int(f)));
        if (cfg_.kind == WaveformKind::WOLA)
            syms.push_back(window_stage(wola_extend(t, cfg_.cp, cfg_.w)));
        else
            syms.push_back(add_cp(t, cfg_.cp));
    }
    CVec data;
    if (cfg_.kind == WaveformKind::WOLA) {
        data = ola_stage(syms);
    } else {
        for (auto& s : syms) data.insert(data.end(), s.begin(), s.end());
    }
    CVec burst = preamble_stage(data);
    if (cfg_.kind == WaveformKind::FOFDM) burst = filter_stage(burst);
    return burst;
}

RxResult Transceiver::rx(const CVec& stream) const {
    RxResult r;
    r.frames.assign(cfg_.frames_per_burst, Bits(kFrameBits, 0));
    CVec x = adc(stream);
    if (cfg_.kind == WaveformKind::FOFDM) x = filter_stage(x);
    Detection d = detect(x);
    r.detected = d.found;
    r.data_start = d.data_start;
    if (!d.found) return r;
    auto segs = segments(x, d.data_start);
    for (size_t s = 0; s < segs.size(); ++s) {
        CVec data = phase_demap(segment_to_grid(segs[s]), int(s));
        r.frames[s] = descramble_frame(decode_frame(deinterleave_frame(bpsk_demod(data))));
    }
    r.symbols_recovered = int(segs.size());
    return r;
}

CVec tx_chain(const WaveformConfig& cfg, const std::vector<Bits>& frames) { return Transceiver(cfg).tx(frames); }

RxResult rx_chain(const WaveformConfig& cfg, const CVec& stream) { return Transceiver(cfg).rx(stream); }

std::string iq_bytes(const CVec& x, const FxFormat& f) {
    const int nb = f.word_length / 8;
    std::string out;
    out.reserve(x.size() * 2 * size_t(nb));
    for (const cplx& v : x) {
        const FxComplex c = quantize(v, f);
        for (int64_t code : {c.re, c.im}) {
            const uint64_t u = uint64_t(code);
            for (int b = 0; b < nb; ++b) out.push_back(char((u >> (8 * b)) & 0xff));
        }
    }
    return out;
}

CVec parse_iq_bytes(const std::string& bytes, const FxFormat& f) {
    const size_t nb = size_t(f.word_length / 8);
    require(bytes.size() % (2 * nb) == 0, "iq: byte count is not a whole number of samples");
    auto code_at = [&](size_t off) {
        uint64_t u = 0;
        for (size_t b = 0; b < nb; ++b) u |= uint64_t(uint8_t(bytes[off + b])) << (8 * b);
        const int sh = 64 - f.word_length;
        return int64_t(u << sh) >> sh;  // sign-extend
    };
    CVec x(bytes.size() / (2 * nb));
    for (size_t i = 0; i < x.size(); ++i)
        x[i] = {dequantize(code_at(2 * i * nb), f), dequantize(code_at((2 * i + 1) * nb), f)};
    return x;
}

void write_iq_file(const std::string& path, const CVec& x, const FxFormat& f) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + path);
    const std::string b = iq_bytes(x, f);
    o.write(b.data(), std::streamsize(b.size()));
}

std::vector<Bits> stimulus_frames(uint64_t seed, int frames) {
    Rng rng(seed);
    std::vector<Bits> out(frames, Bits(kFrameBits));
    for (auto& f : out)
        for (auto& b : f) b = uint8_t(rng() >> 63);
    return out;
}

Bits flatten(const std::vector<Bits>& frames) {
    Bits b;
    for (const auto& f : frames) b.insert(b.end(), f.begin(), f.end());
    return b;
}

}  // namespace ldacs
