#include "ldacs/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace ldacs {

namespace {

Bits to_bits(const CVec& v) {
    Bits b(v.size());
    for (size_t i = 0; i < v.size(); ++i) b[i] = v[i].real() != 0.0 ? 1 : 0;
    return b;
}

CVec from_bits(const Bits& b) {
    CVec v(b.size());
    for (size_t i = 0; i < b.size(); ++i) v[i] = double(b[i] & 1);
    return v;
}

CVec concat(const std::vector<CVec>& parts) {
    CVec v;
    for (const auto& p : parts) v.insert(v.end(), p.begin(), p.end());
    return v;
}

std::vector<CVec> chunk(const CVec& v, size_t n, bool pad) {
    std::vector<CVec> out;
    for (size_t a = 0; a < v.size(); a += n) {
        CVec c(v.begin() + a, v.begin() + std::min(v.size(), a + n));
        if (pad) c.resize(n, 0.0);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

std::string to_string(Variant v) { return "V" + std::to_string(int(v)); }

Variant parse_variant(const std::string& s) {
    if (s.size() >= 2 && (s[0] == 'V' || s[0] == 'v')) {
        try {
            size_t used = 0;
            int n = std::stoi(s.substr(1), &used);
            if (used == s.size() - 1 && n >= 1 && n <= 10) return Variant(n);
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("unknown partition variant '" + s + "' (expected V1..V10)");
}

const std::vector<Variant>& all_variants() {
    static const std::vector<Variant> v = {Variant::V1, Variant::V2, Variant::V3, Variant::V4, Variant::V5,
                                           Variant::V6, Variant::V7, Variant::V8, Variant::V9, Variant::V10};
    return v;
}

BoundarySpec boundary_spec(Variant v) {
    switch (v) {
        case Variant::V1: return {0, false};
        case Variant::V2: return {150, false};
        case Variant::V3: return {75, false};
        case Variant::V4: return {91, false};
        case Variant::V5:
        case Variant::V6: return {48, false};
        case Variant::V7: return {48, true};
        default: return {24, true};
    }
}

bool variant_applies(Variant v, WaveformKind k) {
    if (v == Variant::V2) return k == WaveformKind::FOFDM;
    if (v == Variant::V4) return k == WaveformKind::WOLA;
    return true;
}

void BoundaryLog::record(size_t n) {
    ++transfers;
    elements += long(n);
    auto it = std::lower_bound(sizes.begin(), sizes.end(), int(n));
    if (it == sizes.end() || *it != int(n)) sizes.insert(it, int(n));
}

PartitionedChain::PartitionedChain(Variant v, WaveformConfig cfg) : v_(v), t_(std::move(cfg)) {
    if (!variant_applies(v, t_.config().kind))
        throw std::invalid_argument(to_string(v) + " does not apply to " + to_string(t_.config().kind));
    seq_ = t_.scramble_frame(Bits(kFrameBits, 0));
    if (v != Variant::V1) {
        txb_.type = rxb_.type = boundary_spec(v).boolean ? "boolean" : "fixed-point";
    }
}

PartitionedChain::TxStage PartitionedChain::first_pl_tx() const {
    switch (v_) {
        case Variant::V1: return TX_NONE;
        case Variant::V2: return TX_FILTER;
        case Variant::V3: return TX_PREAMBLE;
        case Variant::V4: return TX_WINDOW;
        case Variant::V5:
        case Variant::V6: return TX_MAP;
        case Variant::V7: return TX_BPSK;
        case Variant::V8: return TX_ENCODE;
        default: return TX_SCRAMBLE;
    }
}

PartitionedChain::RxStage PartitionedChain::last_pl_rx() const {
    switch (v_) {
        case Variant::V1: return RX_NONE;
        case Variant::V2: return RX_FILTER;
        case Variant::V3: return RX_DETECT;
        case Variant::V4: return RX_SEGMENT;
        case Variant::V5:
        case Variant::V6: return RX_DEMAP;
        case Variant::V7: return RX_DEMOD;
        case Variant::V8:
        case Variant::V9: return RX_DECODE;
        default: return RX_DESCRAMBLE;
    }
}

std::vector<CVec> PartitionedChain::ps_tx(const std::vector<Bits>& frames, TxStage first, CVec* burst) const {
    const auto& cfg = t_.config();
    const bool wola = cfg.kind == WaveformKind::WOLA;
    std::vector<CVec> chunks, syms;
    for (size_t f = 0; f < frames.size(); ++f) {
        require(frames[f].size() == size_t(kFrameBits), "tx: frames must hold 24 bits");
        if (first == TX_SCRAMBLE) {
            chunks.push_back(from_bits(frames[f]));
            continue;
        }
        Bits s = t_.scramble_frame(frames[f]);
        if (first == TX_ENCODE) {
            chunks.push_back(from_bits(s));
            continue;
        }
        Bits il = t_.interleave_frame(t_.encode_frame(s));
        if (first == TX_BPSK) {
            chunks.push_back(from_bits(il));
            continue;
        }
        CVec b = t_.bpsk(il);
        if (first == TX_MAP) {
            chunks.push_back(b);
            continue;
        }
        CVec td = t_.ifft_stage(t_.map(b, int(f)));
        if (!wola) {
            syms.push_back(add_cp(td, cfg.cp));
            continue;
        }
        CVec ext = wola_extend(td, cfg.cp, cfg.w);
        if (first == TX_WINDOW) {
            chunks.push_back(ext);
            continue;
        }
        syms.push_back(t_.window_stage(ext));
    }
    if (first <= TX_WINDOW) return chunks;
    CVec data = wola ? t_.ola_stage(syms) : concat(syms);
    CVec b = t_.preamble_stage(data);
    if (first == TX_PREAMBLE) {
        // CP symbols for OFDM; the overlap-added stream cut into the same unit for WOLA
        *burst = b;
        return chunk(data, size_t(boundary_spec(v_).count), true);
    }
    if (first == TX_FILTER) {
        *burst = b;
        return chunk(b, size_t(boundary_spec(v_).count), true);
    }
    if (cfg.kind == WaveformKind::FOFDM) b = t_.filter_stage(b);
    *burst = b;
    return {};
}

Pipeline PartitionedChain::tx_pipeline(TxStage first) const {
    const auto& cfg = t_.config();
    const Transceiver& t = t_;
    Pipeline p;
    if (first == TX_NONE) return p;
    if (first <= TX_SCRAMBLE) p.add(std::make_unique<StreamScrambler>(seq_));
    if (first <= TX_ENCODE) {
        p.add(std::make_unique<FireBlock>("encoder", kFrameBits,
                                          [&t](const CVec& in, int) { return from_bits(t.encode_frame(to_bits(in))); }));
        p.add(std::make_unique<FireBlock>(
            "interleaver", kCodedBits, [&t](const CVec& in, int) { return from_bits(t.interleave_frame(to_bits(in))); }));
    }
    if (first <= TX_BPSK)
        p.add(std::make_unique<FireBlock>("bpsk", 1, [&t](const CVec& in, int) { return t.bpsk(to_bits(in)); }));
    if (first <= TX_MAP) {
        p.add(std::make_unique<FireBlock>("mapper", kCodedBits,
                                          [&t](const CVec& in, int u) { return t.map(in, u); }));
        p.add(std::make_unique<FireBlock>("ifft", cfg.n, [&t](const CVec& in, int) { return t.ifft_stage(in); }));
        if (cfg.kind != WaveformKind::WOLA) p.add(std::make_unique<CpAdder>(cfg.n, cfg.cp));
    }
    if (cfg.kind == WaveformKind::WOLA && first <= TX_WINDOW) {
        const auto& w = t.windows();
        p.add(std::make_unique<StreamWindow>(w.p1, w.p2, cfg.n, cfg.cp, cfg.w, cfg.signal_fmt(),
                                             cfg.shaping_coeff_fmt(), cfg.shaping_fmt(), first == TX_WINDOW));
    }
    if (cfg.kind == WaveformKind::WOLA && first <= TX_WINDOW)
        p.add(std::make_unique<StreamOla>(cfg.symbol_length(), cfg.symbol_hop(), cfg.shaping_fmt()));
    if (first <= TX_PREAMBLE) p.add(std::make_unique<PreambleAdder>(t.preamble(), cfg.guard_samples));
    if (cfg.kind == WaveformKind::FOFDM) p.add(std::make_unique<StreamFir>(t.fir()));
    return p;
}

CVec PartitionedChain::tx(const std::vector<Bits>& frames) {
    require(frames.size() == size_t(t_.config().frames_per_burst), "tx: wrong number of frames");
    const TxStage first = first_pl_tx();
    CVec burst;
    std::vector<CVec> chunks = ps_tx(frames, first, &burst);
    if (first == TX_NONE) return burst;
    for (const auto& c : chunks) txb_.record(c.size());
    Pipeline p = tx_pipeline(first);
    p.set_trace(trace_);
    CVec out = payloads(p.run(to_stream(concat(chunks))));
    if (first >= TX_PREAMBLE) out.resize(burst.size());
    return out;
}

Pipeline PartitionedChain::rx_pipeline(RxStage last, Detection* det) const {
    const auto& cfg = t_.config();
    const Transceiver& t = t_;
    Pipeline p;
    if (last == RX_NONE) return p;
    p.add(std::make_unique<FireBlock>("adc", 1, [&t](const CVec& in, int) { return t.adc(in); }));
    if (cfg.kind == WaveformKind::FOFDM) p.add(std::make_unique<StreamFir>(t.fir()));
    if (last >= RX_DETECT) {
        // V3 hands over the data region; later splits hand over whole symbol segments
        const bool region = last == RX_DETECT;
        const long dlen = cfg.data_length();
        p.add(std::make_unique<FireBlock>("detector", 0, [&t, det, region, dlen](const CVec& in, int) {
            *det = t.detect(in);
            if (!det->found) return CVec{};
            if (!region) return concat(t.segments(in, det->data_start));
            const long a = std::max(0L, det->data_start), b = std::min(long(in.size()), det->data_start + dlen);
            return b > a ? CVec(in.begin() + a, in.begin() + b) : CVec{};
        }));
    }
    if (last >= RX_GRID) {
        const bool wola = cfg.kind == WaveformKind::WOLA;
        const int cp = cfg.cp;
        p.add(std::make_unique<FireBlock>(wola ? "wola_rx" : "cp_remove", cfg.symbol_length(),
                                          [&t, wola, cp](const CVec& in, int) {
                                              return wola ? t.wola_rx_stage(in) : remove_cp(in, cp);
                                          }));
        p.add(std::make_unique<FireBlock>("fft", cfg.n, [&t](const CVec& in, int) { return t.fft_stage(in); }));
    }
    if (last >= RX_DEMAP)
        p.add(std::make_unique<FireBlock>("phase_demap", cfg.n,
                                          [&t](const CVec& in, int u) { return t.phase_demap(in, u); }));
    if (last >= RX_DEMOD)
        p.add(std::make_unique<FireBlock>("bpsk_demod", 1,
                                          [&t](const CVec& in, int) { return from_bits(t.bpsk_demod(in)); }));
    if (last >= RX_DECODE) {
        p.add(std::make_unique<FireBlock>(
            "deinterleaver", kCodedBits, [&t](const CVec& in, int) { return from_bits(t.deinterleave_frame(to_bits(in))); }));
        p.add(std::make_unique<FireBlock>("viterbi", kCodedBits,
                                          [&t](const CVec& in, int) { return from_bits(t.decode_frame(to_bits(in))); }));
    }
    if (last >= RX_DESCRAMBLE) p.add(std::make_unique<StreamScrambler>(seq_, "descrambler"));
    return p;
}

RxResult PartitionedChain::ps_rx(const std::vector<CVec>& chunks, RxStage after, const Detection& det,
                                 size_t pl_len) const {
    const auto& cfg = t_.config();
    RxResult r;
    r.frames.assign(cfg.frames_per_burst, Bits(kFrameBits, 0));
    std::vector<CVec> segs;
    Detection d = det;
    if (after == RX_FILTER) {
        CVec x = concat(chunks);
        x.resize(pl_len);
        d = t_.detect(x);
        if (d.found) segs = t_.segments(x, d.data_start);
    } else if (after == RX_DETECT) {
        CVec x = concat(chunks);
        x.resize(pl_len);
        segs = t_.segments(x, 0);
    } else {
        segs = chunks;
    }
    r.detected = d.found;
    r.data_start = d.data_start;
    const size_t n = std::min(segs.size(), r.frames.size());
    for (size_t s = 0; s < n; ++s) {
        const CVec& c = segs[s];
        Bits b;
        switch (after) {
            case RX_FILTER:
            case RX_DETECT:
            case RX_SEGMENT: b = t_.bpsk_demod(t_.phase_demap(t_.segment_to_grid(c), int(s))); break;
            case RX_DEMAP: b = t_.bpsk_demod(c); break;
            case RX_DEMOD: b = to_bits(c); break;
            default: break;
        }
        if (after <= RX_DEMOD) b = t_.decode_frame(t_.deinterleave_frame(b));
        else b = to_bits(c);
        if (after < RX_DESCRAMBLE) b = t_.descramble_frame(b);
        r.frames[s] = b;
    }
    r.symbols_recovered = int(n);
    return r;
}

RxResult PartitionedChain::rx(const CVec& x) {
    const RxStage last = last_pl_rx();
    if (last == RX_NONE) return t_.rx(x);
    Detection det;
    Pipeline p = rx_pipeline(last, &det);
    p.set_trace(trace_);
    CVec out = payloads(p.run(to_stream(x)));
    const BoundarySpec bs = boundary_spec(v_);
    std::vector<CVec> chunks = chunk(out, size_t(bs.count), last <= RX_DETECT);
    for (const auto& c : chunks) rxb_.record(c.size());
    return ps_rx(chunks, last, det, out.size());
}

std::vector<std::string> PartitionedChain::tx_stream_blocks() const {
    Pipeline p = tx_pipeline(first_pl_tx());
    std::vector<std::string> n;
    for (size_t i = 0; i < p.size(); ++i) n.push_back(p.block(i).name());
    return n;
}

std::vector<std::string> PartitionedChain::rx_stream_blocks() const {
    Detection d;
    Pipeline p = rx_pipeline(last_pl_rx(), &d);
    std::vector<std::string> n;
    for (size_t i = 0; i < p.size(); ++i) n.push_back(p.block(i).name());
    return n;
}

}  // namespace ldacs
