#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ldacs/stream.hpp"
#include "ldacs/waveforms.hpp"

namespace ldacs {

// Split point between frame-mode (PS) and stream-mode (PL) execution. V1 runs the
// whole chain frame-mode; each later variant moves more stages onto the stream side.
enum class Variant { V1 = 1, V2, V3, V4, V5, V6, V7, V8, V9, V10 };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);
const std::vector<Variant>& all_variants();

struct BoundarySpec {
    int count = 0;  // elements per transfer; 0 for V1
    bool boolean = false;
};
BoundarySpec boundary_spec(Variant v);

// V2 needs the FOFDM filter and V4 the WOLA window; everything else fits any kind.
bool variant_applies(Variant v, WaveformKind k);

struct BoundaryLog {
    std::string type = "none";
    long transfers = 0;
    long elements = 0;
    std::vector<int> sizes;  // distinct transfer sizes, ascending
    void record(size_t n);
};

class PartitionedChain {
public:
    // Throws std::invalid_argument for an incompatible (variant, kind) pair.
    PartitionedChain(Variant v, WaveformConfig cfg);

    CVec tx(const std::vector<Bits>& frames);
    RxResult rx(const CVec& x);

    Variant variant() const { return v_; }
    const Transceiver& transceiver() const { return t_; }
    const BoundaryLog& tx_boundary() const { return txb_; }
    const BoundaryLog& rx_boundary() const { return rxb_; }
    std::vector<std::string> tx_stream_blocks() const;
    std::vector<std::string> rx_stream_blocks() const;
    void set_trace(std::ostream* os) { trace_ = os; }

private:
    enum TxStage { TX_SCRAMBLE, TX_ENCODE, TX_INTERLEAVE, TX_BPSK, TX_MAP, TX_IFFT, TX_WINDOW, TX_PREAMBLE, TX_FILTER, TX_NONE };
    enum RxStage { RX_NONE = -1, RX_ADC, RX_FILTER, RX_DETECT, RX_SEGMENT, RX_GRID, RX_FFT, RX_DEMAP, RX_DEMOD, RX_DEINTERLEAVE, RX_DECODE, RX_DESCRAMBLE };

    TxStage first_pl_tx() const;
    RxStage last_pl_rx() const;
    std::vector<CVec> ps_tx(const std::vector<Bits>& frames, TxStage first, CVec* burst) const;
    Pipeline tx_pipeline(TxStage first) const;
    Pipeline rx_pipeline(RxStage last, Detection* det) const;
    RxResult ps_rx(const std::vector<CVec>& chunks, RxStage after, const Detection& det, size_t pl_len) const;

    Variant v_;
    Transceiver t_;
    Bits seq_;
    BoundaryLog txb_, rxb_;
    std::ostream* trace_ = nullptr;
};

}  // namespace ldacs
