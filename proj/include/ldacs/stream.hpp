#pragma once

#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ldacs/numeric.hpp"
#include "ldacs/waveforms.hpp"

namespace ldacs {

// One clock cycle on a block port. Scalars carry one element; beats carry a whole
// vector in a single cycle. Bits travel as 0/1 in the real part. `last` marks the end
// of a burst and may arrive on an otherwise idle cycle.
struct StreamSample {
    CVec payload;
    bool valid = false;
    bool reset = false;
    bool last = false;

    static StreamSample data(cplx v, bool last = false) { return {{v}, true, false, last}; }
    static StreamSample beat(CVec v, bool last = false) { return {std::move(v), true, false, last}; }
    static StreamSample idle() { return {}; }
    static StreamSample end() { return {{}, false, false, true}; }
    static StreamSample reset_pulse() { return {{}, false, true, false}; }
};

std::vector<StreamSample> to_stream(const CVec& v, bool mark_last = true);
std::vector<StreamSample> bits_to_stream(const Bits& b, bool mark_last = true);
// Concatenated payloads of the valid samples.
CVec payloads(const std::vector<StreamSample>& s);
Bits payload_bits(const std::vector<StreamSample>& s);

class StreamBlock {
public:
    virtual ~StreamBlock() = default;
    virtual std::string name() const = 0;
    // Steps between the first valid input of a unit and its first valid output with
    // back-to-back input; an output on the completing input's own cycle counts zero.
    virtual int latency() const = 0;

    // Advance one cycle. A reset input clears all state and is forwarded.
    StreamSample step(const StreamSample& in);
    bool busy() const { return !out_.empty() || pending(); }

protected:
    virtual void clear() = 0;
    virtual void consume(const StreamSample& in) = 0;  // valid inputs only
    virtual void finish() = 0;                         // `last` seen on the input
    virtual void tick() {}                             // once per cycle after consume
    virtual bool pending() const { return false; }

    void emit(cplx v) { out_.push_back(StreamSample::data(v)); }
    void emit_beat(CVec v) { out_.push_back(StreamSample::beat(std::move(v))); }
    // Tag the newest queued output as last, or queue a bare end marker.
    void mark_last();

    std::deque<StreamSample> out_;
};

// Cyclic-prefix insertion with an N-sample frame register and a mod-N write counter.
// Completed frames are read out CP tail first; the output FIFO absorbs the rate step.
class CpAdder : public StreamBlock {
public:
    explicit CpAdder(int n = 64, int cp = 11);
    std::string name() const override { return "cp_adder"; }
    int latency() const override { return n_ - 1; }

protected:
    void clear() override;
    void consume(const StreamSample& in) override;
    void finish() override { mark_last(); }

private:
    int n_, cp_, count_ = 0;
    CVec reg_;
};

// WOLA transmit window. Collects one symbol through a tapped delay line and fires a
// single 91-wide output beat. P1 covers the rising taper plus the CP, P2 the falling
// taper; samples between them take the unity coefficient.
class StreamWindow : public StreamBlock {
public:
    StreamWindow(const std::vector<double>& p1, const std::vector<double>& p2, int n, int cp, int w,
                 FxFormat in, FxFormat coeff, FxFormat out, bool extended_input = false);
    std::string name() const override { return "window"; }
    int latency() const override { return in_len_ - 1; }

protected:
    void clear() override;
    void consume(const StreamSample& in) override;
    void finish() override { mark_last(); }

private:
    std::vector<int64_t> p1_, p2_;
    int64_t unity_;
    int n_, cp_, w_, in_len_;
    FxFormat in_, coeff_, out_;
    CVec taps_;
};

// Overlap-add of windowed symbols at hop N+CP+W. Accepts 91-wide beats or 91
// consecutive scalars. The W-sample tail register is flushed on `last`.
class StreamOla : public StreamBlock {
public:
    StreamOla(int len, int hop, FxFormat f);
    std::string name() const override { return "ola"; }
    int latency() const override { return 0; }  // beat input

protected:
    void clear() override;
    void consume(const StreamSample& in) override;
    void finish() override;

private:
    void fire(const CVec& sym);
    int len_, hop_;
    FxFormat f_;
    CVec gather_;
    std::vector<FxComplex> tail_;
};

// Counter-addressed preamble LUT ahead of the data, then guard zeros after `last`.
class PreambleAdder : public StreamBlock {
public:
    PreambleAdder(CVec preamble, int guard);
    std::string name() const override { return "preamble"; }
    int latency() const override { return 0; }

protected:
    void clear() override;
    void consume(const StreamSample& in) override;
    void finish() override;
    void tick() override;
    bool pending() const override { return !fifo_.empty() || (started_ && sent_ < lut_.size()); }

private:
    CVec lut_;
    int guard_;
    size_t sent_ = 0;
    bool started_ = false, ending_ = false;
    std::deque<cplx> fifo_;
};

// Per-sample MAC filter. The delay line shifts on valid input; each product sum enters
// a free-running pipeline of `pipeline` registers. The first delay() sums are dropped
// and `last` injects delay() zeros so the output is delay-compensated and keeps the
// input length.
class StreamFir : public StreamBlock {
public:
    explicit StreamFir(FxFir fir, int pipeline = 75);
    std::string name() const override { return "fir"; }
    int latency() const override { return fir_.delay() + pipe_len_; }

protected:
    void clear() override;
    void consume(const StreamSample& in) override;
    void finish() override;
    void tick() override;
    bool pending() const override;

private:
    void shift_in(const FxComplex& v);
    FxFir fir_;
    int pipe_len_;
    std::vector<FxComplex> line_;
    long seen_ = 0;
    int flush_left_ = 0;
    bool ending_ = false;
    bool staged_ = false;
    bool consumed_ = false;
    cplx staged_val_;
    struct Reg {
        bool valid = false, last = false;
        cplx v;
    };
    std::deque<Reg> pipe_;
};

// XOR against the scrambling sequence; a frame is released once all 24 valid bits
// have arrived.
class StreamScrambler : public StreamBlock {
public:
    explicit StreamScrambler(Bits seq, std::string name = "scrambler");
    std::string name() const override { return name_; }
    int latency() const override { return int(seq_.size()) - 1; }

protected:
    void clear() override { buf_.clear(); }
    void consume(const StreamSample& in) override;
    void finish() override { mark_last(); }

private:
    Bits seq_;
    std::string name_;
    Bits buf_;
};

// Accumulate-then-fire wrapper around a frame-mode kernel. unit = 0 means the whole
// burst up to `last`. The kernel gets the unit index, which resets with the block.
class FireBlock : public StreamBlock {
public:
    using Kernel = std::function<CVec(const CVec&, int unit)>;
    FireBlock(std::string name, int unit, Kernel k, bool beat_out = false);
    std::string name() const override { return name_; }
    int latency() const override { return unit_ > 0 ? unit_ - 1 : 0; }

protected:
    void clear() override;
    void consume(const StreamSample& in) override;
    void finish() override;

private:
    void fire();
    std::string name_;
    int unit_;
    Kernel k_;
    bool beat_out_;
    CVec buf_;
    int count_ = 0;
};

class Pipeline {
public:
    void add(std::unique_ptr<StreamBlock> b) { blocks_.push_back(std::move(b)); }
    bool empty() const { return blocks_.empty(); }
    size_t size() const { return blocks_.size(); }
    StreamBlock& block(size_t i) { return *blocks_[i]; }
    void set_trace(std::ostream* os) { trace_ = os; }

    // Feed `input` one sample per step, then idle cycles until `last` leaves the final
    // block. Returns every non-idle output of the final block.
    std::vector<StreamSample> run(const std::vector<StreamSample>& input, long max_steps = 50'000'000);
    StreamSample step(const StreamSample& in);
    long steps() const { return step_; }

private:
    std::vector<std::unique_ptr<StreamBlock>> blocks_;
    std::ostream* trace_ = nullptr;
    long step_ = 0;
};

// Step index of each valid output of a single block fed with `input`.
std::vector<long> valid_steps(StreamBlock& b, const std::vector<StreamSample>& input, long max_steps = 1'000'000);

}  // namespace ldacs
