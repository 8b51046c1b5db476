#include "ldacs/stream.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ldacs {

std::vector<StreamSample> to_stream(const CVec& v, bool mark_last) {
    std::vector<StreamSample> s;
    s.reserve(v.size() + 1);
    for (const auto& x : v) s.push_back(StreamSample::data(x));
    if (mark_last) {
        if (s.empty())
            s.push_back(StreamSample::end());
        else
            s.back().last = true;
    }
    return s;
}

std::vector<StreamSample> bits_to_stream(const Bits& b, bool mark_last) {
    CVec v(b.size());
    for (size_t i = 0; i < b.size(); ++i) v[i] = double(b[i] & 1);
    return to_stream(v, mark_last);
}

CVec payloads(const std::vector<StreamSample>& s) {
    CVec v;
    for (const auto& x : s)
        if (x.valid) v.insert(v.end(), x.payload.begin(), x.payload.end());
    return v;
}

Bits payload_bits(const std::vector<StreamSample>& s) {
    Bits b;
    for (const auto& v : payloads(s)) b.push_back(v.real() != 0.0 ? 1 : 0);
    return b;
}

StreamSample StreamBlock::step(const StreamSample& in) {
    if (in.reset) {
        out_.clear();
        clear();
        return StreamSample::reset_pulse();
    }
    if (in.valid) consume(in);
    if (in.last) finish();
    tick();
    if (out_.empty()) return StreamSample::idle();
    StreamSample s = std::move(out_.front());
    out_.pop_front();
    return s;
}

void StreamBlock::mark_last() {
    if (out_.empty())
        out_.push_back(StreamSample::end());
    else
        out_.back().last = true;
}

// ---- CP adder ----

CpAdder::CpAdder(int n, int cp) : n_(n), cp_(cp), reg_(n) {
    require(n > 0 && cp >= 0 && cp <= n, "cp_adder: bad geometry");
}

void CpAdder::clear() { count_ = 0; }

void CpAdder::consume(const StreamSample& in) {
    for (const auto& v : in.payload) {
        reg_[count_] = v;
        count_ = (count_ + 1) % n_;
        if (count_ == 0) {
            for (int k = n_ - cp_; k < n_; ++k) emit(reg_[k]);
            for (int k = 0; k < n_; ++k) emit(reg_[k]);
        }
    }
}

// ---- WOLA window ----

StreamWindow::StreamWindow(const std::vector<double>& p1, const std::vector<double>& p2, int n, int cp, int w,
                           FxFormat in, FxFormat coeff, FxFormat out, bool extended_input)
    : unity_(quantize(1.0, coeff)),
      n_(n),
      cp_(cp),
      w_(w),
      in_len_(extended_input ? n + cp + 2 * w : n),
      in_(in),
      coeff_(coeff),
      out_(out) {
    require(int(p1.size()) == w + cp && int(p2.size()) == w, "window: P1 must hold W+CP and P2 W coefficients");
    for (double c : p1) p1_.push_back(quantize(c, coeff));
    for (double c : p2) p2_.push_back(quantize(c, coeff));
}

void StreamWindow::clear() { taps_.clear(); }

void StreamWindow::consume(const StreamSample& in) {
    for (const auto& v : in.payload) {
        taps_.push_back(v);
        if (int(taps_.size()) < in_len_) continue;
        CVec ext = in_len_ == n_ ? wola_extend(taps_, cp_, w_) : taps_;
        const int len = int(ext.size()), tail0 = len - w_;
        CVec y(len);
        for (int k = 0; k < len; ++k) {
            const int64_t c = k < int(p1_.size()) ? p1_[k] : k >= tail0 ? p2_[k - tail0] : unity_;
            FxComplex z = quantize(ext[k], in_);
            y[k] = {dequantize(fx_mul_mixed(z.re, in_, c, coeff_, out_), out_),
                    dequantize(fx_mul_mixed(z.im, in_, c, coeff_, out_), out_)};
        }
        emit_beat(std::move(y));
        taps_.clear();
    }
}

// ---- overlap-add ----

StreamOla::StreamOla(int len, int hop, FxFormat f) : len_(len), hop_(hop), f_(f), tail_(len - hop) {}

void StreamOla::clear() {
    gather_.clear();
    std::fill(tail_.begin(), tail_.end(), FxComplex{});
}

void StreamOla::consume(const StreamSample& in) {
    if (int(in.payload.size()) == len_ && gather_.empty()) {
        fire(in.payload);
        return;
    }
    for (const auto& v : in.payload) {
        gather_.push_back(v);
        if (int(gather_.size()) == len_) {
            fire(gather_);
            gather_.clear();
        }
    }
}

void StreamOla::fire(const CVec& sym) {
    const int ov = len_ - hop_;
    for (int k = 0; k < hop_; ++k) {
        FxComplex z = quantize(sym[k], f_);
        if (k < ov) z = {fx_add(tail_[k].re, z.re, f_), fx_add(tail_[k].im, z.im, f_)};
        emit(dequantize(z, f_));
    }
    for (int k = 0; k < ov; ++k) tail_[k] = quantize(sym[hop_ + k], f_);
}

void StreamOla::finish() {
    for (const auto& t : tail_) emit(dequantize(t, f_));
    std::fill(tail_.begin(), tail_.end(), FxComplex{});
    mark_last();
}

// ---- preamble ----

PreambleAdder::PreambleAdder(CVec preamble, int guard) : lut_(std::move(preamble)), guard_(guard) { clear(); }

void PreambleAdder::clear() {
    sent_ = 0;
    started_ = false;
    ending_ = false;
    fifo_.clear();
}

void PreambleAdder::consume(const StreamSample& in) {
    started_ = true;
    for (const auto& v : in.payload) fifo_.push_back(v);
}

void PreambleAdder::finish() {
    started_ = true;
    ending_ = true;
    for (int i = 0; i < guard_; ++i) fifo_.push_back(0.0);
}

void PreambleAdder::tick() {
    if (!started_) return;
    if (sent_ < lut_.size()) {
        emit(lut_[sent_++]);
    } else if (!fifo_.empty()) {
        emit(fifo_.front());
        fifo_.pop_front();
    }
    if (ending_ && sent_ == lut_.size() && fifo_.empty()) {
        mark_last();
        clear();
    }
}

// ---- FIR ----

StreamFir::StreamFir(FxFir fir, int pipeline) : fir_(std::move(fir)), pipe_len_(pipeline) { clear(); }

void StreamFir::clear() {
    line_.assign(fir_.taps.size(), FxComplex{});
    seen_ = 0;
    flush_left_ = 0;
    ending_ = false;
    staged_ = false;
    consumed_ = false;
    pipe_.assign(pipe_len_, Reg{});
}

void StreamFir::shift_in(const FxComplex& v) {
    line_.pop_back();
    line_.insert(line_.begin(), v);
    ++seen_;
    if (seen_ > fir_.delay()) {
        staged_ = true;
        staged_val_ = fir_.mac(line_);
    }
}

void StreamFir::consume(const StreamSample& in) {
    require(in.payload.size() == 1, "fir: scalar input expected");
    consumed_ = true;
    shift_in(quantize(in.payload[0], fir_.in_fmt));
}

void StreamFir::finish() {
    ending_ = true;
    flush_left_ = fir_.delay();
}

bool StreamFir::pending() const {
    if (flush_left_ > 0 || ending_) return true;
    for (const auto& r : pipe_)
        if (r.valid || r.last) return true;
    return false;
}

void StreamFir::tick() {
    // a flush zero uses the cycle only when no real sample did
    if (!consumed_ && flush_left_ > 0) {
        shift_in(FxComplex{});
        --flush_left_;
    }
    consumed_ = false;
    Reg r;
    r.valid = staged_;
    r.v = staged_val_;
    if (ending_ && flush_left_ == 0) {
        r.last = true;
        ending_ = false;
        line_.assign(fir_.taps.size(), FxComplex{});
        seen_ = 0;
    }
    staged_ = false;
    pipe_.push_back(r);
    Reg o = pipe_.front();
    pipe_.pop_front();
    if (o.valid) emit(o.v);
    if (o.last) mark_last();
}

// ---- scrambler ----

StreamScrambler::StreamScrambler(Bits seq, std::string name) : seq_(std::move(seq)), name_(std::move(name)) {
    require(!seq_.empty(), "scrambler: empty sequence");
}

void StreamScrambler::consume(const StreamSample& in) {
    for (const auto& v : in.payload) {
        buf_.push_back(v.real() != 0.0 ? 1 : 0);
        if (buf_.size() == seq_.size()) {
            for (size_t i = 0; i < buf_.size(); ++i) emit(double(buf_[i] ^ seq_[i]));
            buf_.clear();
        }
    }
}

// ---- accumulate-then-fire ----

FireBlock::FireBlock(std::string name, int unit, Kernel k, bool beat_out)
    : name_(std::move(name)), unit_(unit), k_(std::move(k)), beat_out_(beat_out) {}

void FireBlock::clear() {
    buf_.clear();
    count_ = 0;
}

void FireBlock::fire() {
    CVec y = k_(buf_, count_++);
    buf_.clear();
    if (beat_out_) {
        if (!y.empty()) emit_beat(std::move(y));
    } else {
        for (const auto& v : y) emit(v);
    }
}

void FireBlock::consume(const StreamSample& in) {
    for (const auto& v : in.payload) {
        buf_.push_back(v);
        if (unit_ > 0 && int(buf_.size()) == unit_) fire();
    }
}

void FireBlock::finish() {
    if (unit_ == 0) fire();
    buf_.clear();  // a partial unit at end of burst is dropped
    mark_last();
    count_ = 0;
}

// ---- driver ----

StreamSample Pipeline::step(const StreamSample& in) {
    StreamSample s = in;
    for (auto& b : blocks_) {
        s = b->step(s);
        if (trace_ && (s.valid || s.last || s.reset)) {
            *trace_ << step_ << ',' << b->name() << ',' << (s.valid ? 1 : 0) << ',';
            if (s.payload.size() == 1) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.9g%+.9gj", s.payload[0].real(), s.payload[0].imag());
                *trace_ << buf;
            } else if (!s.payload.empty()) {
                *trace_ << "beat[" << s.payload.size() << "]";
            }
            *trace_ << (s.last ? ",last" : "") << (s.reset ? ",reset" : "") << '\n';
        }
    }
    ++step_;
    return s;
}

std::vector<StreamSample> Pipeline::run(const std::vector<StreamSample>& input, long max_steps) {
    std::vector<StreamSample> out;
    if (blocks_.empty()) {
        for (const auto& s : input)
            if (s.valid || s.last) out.push_back(s);
        return out;
    }
    const long start = step_;
    size_t i = 0;
    bool fed_last = false;
    for (;;) {
        if (step_ - start > max_steps) throw std::runtime_error("pipeline: step budget exhausted");
        StreamSample in = i < input.size() ? input[i++] : StreamSample::idle();
        fed_last = fed_last || in.last;
        StreamSample o = step(in);
        if (o.valid || o.last) out.push_back(o);
        if (o.last && i >= input.size()) break;
        if (i >= input.size() && !fed_last) {
            bool busy = false;
            for (auto& b : blocks_) busy = busy || b->busy();
            if (!busy) break;
        }
    }
    return out;
}

std::vector<long> valid_steps(StreamBlock& b, const std::vector<StreamSample>& input, long max_steps) {
    std::vector<long> steps;
    bool ended = false;
    for (long t = 0; t < max_steps; ++t) {
        StreamSample in = size_t(t) < input.size() ? input[t] : StreamSample::idle();
        StreamSample o = b.step(in);
        if (o.valid) steps.push_back(t);
        if (o.last) ended = true;
        if (size_t(t) >= input.size() && (ended || !b.busy())) break;
    }
    return steps;
}

}  // namespace ldacs
