#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "ldacs/fft.hpp"
#include "ldacs/stream.hpp"

using namespace ldacs;

namespace {

CVec random_cvec(std::mt19937_64& rng, size_t n, double amp, const FxFormat& f) {
    std::uniform_real_distribution<double> U(-amp, amp);
    CVec v(n);
    for (auto& x : v) x = {U(rng), U(rng)};
    return quantized(v, f);
}

template <class B>
std::vector<StreamSample> run_one(std::unique_ptr<B> b, const std::vector<StreamSample>& in) {
    Pipeline p;
    p.add(std::move(b));
    return p.run(in);
}

}  // namespace

TEST_CASE("cp adder example") {
    // n = 4, cp = 1: a0..a3 b0..b3 -> a3 a0 a1 a2 a3 b3 b0 b1 b2 b3
    CVec in = {1, 2, 3, 4, 10, 20, 30, 40};
    auto out = run_one(std::make_unique<CpAdder>(4, 1), to_stream(in));
    CHECK(payloads(out) == CVec{4, 1, 2, 3, 4, 40, 10, 20, 30, 40});
    CHECK(out.back().last);
    CpAdder c(4, 1);
    auto st = valid_steps(c, to_stream(in));
    REQUIRE(st.size() == 10);
    CHECK(st[0] == 3);
    CHECK(c.latency() == 3);
}

TEST_CASE("cp adder equals frame-mode insertion over many frames") {
    std::mt19937_64 rng(1);
    const FxFormat f = signal_format(16);
    CVec in, ref;
    for (int s = 0; s < 1000; ++s) {
        CVec sym = random_cvec(rng, 64, 1.0, f);
        in.insert(in.end(), sym.begin(), sym.end());
        CVec c = add_cp(sym);
        ref.insert(ref.end(), c.begin(), c.end());
    }
    CHECK(payloads(run_one(std::make_unique<CpAdder>(), to_stream(in))) == ref);
}

TEST_CASE("window block") {
    const WindowSpec ws;
    const auto win = design_rrc_window(ws);
    const FxFormat s = signal_format(16), c = coeff_format(16);
    std::mt19937_64 rng(2);
    CVec sym = random_cvec(rng, 64, 0.5, s);
    CVec ext = wola_extend(sym);

    // all-ones tapers pass the symbol through (coefficient one is one LSB short)
    std::vector<double> ones1(19, 1.0), ones2(8, 1.0);
    auto out = run_one(std::make_unique<StreamWindow>(ones1, ones2, 64, 11, 8, s, c, s, true), to_stream(ext));
    REQUIRE(out.size() == 1);
    REQUIRE(out[0].payload.size() == 91);
    for (size_t k = 0; k < 91; ++k) CHECK(std::abs(out[0].payload[k] - ext[k]) <= 2 * s.resolution());

    // zero input stays zero
    auto z = run_one(std::make_unique<StreamWindow>(win.p1, win.p2, 64, 11, 8, s, c, s, true), to_stream(CVec(91)));
    for (auto v : z[0].payload) CHECK(v == cplx{});

    // the 64-sample input form builds the extension itself
    WaveformConfig cfg;
    cfg.kind = WaveformKind::WOLA;
    cfg.word_length = 16;
    Transceiver t(cfg);
    auto w64 = run_one(std::make_unique<StreamWindow>(win.p1, win.p2, 64, 11, 8, s, c, s, false), to_stream(sym));
    CHECK(w64[0].payload == t.window_stage(ext));
    StreamWindow wb(win.p1, win.p2, 64, 11, 8, s, c, s, false);
    CHECK(valid_steps(wb, to_stream(sym)) == std::vector<long>{63});
}

TEST_CASE("overlap-add block") {
    const FxFormat f = signal_format(32);
    std::mt19937_64 rng(3);
    std::vector<CVec> syms;
    std::vector<StreamSample> in;
    for (int i = 0; i < 5; ++i) {
        syms.push_back(random_cvec(rng, 91, 0.5, f));
        in.push_back(StreamSample::beat(syms.back(), i == 4));
    }
    CVec ref = quantized(overlap_add_ref(syms, 83), f);
    CHECK(payloads(run_one(std::make_unique<StreamOla>(91, 83, f), in)) == ref);
}

TEST_CASE("FIR block") {
    WaveformConfig cfg;
    cfg.kind = WaveformKind::FOFDM;
    cfg.word_length = 16;
    Transceiver t(cfg);
    const FxFormat s = cfg.signal_fmt();

    CVec imp(400, 0.0);
    imp[200] = 0.5;
    CVec out = payloads(run_one(std::make_unique<StreamFir>(t.fir()), to_stream(imp)));
    REQUIRE(out.size() == imp.size());
    CHECK(out == t.filter_stage(imp));
    const auto& h = t.filter_taps();
    for (size_t k = 0; k < h.size(); ++k) CHECK(std::abs(out[125 + k].real() - 0.5 * h[k]) <= 2 * s.resolution());

    std::mt19937_64 rng(4);
    CVec x = random_cvec(rng, 2000, 0.4, s);
    CHECK(payloads(run_one(std::make_unique<StreamFir>(t.fir()), to_stream(x))) == t.filter_stage(x));

    StreamFir fir(t.fir());
    CHECK(fir.latency() == 150);
    auto st = valid_steps(fir, to_stream(x));
    REQUIRE(st.size() == x.size());
    CHECK(st.front() == 150);
    for (size_t i = 1; i < st.size(); ++i) CHECK(st[i] == st[i - 1] + 1);
}

TEST_CASE("preamble block") {
    CVec pre = {9, 8, 7};
    CVec data = {1, 2, 3, 4};
    auto out = run_one(std::make_unique<PreambleAdder>(pre, 2), to_stream(data));
    CHECK(payloads(out) == CVec{9, 8, 7, 1, 2, 3, 4, 0, 0});
    CHECK(out.back().last);
    for (size_t i = 0; i + 1 < out.size(); ++i) CHECK_FALSE(out[i].last);
}

TEST_CASE("scrambler with gaps in valid") {
    const Bits& seq = default_scrambler_sequence();
    std::mt19937_64 rng(5);
    Bits frames;
    for (int i = 0; i < 48; ++i) frames.push_back(uint8_t(rng() & 1));
    std::vector<StreamSample> in;
    for (size_t i = 0; i < frames.size(); ++i) {
        in.push_back(StreamSample::data(double(frames[i])));
        if (i % 3 == 0) in.push_back(StreamSample::idle());
    }
    in.push_back(StreamSample::end());
    Bits out = payload_bits(run_one(std::make_unique<StreamScrambler>(seq), in));
    Bits ref = scramble(Bits(frames.begin(), frames.begin() + 24), seq);
    Bits ref2 = scramble(Bits(frames.begin() + 24, frames.end()), seq);
    ref.insert(ref.end(), ref2.begin(), ref2.end());
    CHECK(out == ref);
}

TEST_CASE("reset clears partial state") {
    std::vector<StreamSample> in = {StreamSample::data(5), StreamSample::data(6), StreamSample::reset_pulse()};
    for (double v : {1, 2, 3, 4}) in.push_back(StreamSample::data(v));
    in.back().last = true;
    CHECK(payloads(run_one(std::make_unique<CpAdder>(4, 1), in)) == CVec{4, 1, 2, 3, 4});
}

TEST_CASE("fire block and pipeline trace") {
    Pipeline p;
    p.add(std::make_unique<FireBlock>("fft", 64, [](const CVec& x, int) { return fft64(x); }));
    p.add(std::make_unique<CpAdder>());
    std::ostringstream tr;
    p.set_trace(&tr);
    std::mt19937_64 rng(6);
    CVec x = random_cvec(rng, 128, 1.0, signal_format(32));
    CVec ref;
    for (int s = 0; s < 2; ++s) {
        CVec c = add_cp(fft64(CVec(x.begin() + 64 * s, x.begin() + 64 * (s + 1))));
        ref.insert(ref.end(), c.begin(), c.end());
    }
    CHECK(payloads(p.run(to_stream(x))) == ref);
    CHECK(tr.str().find("fft") != std::string::npos);
    CHECK(tr.str().find("cp_adder") != std::string::npos);
    CHECK(p.block(0).latency() == 63);
}
