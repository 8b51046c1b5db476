#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ldacs/channel.hpp"

using namespace ldacs;

namespace {

constexpr double kFs = 732e3 * 64 / 50;

CVec tone(size_t n, double f, double fs) {
    CVec x(n);
    for (size_t i = 0; i < n; ++i) x[i] = std::polar(1.0, 2 * M_PI * f * double(i) / fs);
    return x;
}

double db(double x) { return 10 * std::log10(x); }

}  // namespace

TEST_CASE("doppler from velocity") {
    CHECK(doppler_freq(kCarrierHz, 200) == 417);
    CHECK(doppler_freq(kCarrierHz, 300) == 625);
    CHECK(doppler_freq(kCarrierHz, 600) == 1250);
    CHECK(doppler_freq_exact(kCarrierHz, 600) == doctest::Approx(1215e6 * 600 * 0.5144 / 3e8));
    CHECK(channel_preset("ENR").doppler_hz == 1250);
    CHECK(channel_preset("APT").velocity_ktas == 200);
    CHECK_THROWS_AS(channel_preset("LOS"), std::invalid_argument);
}

TEST_CASE("tap layout") {
    CHECK(tap_span(15e-6, 1.1e6) == 17);
    ChannelProfile enr = channel_preset("ENR");
    TapLayout l = tap_layout(enr, 1.1e6);
    CHECK(l.delays.front() == 0);
    CHECK(l.delays.back() == 17);
    CHECK(std::accumulate(l.powers.begin(), l.powers.end(), 0.0) == doctest::Approx(1.0));
    CHECK(db(l.powers.back() / l.powers.front()) == doctest::Approx(-20.0));
    for (size_t k = 1; k < l.delays.size(); ++k) CHECK(l.delays[k] > l.delays[k - 1]);
    ChannelProfile flat;
    flat.max_delay_s = 0;
    TapLayout one = tap_layout(flat, kFs);
    CHECK(one.delays == std::vector<int>{0});
    CHECK(one.powers == std::vector<double>{1.0});
}

TEST_CASE("fading preserves mean power and is linear") {
    ChannelProfile p = channel_preset("TMA");
    CVec x = tone(100000, 20e3, kFs);
    double pin = mean_power(x), pout = 0;
    for (uint64_t s = 0; s < 8; ++s) pout += mean_power(apply_channel(x, p, kFs, s)) / 8;
    CHECK(std::fabs(db(pout / pin)) < 0.5);

    CVec a = tone(5000, 10e3, kFs), b = tone(5000, -70e3, kFs), sum(5000);
    for (size_t i = 0; i < sum.size(); ++i) sum[i] = 2.0 * a[i] + b[i];
    CVec ya = apply_channel(a, p, kFs, 11), yb = apply_channel(b, p, kFs, 11), ys = apply_channel(sum, p, kFs, 11);
    double err = 0;
    for (size_t i = 0; i < ys.size(); ++i) err = std::max(err, std::abs(ys[i] - (2.0 * ya[i] + yb[i])));
    CHECK(err < 1e-12);
    CHECK(apply_channel(a, p, kFs, 11) == ya);
    CHECK(apply_channel(a, p, kFs, 12) != ya);
}

TEST_CASE("DME pulse pair shape") {
    DmeConfig cfg;
    const double fs = 10e6;
    const double t0 = 50e-6;
    CVec d = dme_pairs(2000, fs, cfg, {t0});
    const size_t i0 = size_t(std::lround(t0 * fs)), i1 = size_t(std::lround((t0 + 12e-6) * fs));
    CHECK(d[i0].real() == doctest::Approx(cfg.amplitude_scale * cfg.reference_amplitude));
    CHECK(d[i1].real() == doctest::Approx(cfg.amplitude_scale * cfg.reference_amplitude));
    // full width at half amplitude
    const double hw = 2 * std::sqrt(2 * std::log(2.0) / cfg.alpha);
    long above = 0;
    for (long i = long(i0) - 100; i < long(i0) + 100; ++i)
        if (d[size_t(i)].real() >= 0.5 * cfg.amplitude_scale) ++above;
    CHECK(double(above) / fs == doctest::Approx(hw).epsilon(0.05));
    CHECK(std::abs(d[(i0 + i1) / 2]) < 1e-3 * cfg.amplitude_scale);  // two far skirts

    DmeConfig zero = cfg;
    zero.amplitude_scale = 0;
    for (auto v : dme_pairs(2000, fs, zero, {t0})) CHECK(v == cplx{});
    DmeConfig twice = cfg;
    twice.amplitude_scale = 0.4;
    const double e1 = mean_power(d), e2 = mean_power(dme_pairs(2000, fs, twice, {t0}));
    CHECK(e2 / e1 == doctest::Approx(4.0));
}

TEST_CASE("offset DME carrier") {
    DmeConfig cfg;
    CVec d = dme_pairs(4000, kFs, cfg, {200e-6}, 500e3, {0.0});
    // a 500 kHz carrier sits past the anti-alias cutoff (0.9 of the 468 kHz Nyquist);
    // only the lower skirt of the Gaussian spectrum survives, roughly 15% of the energy
    CVec base = dme_pairs(4000, kFs, cfg, {200e-6});
    const double kept = mean_power(d) / mean_power(base);
    CHECK(kept > 0.08);
    CHECK(kept < 0.25);
    cfg.offsets_hz = {-500e3, 500e3};
    CHECK(dme_interference(20000, kFs, cfg, 5) == dme_interference(20000, kFs, cfg, 5));
}

TEST_CASE("AWGN level and determinism") {
    CVec x = tone(1000000, 1e3, kFs);
    CVec y = awgn(x, 10, 7);
    CVec n(x.size());
    for (size_t i = 0; i < x.size(); ++i) n[i] = y[i] - x[i];
    CHECK(std::fabs(db(mean_power(x) / mean_power(n)) - 10) < 0.1);
    CHECK(awgn(x, 10, 7) == y);
    CHECK(awgn(x, INFINITY, 7) == x);
    CVec z = awgn(x, 0, 8, 4.0);
    double pn = 0;
    for (size_t i = 0; i < x.size(); ++i) pn += std::norm(z[i] - x[i]);
    CHECK(pn / double(x.size()) == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("AFE impairments") {
    CVec x = tone(1000, 3e3, kFs);
    CHECK(afe_impairments(x, 0, 1, 1) == x);
    CVec g = afe_impairments(x, 0, 2, 1);
    for (size_t i = 0; i < x.size(); ++i) CHECK(g[i] == 2.0 * x[i]);
    CVec p = afe_impairments(x, 1e-3, 1, 3);
    for (size_t i = 0; i < x.size(); ++i) CHECK(std::abs(p[i]) == doctest::Approx(1.0));
    CHECK_THROWS(afe_impairments(x, 0, 0, 1));
}
