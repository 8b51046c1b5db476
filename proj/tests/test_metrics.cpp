#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ldacs/metrics.hpp"

using namespace ldacs;

namespace {

constexpr double kFs = 1e6;

CVec white(size_t n, double power, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0, std::sqrt(power / 2));
    CVec x(n);
    for (auto& v : x) v = {N(rng), N(rng)};
    return x;
}

Spectrum flat_spectrum(double level_db, int n = 256) {
    Spectrum s;
    s.resolution = kFs / n;
    for (int i = 0; i < n; ++i) {
        s.freqs.push_back((i - n / 2) * s.resolution);
        s.power_db.push_back(level_db);
    }
    return s;
}

}  // namespace

TEST_CASE("tone lands in its bin") {
    CVec x(8192);
    const double f = 64 * kFs / 256;  // bin centre
    for (size_t i = 0; i < x.size(); ++i) x[i] = std::polar(1.0, 2 * M_PI * f * double(i) / kFs);
    Spectrum s = psd_welch(x, kFs);
    REQUIRE(s.freqs.size() == 256);
    CHECK(s.resolution == kFs / 256);
    CHECK(s.segments == 63);
    size_t best = 0;
    for (size_t i = 0; i < s.power_db.size(); ++i)
        if (s.power_db[i] > s.power_db[best]) best = i;
    CHECK(s.freqs[best] == f);
    CHECK(integrated_power(s) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("white noise is flat and scales") {
    CVec x = white(1 << 18, 2.0, 1);
    Spectrum s = psd_welch(x, kFs);
    const double expect = 10 * std::log10(2.0 / kFs);
    double lo = 1e9, hi = -1e9;
    for (double p : s.power_db) lo = std::min(lo, p), hi = std::max(hi, p);
    CHECK(lo > expect - 1.0);
    CHECK(hi < expect + 1.0);
    CHECK(integrated_power(s) == doctest::Approx(2.0).epsilon(0.01));
    CVec y = x;
    for (auto& v : y) v *= std::sqrt(10.0);
    Spectrum t = psd_welch(y, kFs);
    for (size_t i = 0; i < s.power_db.size(); ++i) CHECK(t.power_db[i] - s.power_db[i] == doctest::Approx(10.0));
    // pooled records: same estimate as one long record cut at segment boundaries
    std::vector<CVec> recs = {CVec(x.begin(), x.begin() + 4096), CVec(x.begin() + 4096, x.begin() + 8192)};
    Spectrum pooled = psd_welch(recs, kFs);
    CHECK(pooled.segments == 2 * 31);
    CHECK_THROWS_AS(psd_welch(CVec(100), kFs), ContractViolation);
}

TEST_CASE("out-of-band attenuation") {
    Spectrum s = flat_spectrum(-60);
    const Band in{-200e3, 200e3};
    const std::vector<Band> oob = {{-500e3, -300e3}, {300e3, 500e3}};
    CHECK(oob_attenuation(s, in, oob) == doctest::Approx(0.0));
    for (size_t i = 0; i < s.freqs.size(); ++i)
        if (std::fabs(s.freqs[i]) >= 300e3) s.power_db[i] = -120;
    CHECK(oob_attenuation(s, in, oob) == doctest::Approx(60.0));
    CHECK(mean_density_db(s, {in}) == doctest::Approx(-60.0));
    CHECK(peak_density_db(s, oob) == doctest::Approx(-120.0));
    CHECK_THROWS(oob_attenuation(s, in, Band{-250e3, 250e3}));
    auto r = oob_regions(kFs, 0.87, kFs / 256);
    REQUIRE(r.size() == 2);
    CHECK(r[1].lo == doctest::Approx(0.87 * kFs / 2 + 2 * kFs / 256));
    CHECK(r[0].hi == -r[1].lo);
    CHECK(inband_region(732e3).hi == 366e3);
}

TEST_CASE("bit error rate") {
    Bits tx(864, 0), rx(864, 0);
    rx[100] = 1;
    BerRecord r = ber(tx, rx);
    CHECK(r.bits_error == 1);
    CHECK(r.ber == doctest::Approx(1.0 / 864));
    CHECK(r.ci_low < r.ber);
    CHECK(r.ci_high > r.ber);
    CHECK(ber(rx, tx).bits_error == 1);
    Bits inv(864, 1);
    CHECK(ber(tx, inv).ber == 1.0);
    CHECK(ber(tx, tx).ber == 0.0);
    CHECK_THROWS_AS(ber(tx, Bits(863)), ContractViolation);
    BerRecord acc;
    accumulate(acc, r);
    accumulate(acc, ber(tx, tx));
    CHECK(acc.bits_total == 1728);
    CHECK(acc.bits_error == 1);
}

TEST_CASE("Wilson interval") {
    Interval z = wilson_interval(0, 1000);
    CHECK(z.low < 1e-15);
    CHECK(z.high == doctest::Approx(0.00383).epsilon(0.01));
    Interval h = wilson_interval(50, 100);
    CHECK(h.low == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(h.high == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("CSV writers") {
    std::ostringstream os;
    BerRecord r = ber(Bits(10, 0), Bits(10, 0));
    r.kind = "OFDM";
    r.word_length = 16;
    write_ber_csv(os, {r});
    CHECK(os.str().rfind("kind,word_length,channel,snr_db,dme,variant,bits_total,bits_error,ber,ci_low,ci_high\n", 0) == 0);
    std::ostringstream ps;
    write_psd_csv(ps, {{"OFDM", 16, 16, 732e3, flat_spectrum(-60, 4)}});
    std::string s = ps.str();
    CHECK(s.rfind("kind,word_length,shaping_word_length,bandwidth_hz,freq_hz,power_db\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}
