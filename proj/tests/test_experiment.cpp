#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ldacs/experiment.hpp"
#include "ldacs/rng.hpp"

using namespace ldacs;

namespace {

std::string csv_of(const ResultSet& r) {
    std::ostringstream os;
    write_ber_csv(os, r.ber);
    write_psd_csv(os, r.psd);
    write_oob_csv(os, r.oob);
    return os.str();
}

}  // namespace

TEST_CASE("seed derivation is stable") {
    CHECK(derive_seed({1, 2, 3}) == derive_seed({1, 2, 3}));
    CHECK(derive_seed({1, 2, 3}) != derive_seed({1, 3, 2}));
    CHECK(derive_seed({0}) != derive_seed({0, 0}));
}

TEST_CASE("noise-free link is error free") {
    for (auto kind : {WaveformKind::OFDM, WaveformKind::WOLA, WaveformKind::FOFDM}) {
        LinkSetup s;
        s.waveform.kind = kind;
        s.waveform.word_length = 16;
        Link link(s);
        auto frames = stimulus_frames(5);
        BerRecord r = link.run_burst(frames, 9);
        CHECK(r.bits_total == 864);
        CHECK(r.bits_error == 0);
        CHECK(link.tx_scale() > 0);
        CVec y = link.received(frames, 9);
        // unit mean power over preamble and data
        CVec head(y.begin(), y.begin() + kPreambleLength + s.waveform.data_length());
        CHECK(mean_power(head) == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("impaired link is deterministic and the noise hurts") {
    LinkSetup s;
    s.waveform.word_length = 16;
    s.channel = "APT";
    s.snr_db = 0;
    s.dme = true;
    s.dme_cfg.reference_amplitude = 5;
    s.dme_cfg.offsets_hz = {-500e3, 500e3};
    s.phase_noise_std = 1e-3;
    Link a(s), b(s);
    auto frames = stimulus_frames(6);
    BerRecord ra = a.run_burst(frames, 42), rb = b.run_burst(frames, 42);
    CHECK(ra.bits_error == rb.bits_error);
    CHECK(ra.bits_error > 0);
}

TEST_CASE("experiment grid, determinism across worker counts") {
    ExperimentPlan p = parse_config(
        "[experiment]\nmode = both\nsnr_db = 5, inf\nbursts_per_point = 28\npsd_bursts = 2\nseed = 77\n"
        "[waveform]\nkind = OFDM, FOFDM\nshaping_word_length = 16\n[channel]\nprofile = APT\n");
    std::ostringstream l1, l3;
    ResultSet r1 = run_experiment(p, 1, &l1);
    ResultSet r3 = run_experiment(p, 3, &l3);
    CHECK(r1.ber.size() == 4);
    CHECK(r1.psd.size() == 2);
    CHECK(r1.oob.size() == 2);
    CHECK(r1.errors.empty());
    CHECK(csv_of(r1) == csv_of(r3));
    CHECK(l1.str() == l3.str());
    // no equalizer past common-phase correction, so APT fading leaves errors even without noise
    for (size_t i = 0; i < r1.ber.size(); i += 2) {
        CHECK(r1.ber[i].bits_total == 28 * 864);
        CHECK(r1.ber[i].snr_db == 5);
        CHECK(r1.ber[i + 1].bits_error <= r1.ber[i].bits_error);
    }
    CHECK(r1.oob[1].oob_atten_db > r1.oob[0].oob_atten_db);
    CHECK(manifest_json(p, r1).find("\"seed\": 77") != std::string::npos);
}

TEST_CASE("inapplicable variant points are reported") {
    ExperimentPlan p = parse_config(
        "[experiment]\nvariant = V2\nsnr_db = inf\n[waveform]\nkind = OFDM, FOFDM\n");
    ResultSet r = run_experiment(p, 2);
    REQUIRE(r.ber.size() == 1);
    CHECK(r.ber[0].kind == "FOFDM");
    CHECK(r.ber[0].variant == "V2");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].index == 0);
}
