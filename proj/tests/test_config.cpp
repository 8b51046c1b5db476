#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ldacs/config.hpp"

using namespace ldacs;

namespace {

ConfigError error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("config was accepted: " << text);
    return ConfigError("unreachable");
}

}  // namespace

TEST_CASE("minimal config takes documented defaults") {
    ExperimentPlan p = parse_config("[waveform]\nkind = OFDM\n");
    CHECK(p.mode == RunMode::BER);
    CHECK(p.kinds == std::vector<WaveformKind>{WaveformKind::OFDM});
    CHECK(p.word_lengths == std::vector<int>{16});
    CHECK(p.channels == std::vector<std::string>{"none"});
    CHECK(p.snr_db == std::vector<double>{0, 5, 10, 15, 20, 25, 30});
    CHECK(p.bursts_per_point == 28);
    CHECK(p.frames_per_point() == 1008);
    CHECK(p.seed == 1);
    CHECK(p.variant == Variant::V1);
    CHECK_FALSE(p.dme);
    CHECK(p.dme_cfg.offsets_hz == std::vector<double>{-500e3, 500e3});
    CHECK(p.dme_cfg.reference_amplitude == 5);
    CHECK(p.waveform.bandwidth_hz == 732e3);
    CHECK(p.waveform.filter_spec.order == 150);
    bool saw_kind = false, saw_default = false;
    for (const auto& l : p.provenance) {
        saw_kind = saw_kind || l == "waveform.kind = OFDM (line 2)";
        saw_default = saw_default || l == "experiment.seed = 1 (default)";
    }
    CHECK(saw_kind);
    CHECK(saw_default);
}

TEST_CASE("lists, ranges and comments") {
    ExperimentPlan p = parse_config(
        "# sweep\n[experiment]\nmode = both ; trailing\nsnr_db = 0:10:20, inf\nseed = 0x10\n"
        "[waveform]\nkind = OFDM, WOLA, FOFDM\nword_length = 8, 32\n"
        "[channel]\nprofile = APT, ENR\n[dme]\nenabled = on\noffsets_khz = 0\n");
    CHECK(p.mode == RunMode::Both);
    CHECK(p.snr_db.size() == 4);
    CHECK(std::isinf(p.snr_db.back()));
    CHECK(p.seed == 16);
    CHECK(p.kinds.size() == 3);
    CHECK(p.word_lengths == std::vector<int>{8, 32});
    CHECK(p.channels == std::vector<std::string>{"APT", "ENR"});
    CHECK(p.dme);
    CHECK(p.dme_cfg.offsets_hz == std::vector<double>{0.0});
    CHECK(parse_number_list("1:0.5:2") == std::vector<double>{1, 1.5, 2});
    CHECK_THROWS(parse_number_list("3:1:1"));
}

TEST_CASE("misspelled section is rejected with its position") {
    ConfigError e = error_of("[wndow]\nkind = OFDM\n");
    CHECK(e.line == 1);
    CHECK(e.column == 2);
    CHECK(std::string(e.what()).find("wndow") != std::string::npos);
}

TEST_CASE("bad values point at the value") {
    ConfigError e = error_of("[waveform]\nword_length = 24\n");
    CHECK(e.line == 2);
    CHECK(e.column == 15);
    CHECK(std::string(e.what()).find("24") != std::string::npos);

    e = error_of("[waveform]\n  colour = red\n");
    CHECK(e.line == 2);
    CHECK(e.column == 3);

    e = error_of("[dme]\nenabled = on\nenabled = off\n");
    CHECK(e.line == 3);

    e = error_of("kind = OFDM\n");
    CHECK(e.line == 1);

    e = error_of("[channel]\nprofile = LOS\n");
    CHECK(e.line == 2);

    e = error_of("[experiment]\nvariant = V12\n");
    CHECK(e.line == 2);
}

TEST_CASE("plan-level validation") {
    // 27 bursts of 36 frames is below the 1000-frame floor
    CHECK_THROWS_AS(parse_config("[experiment]\nbursts_per_point = 27\n"), ConfigError);
    CHECK_NOTHROW(parse_config("[experiment]\nmode = psd\nbursts_per_point = 1\n"));
    CHECK_THROWS_AS(parse_config("[experiment]\nvariant = V2\n[waveform]\nkind = OFDM, WOLA\n"), ConfigError);
    CHECK_NOTHROW(parse_config("[experiment]\nvariant = V2\n[waveform]\nkind = OFDM, FOFDM\n"));
    CHECK_THROWS_AS(parse_config("[afe]\ngain = 0\n"), ConfigError);
}

TEST_CASE("filter spec files") {
    FilterSpec s = parse_filter_spec("[filter]\norder = 100\ncutoff = 0.8\n");
    CHECK(s.order == 100);
    CHECK(s.cutoff == 0.8);
    CHECK(s.transition == 0.02);
    CHECK_THROWS_AS(parse_filter_spec("[waveform]\nkind = OFDM\n"), ConfigError);
    CHECK_THROWS_AS(parse_filter_spec("[filter]\norder = 151\n"), ConfigError);
}

TEST_CASE("file references resolve against the config directory") {
    const auto dir = std::filesystem::temp_directory_path() / "ldacs_cfg_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "pilots.txt") << "1 30 34\n";
    std::ofstream(dir / "exp.ini") << "[waveform]\npilot_file = pilots.txt\n";
    ExperimentPlan p = load_config((dir / "exp.ini").string());
    REQUIRE(p.waveform.patterns.count(1));
    CHECK(p.waveform.patterns.at(1).pos == std::vector<int>{30, 34});
    std::ofstream(dir / "bad.ini") << "[waveform]\npilot_file = missing.txt\n";
    CHECK_THROWS_AS(load_config((dir / "bad.ini").string()), ConfigError);
    CHECK_THROWS_AS(load_config((dir / "nope.ini").string()), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("format strings and coding tables") {
    ExperimentPlan p = parse_config("[waveform]\nword_length = Q1.14/16, 32\nshaping_word_length = Q1.6/8\n");
    CHECK(p.word_lengths == std::vector<int>{16, 32});
    CHECK(p.shaping_word_lengths == std::vector<int>{8});
    CHECK_THROWS_AS(parse_config("[waveform]\nword_length = Q0.15/16\n"), ConfigError);

    std::string perm;
    for (int k = 47; k >= 0; --k) perm += std::to_string(k) + (k ? ", " : "");
    p = parse_config("[coding]\ninterleaver = " + perm + "\nscrambler_sequence = 101010101010101010101010\n");
    REQUIRE(p.waveform.interleaver.size() == 48);
    CHECK(p.waveform.interleaver[0] == 47);
    CHECK(p.waveform.scrambler_seq.size() == 24);
    CHECK(p.waveform.scrambler_seq[0] == 1);
    CHECK_THROWS_AS(parse_config("[coding]\ninterleaver = 0, 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[coding]\nscrambler_sequence = 1012\n"), ConfigError);
}
