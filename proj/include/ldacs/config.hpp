#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldacs/channel.hpp"
#include "ldacs/partition.hpp"
#include "ldacs/waveforms.hpp"

namespace ldacs {

struct ConfigError : std::runtime_error {
    int line, column;
    ConfigError(const std::string& msg, int line = 0, int column = 0);
};

enum class RunMode { BER, PSD, Both };

struct ExperimentPlan {
    RunMode mode = RunMode::BER;
    std::vector<WaveformKind> kinds;
    std::vector<int> word_lengths;
    std::vector<int> shaping_word_lengths;  // PSD sweep; 0 follows the chain word length
    std::vector<std::string> channels;
    std::vector<double> snr_db;
    bool dme = false;
    Variant variant = Variant::V1;
    int bursts_per_point = 28;
    int psd_bursts = 56;
    uint64_t seed = 1;

    WaveformConfig waveform;  // template; kind and word lengths come from the sweep lists
    DmeConfig dme_cfg;
    double last_tap_db = -20;
    double phase_noise_std = 1e-3;
    double afe_gain = 1.0;

    // One line per key: "section.key = value (default)" or "(line N)".
    std::vector<std::string> provenance;
    std::string source_text;

    int frames_per_point() const { return bursts_per_point * waveform.frames_per_burst; }
    bool wants_ber() const { return mode != RunMode::PSD; }
    bool wants_psd() const { return mode != RunMode::BER; }
};

std::string to_string(RunMode m);

// Strict INI-style parser; see README for the grammar. Relative file paths resolve
// against base_dir. Throws ConfigError.
ExperimentPlan parse_config(const std::string& text, const std::string& base_dir = "");
ExperimentPlan load_config(const std::string& path);
// Throws ConfigError for an inconsistent plan.
void validate(const ExperimentPlan& p);

// [filter] section only, for design-filter.
FilterSpec parse_filter_spec(const std::string& text);

// "0:5:30" ranges, comma lists, and "inf".
std::vector<double> parse_number_list(const std::string& s);

}  // namespace ldacs
