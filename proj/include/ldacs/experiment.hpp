#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "ldacs/config.hpp"
#include "ldacs/metrics.hpp"

namespace ldacs {

struct OobRecord {
    std::string kind;
    int word_length = 0;
    int shaping_word_length = 0;
    double bandwidth_hz = 0;
    double inband_db = 0;       // mean in-band density, dB/Hz
    double oob_atten_db = 0;    // in-band mean minus out-of-band peak
    double floor_rel_db = 0;    // out-of-band mean relative to in-band mean
};

struct PointError {
    int index;
    std::string what;
};

struct ResultSet {
    std::vector<BerRecord> ber;
    std::vector<LabelledSpectrum> psd;
    std::vector<OobRecord> oob;
    std::vector<PointError> errors;
};

// One link-level burst trial: tx -> unit-RMS scaling -> channel -> AWGN on the
// unit-power signal -> DME -> AFE -> rescale -> rx. Returns decoded bit errors.
struct LinkSetup {
    WaveformConfig waveform;
    Variant variant = Variant::V1;
    std::string channel = "none";
    double snr_db = INFINITY;
    bool dme = false;
    DmeConfig dme_cfg;
    double last_tap_db = -20;
    double phase_noise_std = 0;
    double afe_gain = 1;
};

class Link {
public:
    explicit Link(const LinkSetup& s);
    // seed drives channel, noise, DME and AFE; the frames are the stimulus
    BerRecord run_burst(const std::vector<Bits>& frames, uint64_t seed);
    RxResult decode(const std::vector<Bits>& frames, uint64_t seed);
    CVec received(const std::vector<Bits>& frames, uint64_t seed);  // samples entering rx
    double tx_scale() const { return g_; }
    PartitionedChain& chain() { return chain_; }

private:
    LinkSetup s_;
    PartitionedChain chain_;
    ChannelProfile profile_;
    double g_ = 1;
};

// Data section of a noise-free burst (preamble and guard excluded).
CVec data_section(const WaveformConfig& cfg, const CVec& burst);

struct PsdPoint {
    WaveformKind kind;
    int word_length;
    int shaping_word_length;
};
// Welch PSD of `bursts` random bursts, plus the out-of-band figures.
std::pair<LabelledSpectrum, OobRecord> measure_psd(const WaveformConfig& base, const PsdPoint& pt, int bursts,
                                                    uint64_t seed);

// Grid points run on `workers` threads (0 = hardware concurrency). Output order
// follows the point index only.
ResultSet run_experiment(const ExperimentPlan& plan, int workers = 1, std::ostream* log = nullptr);

void write_oob_csv(std::ostream& os, const std::vector<OobRecord>& rows);
std::string manifest_json(const ExperimentPlan& plan, const ResultSet& r);
// Writes ber.csv / psd.csv / oob.csv (as requested by the plan), manifest.json and run.log.
void write_outputs(const std::string& dir, const ExperimentPlan& plan, const ResultSet& r, const std::string& log);

extern const char* const kToolVersion;

}  // namespace ldacs
