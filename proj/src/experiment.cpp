#include "ldacs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ldacs/channel.hpp"
#include "ldacs/rng.hpp"

namespace ldacs {

const char* const kToolVersion = "1.0.0";

namespace {

// Seed-stream tags; fixed so that results never depend on scheduling.
constexpr uint64_t kTagStimulus = 0x5717;
constexpr uint64_t kTagPsd = 0x95D;
constexpr uint64_t kTagChannel = 1, kTagNoise = 2, kTagDme = 3, kTagAfe = 4;

double tx_level(const WaveformConfig& cfg) {
    Transceiver t(cfg);
    CVec b = t.tx(stimulus_frames());
    b.resize(size_t(kPreambleLength + cfg.data_length()));
    return 1.0 / std::sqrt(mean_power(b));
}

WaveformConfig rx_config(const LinkSetup& s, double g) {
    WaveformConfig w = s.waveform;
    w.rx_input_gain = 1.0 / (g * s.afe_gain);
    return w;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

Link::Link(const LinkSetup& s)
    : s_(s),
      chain_(s.variant, rx_config(s, tx_level(s.waveform))),
      profile_(channel_preset(s.channel)),
      g_(tx_level(s.waveform)) {}

CVec Link::received(const std::vector<Bits>& frames, uint64_t seed) {
    const double fs = s_.waveform.sample_rate();
    CVec x = chain_.tx(frames);
    for (auto& v : x) v *= g_;
    if (s_.channel != "none") x = apply_channel(x, profile_, fs, derive_seed({seed, kTagChannel}), s_.last_tap_db);
    x = awgn(x, s_.snr_db, derive_seed({seed, kTagNoise}), 1.0);
    if (s_.dme) {
        CVec d = dme_interference(x.size(), fs, s_.dme_cfg, derive_seed({seed, kTagDme}));
        for (size_t i = 0; i < x.size(); ++i) x[i] += d[i];
    }
    return afe_impairments(x, s_.phase_noise_std, s_.afe_gain, derive_seed({seed, kTagAfe}));
}

RxResult Link::decode(const std::vector<Bits>& frames, uint64_t seed) { return chain_.rx(received(frames, seed)); }

BerRecord Link::run_burst(const std::vector<Bits>& frames, uint64_t seed) {
    RxResult r = decode(frames, seed);
    return ber(flatten(frames), flatten(r.frames));
}

CVec data_section(const WaveformConfig& cfg, const CVec& burst) {
    require(burst.size() >= size_t(kPreambleLength + cfg.data_length()), "data_section: burst too short");
    return CVec(burst.begin() + kPreambleLength, burst.begin() + kPreambleLength + cfg.data_length());
}

std::pair<LabelledSpectrum, OobRecord> measure_psd(const WaveformConfig& base, const PsdPoint& pt, int bursts,
                                                    uint64_t seed) {
    WaveformConfig cfg = base;
    cfg.kind = pt.kind;
    cfg.word_length = pt.word_length;
    cfg.shaping_word_length = pt.shaping_word_length;
    Transceiver t(cfg);
    std::vector<CVec> recs;
    for (int b = 0; b < bursts; ++b)
        recs.push_back(data_section(cfg, t.tx(stimulus_frames(derive_seed({seed, kTagPsd, uint64_t(b)})))));
    const double fs = cfg.sample_rate();
    LabelledSpectrum ls{to_string(pt.kind), pt.word_length, cfg.shaping_wl(), cfg.bandwidth_hz, psd_welch(recs, fs)};
    const Band in = inband_region(cfg.bandwidth_hz);
    const auto oob = oob_regions(fs, cfg.filter_spec.stop_edge(), ls.spectrum.resolution);
    OobRecord o;
    o.kind = ls.kind;
    o.word_length = pt.word_length;
    o.shaping_word_length = cfg.shaping_wl();
    o.bandwidth_hz = cfg.bandwidth_hz;
    o.inband_db = mean_density_db(ls.spectrum, {in});
    o.oob_atten_db = oob_attenuation(ls.spectrum, in, oob);
    o.floor_rel_db = mean_density_db(ls.spectrum, oob) - o.inband_db;
    return {ls, o};
}

ResultSet run_experiment(const ExperimentPlan& plan, int workers, std::ostream* log) {
    struct Task {
        std::function<void(std::string&)> fn;
        std::string log;
    };
    ResultSet rs;
    std::vector<Task> tasks;
    std::mutex err_mu;
    std::vector<std::pair<size_t, std::string>> errs;

    if (plan.wants_ber()) {
        // CRN: every kind and word length sees the same stimulus and impairment draws
        for (auto kind : plan.kinds)
            for (int wl : plan.word_lengths)
                for (size_t ci = 0; ci < plan.channels.size(); ++ci)
                    for (size_t si = 0; si < plan.snr_db.size(); ++si) {
                        const size_t slot = rs.ber.size();
                        BerRecord rec;
                        rec.kind = to_string(kind);
                        rec.word_length = wl;
                        rec.channel = plan.channels[ci];
                        rec.snr_db = plan.snr_db[si];
                        rec.dme = plan.dme;
                        rec.variant = to_string(plan.variant);
                        rs.ber.push_back(rec);
                        const size_t idx = tasks.size();
                        tasks.push_back({[&, kind, wl, ci, si, slot, idx](std::string& out) {
                            if (!variant_applies(plan.variant, kind)) {
                                std::lock_guard<std::mutex> lk(err_mu);
                                errs.push_back({idx, to_string(plan.variant) + " does not apply to " + to_string(kind)});
                                out = "point " + std::to_string(idx) + ": skipped (" + to_string(plan.variant) +
                                      " not applicable to " + to_string(kind) + ")\n";
                                return;
                            }
                            LinkSetup s;
                            s.waveform = plan.waveform;
                            s.waveform.kind = kind;
                            s.waveform.word_length = wl;
                            s.variant = plan.variant;
                            s.channel = plan.channels[ci];
                            s.snr_db = plan.snr_db[si];
                            s.dme = plan.dme;
                            s.dme_cfg = plan.dme_cfg;
                            s.last_tap_db = plan.last_tap_db;
                            s.phase_noise_std = plan.phase_noise_std;
                            s.afe_gain = plan.afe_gain;
                            Link link(s);
                            BerRecord& r = rs.ber[slot];
                            for (int b = 0; b < plan.bursts_per_point; ++b) {
                                auto frames = stimulus_frames(derive_seed({plan.seed, kTagStimulus, uint64_t(b)}));
                                accumulate(r, link.run_burst(frames, derive_seed({plan.seed, ci, si, uint64_t(b)})));
                            }
                            out = "point " + std::to_string(idx) + ": ber " + r.kind + " WL" + std::to_string(wl) +
                                  " " + r.channel + " snr " + fmt("%g", r.snr_db) + " dB -> " +
                                  std::to_string(r.bits_error) + "/" + std::to_string(r.bits_total) + "\n";
                        }, {}});
                    }
    }
    if (plan.wants_psd()) {
        std::vector<int> swl = plan.shaping_word_lengths.empty() ? std::vector<int>{0} : plan.shaping_word_lengths;
        for (auto kind : plan.kinds)
            for (int wl : plan.word_lengths)
                for (int sw : swl) {
                    const size_t slot = rs.psd.size();
                    rs.psd.emplace_back();
                    rs.oob.emplace_back();
                    const size_t idx = tasks.size();
                    tasks.push_back({[&, kind, wl, sw, slot, idx](std::string& out) {
                        auto [ls, o] = measure_psd(plan.waveform, {kind, wl, sw}, plan.psd_bursts, plan.seed);
                        rs.psd[slot] = std::move(ls);
                        rs.oob[slot] = o;
                        out = "point " + std::to_string(idx) + ": psd " + o.kind + " WL" + std::to_string(wl) +
                              " shaping WL" + std::to_string(o.shaping_word_length) + " -> oob " +
                              fmt("%.2f", o.oob_atten_db) + " dB, floor " + fmt("%.2f", o.floor_rel_db) + " dB\n";
                    }, {}});
                }
    }

    unsigned n = workers > 0 ? unsigned(workers) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, std::max<size_t>(1, tasks.size()));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < tasks.size();) {
            try {
                tasks[i].fn(tasks[i].log);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                errs.push_back({i, e.what()});
                tasks[i].log = "point " + std::to_string(i) + ": error: " + e.what() + "\n";
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(errs.begin(), errs.end());
    for (auto& [i, w] : errs) rs.errors.push_back({int(i), w});
    if (log)
        for (const auto& t : tasks) *log << t.log;

    // skipped BER points are dropped from the table but stay in the error list
    std::vector<BerRecord> kept;
    for (auto& r : rs.ber)
        if (r.bits_total > 0) kept.push_back(r);
    rs.ber = std::move(kept);
    return rs;
}

void write_oob_csv(std::ostream& os, const std::vector<OobRecord>& rows) {
    os << "kind,word_length,shaping_word_length,bandwidth_hz,inband_db,oob_atten_db,floor_rel_db\n";
    for (const auto& r : rows)
        os << r.kind << ',' << r.word_length << ',' << r.shaping_word_length << ',' << fmt("%.0f", r.bandwidth_hz)
           << ',' << fmt("%.4f", r.inband_db) << ',' << fmt("%.4f", r.oob_atten_db) << ','
           << fmt("%.4f", r.floor_rel_db) << '\n';
}

std::string manifest_json(const ExperimentPlan& plan, const ResultSet& r) {
    nlohmann::ordered_json j;
    j["tool"] = "ldacs_lab";
    j["version"] = kToolVersion;
    j["seed"] = plan.seed;
    j["mode"] = to_string(plan.mode);
    j["variant"] = to_string(plan.variant);
    j["resolved"] = plan.provenance;
    j["config"] = plan.source_text;
    j["ber_points"] = r.ber.size();
    j["psd_points"] = r.psd.size();
    nlohmann::ordered_json errs = nlohmann::ordered_json::array();
    for (const auto& e : r.errors) errs.push_back({{"point", e.index}, {"error", e.what}});
    j["errors"] = errs;
    return j.dump(2) + "\n";
}

void write_outputs(const std::string& dir, const ExperimentPlan& plan, const ResultSet& r, const std::string& log) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error(std::string("cannot write ") + name);
        return f;
    };
    if (plan.wants_ber()) {
        auto f = open("ber.csv");
        write_ber_csv(f, r.ber);
    }
    if (plan.wants_psd()) {
        auto f = open("psd.csv");
        write_psd_csv(f, r.psd);
        auto g = open("oob.csv");
        write_oob_csv(g, r.oob);
    }
    {
        auto f = open("manifest.json");
        f << manifest_json(plan, r);
    }
    auto f = open("run.log");
    for (const auto& p : plan.provenance) f << p << '\n';
    f << log;
}

}  // namespace ldacs
