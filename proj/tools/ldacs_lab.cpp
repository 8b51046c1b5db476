// ldacs_lab: experiment runner for the LDACS transceiver models.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ldacs/config.hpp"
#include "ldacs/experiment.hpp"
#include "ldacs/filter_design.hpp"
#include "ldacs/rng.hpp"

using namespace ldacs;

namespace {

struct Common {
    long long seed = -1;
    std::string out_dir = "out";
    int workers = 1;
    bool trace = false;
    bool iq = false;
};

void add_common(CLI::App* c, Common& o) {
    c->add_option("--seed", o.seed, "Master seed (overrides [experiment] seed)");
    c->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
    c->add_option("--workers", o.workers, "Worker threads, 0 = all cores")->capture_default_str();
    c->add_flag("--trace", o.trace, "Dump a per-step stream trace of the first burst to trace.csv");
}

void add_iq(CLI::App* c, Common& o) {
    c->add_flag("--iq", o.iq, "Write the first noise-free burst per kind and word length as raw I/Q (tx_<KIND>_WL<n>.iq)");
}

void write_iq(const ExperimentPlan& p, const Common& o) {
    std::filesystem::create_directories(o.out_dir);
    for (auto k : p.kinds)
        for (int wl : p.word_lengths) {
            WaveformConfig w = p.waveform;
            w.kind = k;
            w.word_length = wl;
            const CVec x = tx_chain(w, stimulus_frames(derive_seed({p.seed, 0x5717, 0})));
            const auto name = "tx_" + to_string(k) + "_WL" + std::to_string(wl) + ".iq";
            write_iq_file((std::filesystem::path(o.out_dir) / name).string(), x, w.shaping_fmt());
        }
}

ExperimentPlan load(const std::string& path, const Common& o) {
    ExperimentPlan p = load_config(path);
    if (o.seed >= 0) {
        p.seed = uint64_t(o.seed);
        p.provenance.push_back("experiment.seed = " + std::to_string(o.seed) + " (command line)");
    }
    return p;
}

LinkSetup first_link(const ExperimentPlan& p, WaveformKind k, Variant v) {
    LinkSetup s;
    s.waveform = p.waveform;
    s.waveform.kind = k;
    s.waveform.word_length = p.word_lengths.front();
    s.variant = v;
    s.channel = p.channels.front();
    s.snr_db = p.snr_db.front();
    s.dme = p.dme;
    s.dme_cfg = p.dme_cfg;
    s.last_tap_db = p.last_tap_db;
    s.phase_noise_std = p.phase_noise_std;
    s.afe_gain = p.afe_gain;
    return s;
}

void write_trace(const ExperimentPlan& p, const Common& o) {
    for (auto k : p.kinds) {
        if (!variant_applies(p.variant, k)) continue;
        std::filesystem::create_directories(o.out_dir);
        std::ofstream f(std::filesystem::path(o.out_dir) / "trace.csv");
        f << "step,block,valid,payload\n";
        Link link(first_link(p, k, p.variant));
        link.chain().set_trace(&f);
        link.decode(stimulus_frames(derive_seed({p.seed, 0x5717, 0})), derive_seed({p.seed, 0, 0, 0}));
        return;
    }
}

int cmd_run(const std::string& cfg, const Common& o, bool psd_only) {
    ExperimentPlan p = load(cfg, o);
    if (psd_only) p.mode = RunMode::PSD;
    std::ostringstream log;
    ResultSet r = run_experiment(p, o.workers, &log);
    write_outputs(o.out_dir, p, r, log.str());
    if (o.trace) write_trace(p, o);
    if (o.iq) write_iq(p, o);
    std::cout << log.str();
    for (const auto& e : r.errors) std::cerr << "point " << e.index << ": " << e.what << '\n';
    std::cout << "wrote " << o.out_dir << '\n';
    return 0;
}

int cmd_design(const std::string& spec_path, const Common& o) {
    std::ifstream f(spec_path);
    if (!f) throw ConfigError("cannot open filter spec '" + spec_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    FilterSpec spec = parse_filter_spec(ss.str());
    FilterDesign d = design_lowpass_pm(spec);
    std::filesystem::create_directories(o.out_dir);
    std::ofstream(std::filesystem::path(o.out_dir) / "filter_coeffs.txt") << format_coeff_file(d.coeffs);
    std::ostringstream rep;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "order %d cutoff %.4f transition %.4f\nconverged %s after %d iterations\n"
                  "delta %.6g  passband ripple %.3f dB  stopband attenuation %.2f dB\nalternations %d\n",
                  spec.order, spec.cutoff, spec.transition, d.converged ? "yes" : "no", d.iterations, d.delta,
                  d.passband_ripple_db, d.stopband_atten_db, count_alternations(d.coeffs, spec));
    rep << buf;
    for (int wl : {8, 16, 32}) {
        auto q = quantize_coeffs(d.coeffs, coeff_format(wl), spec.stop_edge());
        std::snprintf(buf, sizeof buf, "%-10s stopband %.2f dB (loss %.2f dB), max coefficient error %.3g\n",
                      q.fmt.str().c_str(), q.stopband_atten_db, q.atten_loss_db, q.max_error);
        rep << buf;
    }
    std::ofstream(std::filesystem::path(o.out_dir) / "filter_report.txt") << rep.str();
    std::ofstream resp(std::filesystem::path(o.out_dir) / "filter_response.csv");
    resp << "freq_nyquist,reference_db,wl8_db,wl16_db,wl32_db\n";
    std::vector<std::vector<double>> q;
    for (int wl : {8, 16, 32}) q.push_back(quantize_coeffs(d.coeffs, coeff_format(wl)).values);
    for (int i = 0; i <= 1024; ++i) {
        const double f = i / 1024.0;
        std::snprintf(buf, sizeof buf, "%.6f,%.4f,%.4f,%.4f,%.4f\n", f, magnitude_db(d.coeffs, f),
                      magnitude_db(q[0], f), magnitude_db(q[1], f), magnitude_db(q[2], f));
        resp << buf;
    }
    std::cout << rep.str();
    return d.converged ? 0 : 1;
}

int cmd_equivalence(const std::string& vname, const std::string& cfg, const Common& o) {
    const Variant v = parse_variant(vname);
    ExperimentPlan p = load(cfg, o);
    std::filesystem::create_directories(o.out_dir);
    std::ofstream csv(std::filesystem::path(o.out_dir) / "equivalence.csv");
    csv << "variant,kind,bursts,tx_identical,frames_identical,boundary_type,boundary_sizes,expected\n";
    bool all_ok = true, any = false;
    const int expected = boundary_spec(v).count;
    for (auto k : p.kinds) {
        if (!variant_applies(v, k)) {
            std::cout << to_string(v) << ' ' << to_string(k) << ": not applicable\n";
            continue;
        }
        any = true;
        Link ref(first_link(p, k, Variant::V1)), dut(first_link(p, k, v));
        std::ofstream trace;
        if (o.trace) {
            trace.open(std::filesystem::path(o.out_dir) / ("trace_" + to_string(k) + ".csv"));
            trace << "step,block,valid,payload\n";
        }
        bool tx_same = true, rx_same = true;
        for (int b = 0; b < p.bursts_per_point; ++b) {
            auto frames = stimulus_frames(derive_seed({p.seed, 0x5717, uint64_t(b)}));
            const uint64_t s = derive_seed({p.seed, 0, 0, uint64_t(b)});
            tx_same = tx_same && ref.received(frames, s) == dut.received(frames, s);
            if (b == 0 && o.trace) dut.chain().set_trace(&trace);
            rx_same = rx_same && ref.decode(frames, s).frames == dut.decode(frames, s).frames;
            dut.chain().set_trace(nullptr);
        }
        const auto& tb = dut.chain().tx_boundary();
        std::string sizes;
        for (int s : tb.sizes) sizes += (sizes.empty() ? "" : " ") + std::to_string(s);
        const bool size_ok = v == Variant::V1 || (tb.sizes.size() == 1 && tb.sizes[0] == expected);
        const bool ok = tx_same && rx_same && size_ok;
        all_ok = all_ok && ok;
        csv << to_string(v) << ',' << to_string(k) << ',' << p.bursts_per_point << ',' << tx_same << ',' << rx_same
            << ',' << tb.type << ',' << sizes << ',' << expected << '\n';
        std::cout << to_string(v) << ' ' << to_string(k) << ": " << (ok ? "identical" : "MISMATCH")
                  << " (boundary " << tb.type << " x " << (sizes.empty() ? "-" : sizes) << ")\n";
    }
    if (!any) throw ConfigError(to_string(v) + " applies to none of the configured kinds");
    return all_ok ? 0 : 1;
}

// Splits each BER point into detection failures, timing slips and residual bit errors.
int cmd_diagnose(const std::string& cfg, const Common& o) {
    ExperimentPlan p = load(cfg, o);
    std::filesystem::create_directories(o.out_dir);
    std::ofstream csv(std::filesystem::path(o.out_dir) / "diagnose.csv");
    csv << "kind,word_length,channel,snr_db,dme,bursts,detected,timing_slips,ber,ber_detected\n";
    for (auto k : p.kinds) {
        if (!variant_applies(p.variant, k)) continue;
        for (int wl : p.word_lengths)
            for (size_t ci = 0; ci < p.channels.size(); ++ci)
                for (size_t si = 0; si < p.snr_db.size(); ++si) {
                    LinkSetup s = first_link(p, k, p.variant);
                    s.waveform.word_length = wl;
                    s.channel = p.channels[ci];
                    s.snr_db = p.snr_db[si];
                    Link link(s);
                    BerRecord all, det;
                    int found = 0, slips = 0;
                    for (int b = 0; b < p.bursts_per_point; ++b) {
                        auto frames = stimulus_frames(derive_seed({p.seed, 0x5717, uint64_t(b)}));
                        RxResult r = link.decode(frames, derive_seed({p.seed, ci, si, uint64_t(b)}));
                        BerRecord one = ber(flatten(frames), flatten(r.frames));
                        accumulate(all, one);
                        if (!r.detected) continue;
                        ++found;
                        slips += r.data_start != kPreambleLength;
                        accumulate(det, one);
                    }
                    char line[256];
                    std::snprintf(line, sizeof line, "%s,%d,%s,%g,%d,%d,%d,%d,%.6f,%.6f\n", to_string(k).c_str(), wl,
                                  s.channel.c_str(), s.snr_db, int(p.dme), p.bursts_per_point, found, slips, all.ber,
                                  found ? det.ber : NAN);
                    csv << line;
                    std::cout << line;
                }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDACS transceiver lab: CP-OFDM, WOLA-OFDM and FOFDM experiments"};
    app.require_subcommand(1);
    Common o;
    std::string cfg, spec, variant;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", cfg, "Config file")->required();
    add_common(run, o);
    add_iq(run, o);
    auto* psd = app.add_subcommand("psd", "Run only the PSD / out-of-band part of a config");
    psd->add_option("config", cfg, "Config file")->required();
    add_common(psd, o);
    add_iq(psd, o);
    auto* des = app.add_subcommand("design-filter", "Design the FOFDM low-pass from a [filter] spec file");
    des->add_option("spec", spec, "Filter spec file")->required();
    add_common(des, o);
    auto* eq = app.add_subcommand("equivalence", "Check a partition variant against the all-frame-mode chain");
    eq->add_option("variant", variant, "V1..V10")->required();
    eq->add_option("config", cfg, "Config file")->required();
    add_common(eq, o);

    auto* diag = app.add_subcommand("diagnose", "Break BER points into detection failures, timing slips and bit errors");
    diag->add_option("config", cfg, "Config file")->required();
    add_common(diag, o);

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(cfg, o, false);
        if (psd->parsed()) return cmd_run(cfg, o, true);
        if (des->parsed()) return cmd_design(spec, o);
        if (eq->parsed()) return cmd_equivalence(variant, cfg, o);
        if (diag->parsed()) return cmd_diagnose(cfg, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
