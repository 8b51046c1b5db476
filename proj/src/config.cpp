#include "ldacs/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ldacs {

ConfigError::ConfigError(const std::string& msg, int l, int c)
    : std::runtime_error(l ? "line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg : msg),
      line(l),
      column(c) {}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::BER: return "ber";
        case RunMode::PSD: return "psd";
        default: return "both";
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s) {
    std::string t = trim(s);
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    if (lower == "inf" || lower == "+inf") return INFINITY;
    if (lower == "-inf") return -INFINITY;
    size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing characters");
    return v;
}

long to_long(const std::string& s) {
    std::string t = trim(s);
    size_t used = 0;
    long v = std::stol(t, &used, 0);
    if (used != t.size()) throw std::invalid_argument("trailing characters");
    return v;
}

bool to_bool(const std::string& s) {
    std::string t = trim(s);
    std::transform(t.begin(), t.end(), t.begin(), ::tolower);
    if (t == "on" || t == "true" || t == "yes" || t == "1") return true;
    if (t == "off" || t == "false" || t == "no" || t == "0") return false;
    throw std::invalid_argument("expected on/off");
}

// "16" or the signal format string "Q1.14/16"
int word_length_of(const std::string& s) {
    const std::string t = trim(s);
    if (!t.empty() && (t[0] == 'Q' || t[0] == 'q')) {
        const FxFormat f = parse_format(t);
        if (f != signal_format(f.word_length))
            throw std::invalid_argument(t + " is not a signal format (fraction bits must be word length - 2)");
        return f.word_length;
    }
    long v = to_long(s);
    if (!valid_word_length(int(v))) throw std::invalid_argument("word length " + trim(s) + " not in {8, 16, 32}");
    return int(v);
}

struct Ctx {
    ExperimentPlan& p;
    std::string base;
    std::string path(const std::string& v) const {
        std::filesystem::path f(trim(v));
        return (f.is_absolute() || base.empty()) ? f.string() : (std::filesystem::path(base) / f).string();
    }
};

using Setter = std::function<void(Ctx&, const std::string&)>;

struct Key {
    const char* section;
    const char* name;
    const char* def;
    Setter set;
};

const std::vector<Key>& keys() {
    static const std::vector<Key> k = {
        {"experiment", "mode", "ber",
         [](Ctx& c, const std::string& v) {
             std::string t = trim(v);
             if (t == "ber") c.p.mode = RunMode::BER;
             else if (t == "psd") c.p.mode = RunMode::PSD;
             else if (t == "both") c.p.mode = RunMode::Both;
             else throw std::invalid_argument("mode must be ber, psd or both");
         }},
        {"experiment", "seed", "1", [](Ctx& c, const std::string& v) { c.p.seed = uint64_t(to_long(v)); }},
        {"experiment", "variant", "V1", [](Ctx& c, const std::string& v) { c.p.variant = parse_variant(trim(v)); }},
        {"experiment", "bursts_per_point", "28",
         [](Ctx& c, const std::string& v) { c.p.bursts_per_point = int(to_long(v)); }},
        {"experiment", "psd_bursts", "56", [](Ctx& c, const std::string& v) { c.p.psd_bursts = int(to_long(v)); }},
        {"experiment", "snr_db", "0:5:30", [](Ctx& c, const std::string& v) { c.p.snr_db = parse_number_list(v); }},
        {"waveform", "kind", "OFDM",
         [](Ctx& c, const std::string& v) {
             c.p.kinds.clear();
             for (const auto& s : split_list(v)) c.p.kinds.push_back(parse_kind(s));
             if (c.p.kinds.empty()) throw std::invalid_argument("empty kind list");
         }},
        {"waveform", "word_length", "16",
         [](Ctx& c, const std::string& v) {
             c.p.word_lengths.clear();
             for (const auto& s : split_list(v)) c.p.word_lengths.push_back(word_length_of(s));
             if (c.p.word_lengths.empty()) throw std::invalid_argument("empty word length list");
         }},
        {"waveform", "shaping_word_length", "0",
         [](Ctx& c, const std::string& v) {
             c.p.shaping_word_lengths.clear();
             for (const auto& s : split_list(v)) c.p.shaping_word_lengths.push_back(s == "0" ? 0 : word_length_of(s));
         }},
        {"waveform", "bandwidth_hz", "732000",
         [](Ctx& c, const std::string& v) { c.p.waveform.bandwidth_hz = to_double(v); }},
        {"waveform", "symbol_index", "1",
         [](Ctx& c, const std::string& v) { c.p.waveform.symbol_index = int(to_long(v)); }},
        {"waveform", "frames_per_burst", "36",
         [](Ctx& c, const std::string& v) { c.p.waveform.frames_per_burst = int(to_long(v)); }},
        {"waveform", "guard_samples", "240",
         [](Ctx& c, const std::string& v) { c.p.waveform.guard_samples = int(to_long(v)); }},
        {"waveform", "detector_threshold", "0.75",
         [](Ctx& c, const std::string& v) { c.p.waveform.detector_threshold = to_double(v); }},
        {"waveform", "pilot_value", "1",
         [](Ctx& c, const std::string& v) {
             auto parts = split_list(v);
             if (parts.empty() || parts.size() > 2) throw std::invalid_argument("pilot_value is re[, im]");
             c.p.waveform.pilot_value = {to_double(parts[0]), parts.size() > 1 ? to_double(parts[1]) : 0.0};
         }},
        {"waveform", "pilot_file", "",
         [](Ctx& c, const std::string& v) {
             if (!trim(v).empty()) c.p.waveform.patterns = load_pattern_file(c.path(v), c.p.waveform.pilot_value);
         }},
        {"waveform", "preamble_file", "",
         [](Ctx& c, const std::string& v) {
             if (!trim(v).empty()) c.p.waveform.preamble = load_preamble_file(c.path(v));
         }},
        {"filter", "order", "150", [](Ctx& c, const std::string& v) { c.p.waveform.filter_spec.order = int(to_long(v)); }},
        {"filter", "cutoff", "0.86", [](Ctx& c, const std::string& v) { c.p.waveform.filter_spec.cutoff = to_double(v); }},
        {"filter", "transition", "0.02",
         [](Ctx& c, const std::string& v) { c.p.waveform.filter_spec.transition = to_double(v); }},
        {"filter", "grid_density", "16",
         [](Ctx& c, const std::string& v) { c.p.waveform.filter_spec.grid_density = int(to_long(v)); }},
        {"filter", "max_iterations", "40",
         [](Ctx& c, const std::string& v) { c.p.waveform.filter_spec.max_iterations = int(to_long(v)); }},
        {"filter", "coeff_file", "",
         [](Ctx& c, const std::string& v) {
             if (!trim(v).empty()) c.p.waveform.filter_coeffs = load_coeff_file(c.path(v));
         }},
        {"channel", "profile", "none",
         [](Ctx& c, const std::string& v) {
             c.p.channels.clear();
             for (const auto& s : split_list(v)) {
                 channel_preset(s);  // throws on unknown names
                 c.p.channels.push_back(s);
             }
             if (c.p.channels.empty()) throw std::invalid_argument("empty channel list");
         }},
        {"channel", "last_tap_db", "-20", [](Ctx& c, const std::string& v) { c.p.last_tap_db = to_double(v); }},
        {"dme", "enabled", "off", [](Ctx& c, const std::string& v) { c.p.dme = to_bool(v); }},
        {"dme", "pulse_spacing_us", "12",
         [](Ctx& c, const std::string& v) { c.p.dme_cfg.pulse_spacing_s = to_double(v) * 1e-6; }},
        {"dme", "alpha", "4.5e11", [](Ctx& c, const std::string& v) { c.p.dme_cfg.alpha = to_double(v); }},
        {"dme", "amplitude_scale", "0.2",
         [](Ctx& c, const std::string& v) { c.p.dme_cfg.amplitude_scale = to_double(v); }},
        {"dme", "reference_amplitude", "5",
         [](Ctx& c, const std::string& v) { c.p.dme_cfg.reference_amplitude = to_double(v); }},
        {"dme", "pair_rate_hz", "2700", [](Ctx& c, const std::string& v) { c.p.dme_cfg.pair_rate_hz = to_double(v); }},
        {"dme", "offsets_khz", "-500, 500",
         [](Ctx& c, const std::string& v) {
             c.p.dme_cfg.offsets_hz.clear();
             for (double f : parse_number_list(v)) c.p.dme_cfg.offsets_hz.push_back(f * 1e3);
         }},
        {"afe", "phase_noise_std", "0.001", [](Ctx& c, const std::string& v) { c.p.phase_noise_std = to_double(v); }},
        {"afe", "gain", "1", [](Ctx& c, const std::string& v) { c.p.afe_gain = to_double(v); }},
        {"coding", "scrambler_seed", "0x7f",
         [](Ctx& c, const std::string& v) {
             long s = to_long(v);
             if (s <= 0 || s > 0x7f) throw std::invalid_argument("scrambler seed must be a nonzero 7-bit value");
             c.p.waveform.scrambler_seq = s == 0x7f ? Bits{} : lfsr_sequence(kFrameBits, unsigned(s));
         }},
        {"coding", "scrambler_sequence", "",
         [](Ctx& c, const std::string& v) {
             std::string t = trim(v);
             if (t.empty()) return;
             Bits b;
             for (char ch : t) {
                 if (ch == '0' || ch == '1') b.push_back(uint8_t(ch - '0'));
                 else if (ch != ' ' && ch != ',') throw std::invalid_argument("scrambler_sequence takes 0/1 digits");
             }
             if (b.size() != size_t(kFrameBits)) throw std::invalid_argument("scrambler_sequence needs 24 bits");
             c.p.waveform.scrambler_seq = b;
         }},
        {"coding", "interleaver", "default",
         [](Ctx& c, const std::string& v) {
             std::string t = trim(v);
             if (t == "default") c.p.waveform.interleaver.clear();
             else if (t == "identity") c.p.waveform.interleaver = identity_interleaver();
             else {
                 InterleaverTable tab;
                 for (const auto& item : split_list(t)) tab.push_back(int(to_long(item)));
                 if (tab.size() != size_t(kCodedBits) || !is_permutation(tab))
                     throw std::invalid_argument("interleaver must be default, identity or a permutation of 0..47");
                 c.p.waveform.interleaver = tab;
             }
         }},
    };
    return k;
}

ExperimentPlan parse_impl(const std::string& text, const std::string& base, bool filter_only) {
    ExperimentPlan p;
    p.source_text = text;
    Ctx ctx{p, base};
    const auto& table = keys();

    struct Entry {
        std::string value;
        int line, col;
    };
    std::map<std::string, Entry> given;
    std::set<std::string> sections;
    for (const auto& k : table) sections.insert(k.section);

    std::istringstream in(text);
    std::string raw, section;
    int ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        std::string line = raw;
        // comments: '#' or ';' to end of line
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const int indent = int(line.find_first_not_of(" \t")) + 1;
        std::string t = trim(line);
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("section header missing ']'", ln, indent + int(t.size()));
            section = trim(t.substr(1, t.size() - 2));
            if (!sections.count(section)) throw ConfigError("unknown section [" + section + "]", ln, indent + 1);
            if (filter_only && section != "filter")
                throw ConfigError("filter spec files may only contain [filter]", ln, indent + 1);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", ln, indent);
        if (section.empty()) throw ConfigError("key outside any section", ln, indent);
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("missing key before '='", ln, int(eq) + 1);
        const std::string full = section + "." + key;
        bool known = false;
        for (const auto& k : table) known = known || (section == k.section && key == k.name);
        if (!known) throw ConfigError("unknown key '" + key + "' in [" + section + "]", ln, indent);
        if (given.count(full)) throw ConfigError("duplicate key '" + key + "'", ln, indent);
        const size_t vstart = line.find_first_not_of(" \t", eq + 1);
        given[full] = {trim(line.substr(eq + 1)), ln, vstart == std::string::npos ? int(eq) + 2 : int(vstart) + 1};
    }

    // defaults first, in table order, so list-valued keys see their dependencies
    for (const auto& k : table) {
        if (filter_only && std::string(k.section) != "filter") continue;
        const std::string full = std::string(k.section) + "." + k.name;
        auto it = given.find(full);
        const std::string value = it == given.end() ? k.def : it->second.value;
        try {
            k.set(ctx, value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            if (it == given.end()) throw ConfigError("default for " + full + " rejected: " + e.what());
            throw ConfigError("bad value for '" + std::string(k.name) + "': " + e.what(), it->second.line,
                              it->second.col);
        }
        p.provenance.push_back(full + " = " + value +
                               (it == given.end() ? " (default)" : " (line " + std::to_string(it->second.line) + ")"));
    }
    return p;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        auto c1 = item.find(':');
        if (c1 == std::string::npos) {
            out.push_back(to_double(item));
            continue;
        }
        auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument("range must be start:step:stop");
        double a = to_double(item.substr(0, c1)), st = to_double(item.substr(c1 + 1, c2 - c1 - 1)),
               b = to_double(item.substr(c2 + 1));
        if (!(st > 0) || b < a) throw std::invalid_argument("range needs a positive step and start <= stop");
        const long n = long(std::floor((b - a) / st + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(a + i * st);
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

ExperimentPlan parse_config(const std::string& text, const std::string& base_dir) {
    ExperimentPlan p = parse_impl(text, base_dir, false);
    validate(p);
    return p;
}

ExperimentPlan load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

FilterSpec parse_filter_spec(const std::string& text) {
    ExperimentPlan p = parse_impl(text, "", true);
    if (!p.waveform.filter_spec.valid()) throw ConfigError("invalid filter spec");
    return p.waveform.filter_spec;
}

void validate(const ExperimentPlan& p) {
    if (p.bursts_per_point < 1) throw ConfigError("bursts_per_point must be >= 1");
    if (p.wants_ber() && p.frames_per_point() < 1000)
        throw ConfigError("BER points need at least 1000 frames; bursts_per_point * frames_per_burst = " +
                          std::to_string(p.frames_per_point()));
    if (p.wants_psd() && p.psd_bursts < 1) throw ConfigError("psd_bursts must be >= 1");
    if (!(p.afe_gain > 0)) throw ConfigError("afe gain must be positive");
    if (p.phase_noise_std < 0) throw ConfigError("phase_noise_std must be >= 0");
    if (!(p.dme_cfg.pulse_spacing_s > 0) || !(p.dme_cfg.alpha > 0) || p.dme_cfg.amplitude_scale < 0)
        throw ConfigError("DME needs spacing > 0, alpha > 0, scale >= 0");
    for (auto k : p.kinds) {
        WaveformConfig w = p.waveform;
        w.kind = k;
        for (int wl : p.word_lengths) {
            w.word_length = wl;
            try {
                validate(w);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("waveform: ") + e.what());
            }
        }
    }
    bool any = false;
    for (auto k : p.kinds) any = any || variant_applies(p.variant, k);
    if (!any) throw ConfigError(to_string(p.variant) + " applies to none of the configured kinds");
}

}  // namespace ldacs
