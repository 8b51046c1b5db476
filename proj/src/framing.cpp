#include "ldacs/framing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ldacs {

const std::vector<int>& active_bins() {
    static const std::vector<int> bins = [] {
        std::vector<int> b;
        for (int i = 7; i <= 57; ++i)
            if (i != kDcBin) b.push_back(i);
        return b;
    }();
    return bins;
}

const std::vector<int>& null_bins() {
    static const std::vector<int> bins = {0, 1, 2, 3, 4, 5, 6, 58, 59, 60, 61, 62, 63};
    return bins;
}

namespace {

// 802.11a L_{-26..26}; the +-26 entries fall outside the 50 active bins.
constexpr int kLts[53] = {1, 1, -1, -1, 1,  1,  -1, 1,  -1, 1,  1,  1,  1, 1,
                          1, -1, -1, 1, 1,  -1, 1,  -1, 1,  1,  1,  1,  0, 1,
                          -1, -1, 1, 1, -1, 1,  -1, 1,  -1, -1, -1, -1, -1, 1,
                          1, -1, -1, 1, -1, 1,  -1, 1,  1,  1,  1};

PilotLine pilots_at(std::vector<int> pos, cplx v) {
    PilotLine l;
    l.pos = std::move(pos);
    l.vals.assign(l.pos.size(), v);
    return l;
}

std::string family_of(int idx) {
    if (idx == 0) return "EN1";
    if (idx == 51) return "EN7";
    if (idx == 52) return "EN8";
    if (idx == 53) return "EN9";
    switch (idx % 5) {
        case 1: return "EN2";
        case 2: return "EN3";
        case 3: return "EN4";
        case 4: return "EN5";
        default: return "EN6";
    }
}

// Families the published material actually pins down.
bool documented(int idx) { return idx == 51 || idx == 52 || idx == 53 || idx % 5 == 1 || idx % 5 == 3; }

}  // namespace

CVec lts_grid() {
    CVec g(kSubcarriers, 0.0);
    for (int k = -25; k <= 25; ++k)
        if (k != 0) g[kDcBin + k] = double(kLts[k + 26]);
    return g;
}

CVec sts_grid() {
    const double a = std::sqrt(13.0 / 6.0);
    const cplx p(a, a), n(-a, -a);
    const int ks[12] = {-24, -20, -16, -12, -8, -4, 4, 8, 12, 16, 20, 24};
    const cplx vs[12] = {p, n, p, n, n, p, n, n, p, p, p, p};
    CVec g(kSubcarriers, 0.0);
    for (int i = 0; i < 12; ++i) g[kDcBin + ks[i]] = vs[i];
    return g;
}

PatternTable default_pattern_table(cplx pv) {
    PatternTable t;
    // symbol 0: 14 pilots evenly over the band (positions not published)
    t[0] = pilots_at({7, 11, 15, 19, 23, 27, 31, 33, 37, 41, 45, 49, 53, 57}, pv);
    for (int i = 1; i <= 50; ++i) {
        switch (i % 5) {
            case 1: t[i] = pilots_at({31, 33}, pv); break;
            case 3: t[i] = pilots_at({7, 23, 41, 57}, pv); break;
            case 2: t[i] = pilots_at({15, 49}, pv); break;
            case 4: t[i] = pilots_at({11, 27, 37, 53}, pv); break;
            default: t[i] = pilots_at({19, 45}, pv); break;
        }
    }
    t[51] = pilots_at({31, 33}, 0.0);  // zeros instead of pilots
    const CVec lts = lts_grid();
    for (int idx : {52, 53}) {
        PilotLine l;
        for (int b : active_bins()) {
            l.pos.push_back(b);
            l.vals.push_back(lts[b]);
        }
        t[idx] = l;
    }
    return t;
}

PatternTable parse_pattern_table(const std::string& text, cplx pv) {
    PatternTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("pattern table line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        int idx;
        try {
            size_t used;
            idx = std::stoi(tok, &used);
            if (used != tok.size()) fail("bad symbol index '" + tok + "'");
        } catch (const std::logic_error&) {
            fail("bad symbol index '" + tok + "'");
        }
        if (idx < 0 || idx >= kSymbolsPerFrame) fail("symbol index out of range");
        if (t.count(idx)) fail("duplicate symbol index " + std::to_string(idx));
        PilotLine l;
        while (ls >> tok) {
            int pos;
            cplx v = pv;
            auto colon = tok.find(':');
            try {
                pos = std::stoi(tok.substr(0, colon));
                if (colon != std::string::npos) {
                    std::string val = tok.substr(colon + 1);
                    auto comma = val.find(',');
                    double re = std::stod(val.substr(0, comma));
                    double im = comma == std::string::npos ? 0.0 : std::stod(val.substr(comma + 1));
                    v = {re, im};
                }
            } catch (const std::logic_error&) {
                fail("bad pilot entry '" + tok + "'");
            }
            auto& act = active_bins();
            if (!std::binary_search(act.begin(), act.end(), pos))
                fail("pilot bin " + std::to_string(pos) + " is not an active subcarrier");
            if (std::find(l.pos.begin(), l.pos.end(), pos) != l.pos.end())
                fail("repeated pilot bin " + std::to_string(pos));
            l.pos.push_back(pos);
            l.vals.push_back(v);
        }
        t[idx] = l;
    }
    return t;
}

PatternTable load_pattern_file(const std::string& path, cplx pv) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open pattern file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_pattern_table(ss.str(), pv);
}

std::string format_pattern_table(const PatternTable& t) {
    std::ostringstream os;
    os << "# symbol_index pilot_bin[:re[,im]] ... (bins 0-based, DC = 32)\n";
    char buf[64];
    for (const auto& [idx, l] : t) {
        os << idx;
        for (size_t i = 0; i < l.pos.size(); ++i) {
            std::snprintf(buf, sizeof buf, " %d:%.17g,%.17g", l.pos[i], l.vals[i].real(),
                          l.vals[i].imag());
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

FrameLayout::FrameLayout(PatternTable table) {
    const PatternTable defaults = default_pattern_table();
    maps_.resize(kSymbolsPerFrame);
    for (int idx = 0; idx < kSymbolsPerFrame; ++idx) {
        const PilotLine& l = table.count(idx) ? table.at(idx) : defaults.at(idx);
        SubcarrierMap m;
        m.symbol_index = idx;
        m.family = family_of(idx);
        m.substitute = !documented(idx);
        std::set<int> pil(l.pos.begin(), l.pos.end());
        m.pilot_pos = l.pos;
        m.pilot_vals = l.vals;
        for (int b : active_bins())
            if (!pil.count(b)) m.data_pos.push_back(b);
        m.null_pos = null_bins();
        maps_[idx] = std::move(m);
    }
}

const SubcarrierMap& FrameLayout::pattern_for_index(int idx) const {
    require(idx >= 0 && idx < kSymbolsPerFrame, "symbol index outside 0..53");
    return maps_[idx];
}

const SubcarrierMap& pattern_for_index(int idx) {
    static const FrameLayout layout;
    return layout.pattern_for_index(idx);
}

CVec map_symbol(const CVec& data, const SubcarrierMap& map) {
    require(data.size() == map.data_pos.size(), "map_symbol: data size does not match pattern");
    CVec grid(kSubcarriers, 0.0);
    for (size_t i = 0; i < data.size(); ++i) grid[map.data_pos[i]] = data[i];
    for (size_t i = 0; i < map.pilot_pos.size(); ++i) grid[map.pilot_pos[i]] = map.pilot_vals[i];
    return grid;
}

CVec demap_symbol(const CVec& grid, const SubcarrierMap& map) {
    require(grid.size() == size_t(kSubcarriers), "demap_symbol: grid must hold 64 bins");
    CVec out(map.data_pos.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = grid[map.data_pos[i]];
    return out;
}

CVec pilots_of(const CVec& grid, const SubcarrierMap& map) {
    CVec out(map.pilot_pos.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = grid[map.pilot_pos[i]];
    return out;
}

}  // namespace ldacs
