#pragma once

#include <map>
#include <string>
#include <vector>

#include "ldacs/numeric.hpp"

namespace ldacs {

constexpr int kSubcarriers = 64;
constexpr int kDcBin = 32;
constexpr int kSymbolsPerFrame = 54;  // LDACS frame, indices 0..53

// Bin 0 is the lowest frequency after fft-shift; DC is bin 32.
struct SubcarrierMap {
    int symbol_index = 1;
    std::vector<int> data_pos;
    std::vector<int> pilot_pos;
    CVec pilot_vals;
    int dc_pos = kDcBin;
    std::vector<int> null_pos;
    std::string family;      // "EN1".."EN9"
    bool substitute = false;  // layout not published, bundled stand-in
};

// Active bins 7..31 and 33..57.
const std::vector<int>& active_bins();
const std::vector<int>& null_bins();

// Pilot layout per symbol index. Data positions are the remaining active bins.
struct PilotLine {
    std::vector<int> pos;
    CVec vals;
};
using PatternTable = std::map<int, PilotLine>;

PatternTable default_pattern_table(cplx pilot_value = {1.0, 0.0});
// Grammar (0-based bins, '#' starts a comment):
//   <index> <bin>[:<re>[,<im>]] <bin>... ; a bare bin takes the default pilot value
PatternTable parse_pattern_table(const std::string& text, cplx pilot_value = {1.0, 0.0});
PatternTable load_pattern_file(const std::string& path, cplx pilot_value = {1.0, 0.0});
std::string format_pattern_table(const PatternTable& t);

class FrameLayout {
public:
    explicit FrameLayout(PatternTable table = default_pattern_table());
    const SubcarrierMap& pattern_for_index(int symbol_index) const;

private:
    std::vector<SubcarrierMap> maps_;
};

// Convenience over the default table.
const SubcarrierMap& pattern_for_index(int symbol_index);

// LTS values on the active bins (used by the sync symbols and the preamble).
CVec lts_grid();
CVec sts_grid();

CVec map_symbol(const CVec& data, const SubcarrierMap& map);
CVec demap_symbol(const CVec& grid, const SubcarrierMap& map);
CVec pilots_of(const CVec& grid, const SubcarrierMap& map);

}  // namespace ldacs
