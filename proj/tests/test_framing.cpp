#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ldacs/framing.hpp"

using namespace ldacs;

TEST_CASE("active and null bins") {
    CHECK(active_bins().size() == 50);
    CHECK(null_bins().size() == 13);  // DC is separate
    CHECK(active_bins().front() == 7);
    CHECK(active_bins().back() == 57);
    CHECK(std::find(active_bins().begin(), active_bins().end(), kDcBin) == active_bins().end());
}

TEST_CASE("pattern lookup examples") {
    const auto& m1 = pattern_for_index(1);
    CHECK(m1.data_pos.size() == 48);
    CHECK(m1.pilot_pos == std::vector<int>{31, 33});
    const auto& m3 = pattern_for_index(3);
    CHECK(m3.data_pos.size() == 46);
    CHECK(m3.pilot_pos == std::vector<int>{7, 23, 41, 57});
    const auto& m0 = pattern_for_index(0);
    CHECK(m0.pilot_pos.size() == 14);
    CHECK(m0.data_pos.size() == 36);
    CHECK_THROWS_AS(pattern_for_index(54), ContractViolation);
    CHECK_THROWS_AS(pattern_for_index(-1), ContractViolation);
}

TEST_CASE("every pattern partitions the band") {
    for (int idx = 0; idx < kSymbolsPerFrame; ++idx) {
        const auto& m = pattern_for_index(idx);
        std::set<int> all;
        for (int b : m.data_pos) CHECK(all.insert(b).second);
        for (int b : m.pilot_pos) CHECK(all.insert(b).second);
        for (int b : m.null_pos) CHECK(all.insert(b).second);
        all.insert(m.dc_pos);
        CHECK(all.size() == 64);
        CHECK(m.pilot_vals.size() == m.pilot_pos.size());
        CHECK(std::find(m.data_pos.begin(), m.data_pos.end(), kDcBin) == m.data_pos.end());
    }
}

TEST_CASE("pilot families repeat with period five") {
    for (int idx = 1; idx + 5 <= 50; ++idx)
        CHECK(pattern_for_index(idx).pilot_pos == pattern_for_index(idx + 5).pilot_pos);
    CHECK(pattern_for_index(52).data_pos.empty());
}

TEST_CASE("map and demap") {
    std::mt19937_64 rng(9);
    for (int idx : {0, 1, 3, 51}) {
        const auto& m = pattern_for_index(idx);
        CVec d(m.data_pos.size());
        for (auto& v : d) v = {double(rng() & 1) * 2 - 1, 0};
        CVec g = map_symbol(d, m);
        REQUIRE(g.size() == 64);
        CHECK(demap_symbol(g, m) == d);
        CHECK(g[kDcBin] == cplx{});
        for (int b : m.null_pos) CHECK(g[size_t(b)] == cplx{});
        CVec p = pilots_of(g, m);
        CHECK(p == m.pilot_vals);
    }
    CHECK_THROWS_AS(map_symbol(CVec(47), pattern_for_index(1)), ContractViolation);
}

TEST_CASE("pattern file grammar") {
    PatternTable t = parse_pattern_table("# custom\n1 30 34:0,1\n");
    REQUIRE(t.count(1));
    CHECK(t[1].pos == std::vector<int>{30, 34});
    CHECK(t[1].vals[0] == cplx{1, 0});
    CHECK(t[1].vals[1] == cplx{0, 1});
    FrameLayout lay(t);
    CHECK(lay.pattern_for_index(1).data_pos.size() == 48);
    CHECK(lay.pattern_for_index(3).pilot_pos == pattern_for_index(3).pilot_pos);
    CHECK_THROWS(parse_pattern_table("1 32\n"));   // DC
    CHECK_THROWS(parse_pattern_table("1 3\n"));    // null bin
    CHECK_THROWS(parse_pattern_table("60 31\n"));  // index
    PatternTable round = parse_pattern_table(format_pattern_table(default_pattern_table()));
    for (int idx = 0; idx < kSymbolsPerFrame; ++idx) {
        CHECK(round[idx].pos == default_pattern_table()[idx].pos);
        CHECK(round[idx].vals == default_pattern_table()[idx].vals);
    }
}
