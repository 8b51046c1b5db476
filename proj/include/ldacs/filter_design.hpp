#pragma once

#include <string>
#include <vector>

#include "ldacs/numeric.hpp"

namespace ldacs {

// Frequencies normalised to Nyquist = 1.
struct FilterSpec {
    int order = 150;
    double cutoff = 0.86;
    double transition = 0.02;
    int grid_density = 16;
    int max_iterations = 40;
    double tolerance = 1e-6;

    double pass_edge() const { return cutoff - transition / 2; }
    double stop_edge() const { return cutoff + transition / 2; }
    bool valid() const;
};

struct FilterDesign {
    std::vector<double> coeffs;
    bool converged = false;
    int iterations = 0;
    double delta = 0;     // equiripple deviation
    double residual = 0;  // last relative change of delta
    double passband_ripple_db = 0;
    double stopband_atten_db = 0;
    std::vector<double> extremal_freqs;  // Nyquist = 1
};

FilterDesign design_lowpass_pm(const FilterSpec& spec);
// Cached design for the default spec (the design takes a few ms but is used everywhere).
const FilterDesign& default_fofdm_design();

double magnitude_at(const std::vector<double>& h, double f);  // |H|, f in Nyquist units
double magnitude_db(const std::vector<double>& h, double f);
double measured_stopband_atten_db(const std::vector<double>& h, double stop_edge);
double measured_passband_ripple_db(const std::vector<double>& h, double pass_edge);

// Alternating extrema of the weighted error over the design bands.
int count_alternations(const std::vector<double>& h, const FilterSpec& spec, double rel_tol = 0.05);

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

struct WindowSpec {
    int n = 64;
    int cp = 11;
    int w = 8;
    int tx_length() const { return n + cp + 2 * w; }
    int rx_taper() const { return (cp + 1) / 2; }
    int rx_length() const { return n + rx_taper(); }
    int rx_head_discard() const { return w + cp / 2; }
    int rx_tail_discard() const { return w; }
};

struct WolaWindows {
    std::vector<double> tx;  // 91
    std::vector<double> rx;  // 70
    std::vector<double> p1;  // head: W taper values then CP ones
    std::vector<double> p2;  // tail: W falling values
};

// Raised-cosine edge: rise[k] = (1 - cos(pi (k+1) / (T+1))) / 2.
std::vector<double> rc_rise(int taper);
WolaWindows design_rrc_window(const WindowSpec& spec);

struct QuantizedCoeffs {
    FxFormat fmt;
    std::vector<int64_t> codes;
    std::vector<double> values;
    double max_error = 0;
    double stopband_atten_db = 0;
    double atten_loss_db = 0;  // reference minus quantized
};

QuantizedCoeffs quantize_coeffs(const std::vector<double>& coeffs, const FxFormat& fmt,
                                double stop_edge = -1);

std::string format_coeff_file(const std::vector<double>& c);
std::vector<double> parse_coeff_file(const std::string& text);
std::vector<double> load_coeff_file(const std::string& path);

}  // namespace ldacs
