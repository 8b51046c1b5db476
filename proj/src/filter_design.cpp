#include "ldacs/filter_design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ldacs {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GridPoint {
    double f;  // cycles/sample, 0..0.5
    double x;  // cos(2 pi f)
    double d;  // desired
    double w;  // weight
    int band;
};

// Barycentric weights 1/prod(x_k - x_j), rescaled; only ratios matter.
std::vector<double> bary_weights(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<double> lg(n), sg(n, 1.0);
    for (size_t k = 0; k < n; ++k) {
        double s = 0;
        for (size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            double d = x[k] - x[j];
            s += std::log(std::fabs(d));
            if (d < 0) sg[k] = -sg[k];
        }
        lg[k] = -s;
    }
    double mx = *std::max_element(lg.begin(), lg.end());
    std::vector<double> w(n);
    for (size_t k = 0; k < n; ++k) w[k] = sg[k] * std::exp(lg[k] - mx);
    return w;
}

struct Interp {
    std::vector<double> x, y, b;
    double operator()(double xv) const {
        double num = 0, den = 0;
        for (size_t k = 0; k < x.size(); ++k) {
            double d = xv - x[k];
            if (d == 0) return y[k];
            double t = b[k] / d;
            num += t * y[k];
            den += t;
        }
        return num / den;
    }
};

}  // namespace

bool FilterSpec::valid() const {
    return order > 0 && order % 2 == 0 && pass_edge() > 0 && pass_edge() < stop_edge() &&
           stop_edge() < 1 && grid_density > 0 && max_iterations > 0;
}

FilterDesign design_lowpass_pm(const FilterSpec& spec) {
    require(spec.valid(), "design_lowpass_pm: invalid filter spec");
    const int L = spec.order / 2;
    const int r = L + 1;        // cosine coefficients
    const int next = r + 1;     // extremal frequencies
    const double fp = spec.pass_edge() / 2, fs = spec.stop_edge() / 2;
    const double delf = 0.5 / (spec.grid_density * r);

    std::vector<GridPoint> grid;
    auto add_band = [&](double lo, double hi, double d, int band) {
        int n = std::max(2, int(std::lround((hi - lo) / delf)) + 1);
        for (int i = 0; i < n; ++i) {
            double f = lo + (hi - lo) * i / (n - 1);
            grid.push_back({f, std::cos(2 * kPi * f), d, 1.0, band});
        }
    };
    add_band(0.0, fp, 1.0, 0);
    add_band(fs, 0.5, 0.0, 1);
    const int ng = int(grid.size());
    require(ng > next, "design_lowpass_pm: grid too coarse");

    std::vector<int> ext(next);
    for (int j = 0; j < next; ++j) ext[j] = int(std::lround(double(j) * (ng - 1) / (next - 1)));

    FilterDesign out;
    Interp A;
    double delta = 0, prev = 0;
    std::vector<double> err(ng);

    for (int it = 1; it <= spec.max_iterations; ++it) {
        out.iterations = it;
        std::vector<double> x(next);
        for (int k = 0; k < next; ++k) x[k] = grid[ext[k]].x;
        auto ad = bary_weights(x);
        double num = 0, den = 0;
        for (int k = 0; k < next; ++k) {
            num += ad[k] * grid[ext[k]].d;
            den += ad[k] * ((k % 2) ? -1.0 : 1.0) / grid[ext[k]].w;
        }
        delta = num / den;

        A.x.assign(x.begin(), x.begin() + r);
        A.y.resize(r);
        for (int k = 0; k < r; ++k)
            A.y[k] = grid[ext[k]].d - ((k % 2) ? -1.0 : 1.0) * delta / grid[ext[k]].w;
        A.b = bary_weights(A.x);

        for (int i = 0; i < ng; ++i) err[i] = grid[i].w * (grid[i].d - A(grid[i].x));

        // local extrema within each band, band edges included
        std::vector<int> cand;
        for (int i = 0; i < ng; ++i) {
            bool lb = i == 0 || grid[i - 1].band != grid[i].band;
            bool rb = i == ng - 1 || grid[i + 1].band != grid[i].band;
            double e = err[i];
            bool up = (lb || e >= err[i - 1]) && (rb || e >= err[i + 1]);
            bool dn = (lb || e <= err[i - 1]) && (rb || e <= err[i + 1]);
            if ((e > 0 && up) || (e < 0 && dn)) cand.push_back(i);
        }
        // enforce alternation keeping the larger of same-signed neighbours
        std::vector<int> alt;
        for (int i : cand) {
            if (!alt.empty() && (err[alt.back()] > 0) == (err[i] > 0)) {
                if (std::fabs(err[i]) > std::fabs(err[alt.back()])) alt.back() = i;
            } else {
                alt.push_back(i);
            }
        }
        while (int(alt.size()) > next) {
            if (std::fabs(err[alt.front()]) < std::fabs(err[alt.back()]))
                alt.erase(alt.begin());
            else
                alt.pop_back();
        }

        out.residual = it == 1 ? 1.0 : std::fabs(std::fabs(delta) - std::fabs(prev)) / std::fabs(delta);
        prev = delta;
        if (int(alt.size()) < next) break;  // exchange lost alternation; report as not converged
        bool same = alt == ext;
        ext = alt;
        if (it > 1 && (out.residual < spec.tolerance || same)) {
            out.converged = true;
            break;
        }
    }

    // frequency sampling of A at 2L+1 points gives the impulse response exactly
    const int M = 2 * L + 1;
    std::vector<double> Am(L + 1);
    for (int m = 0; m <= L; ++m) Am[m] = A(std::cos(2 * kPi * double(m) / M));
    out.coeffs.assign(M, 0.0);
    for (int n = 0; n <= L; ++n) {
        double s = Am[0];
        for (int m = 1; m <= L; ++m) s += 2 * Am[m] * std::cos(2 * kPi * m * double(n - L) / M);
        out.coeffs[n] = out.coeffs[M - 1 - n] = s / M;
    }

    out.delta = std::fabs(delta);
    for (int k : ext) out.extremal_freqs.push_back(2 * grid[k].f);
    out.passband_ripple_db = measured_passband_ripple_db(out.coeffs, spec.pass_edge());
    out.stopband_atten_db = measured_stopband_atten_db(out.coeffs, spec.stop_edge());
    return out;
}

const FilterDesign& default_fofdm_design() {
    static const FilterDesign d = design_lowpass_pm(FilterSpec{});
    return d;
}

double magnitude_at(const std::vector<double>& h, double f) {
    double re = 0, im = 0;
    for (size_t n = 0; n < h.size(); ++n) {
        re += h[n] * std::cos(kPi * f * double(n));
        im -= h[n] * std::sin(kPi * f * double(n));
    }
    return std::hypot(re, im);
}

double magnitude_db(const std::vector<double>& h, double f) {
    return 20 * std::log10(std::max(magnitude_at(h, f), 1e-300));
}

double measured_stopband_atten_db(const std::vector<double>& h, double stop_edge) {
    const int n = 2048;
    double worst = 0;
    for (int i = 0; i <= n; ++i) {
        double f = stop_edge + (1 - stop_edge) * i / n;
        worst = std::max(worst, magnitude_at(h, f));
    }
    return -20 * std::log10(std::max(worst, 1e-300));
}

double measured_passband_ripple_db(const std::vector<double>& h, double pass_edge) {
    const int n = 2048;
    double lo = 1e300, hi = 0;
    for (int i = 0; i <= n; ++i) {
        double m = magnitude_at(h, pass_edge * i / n);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return 20 * std::log10(hi / lo);
}

int count_alternations(const std::vector<double>& h, const FilterSpec& spec, double rel_tol) {
    // dense evaluation of the signed zero-phase error over both bands
    const int L = int(h.size() - 1) / 2;
    auto amp = [&](double f) {  // zero-phase amplitude, f in Nyquist units
        double a = h[L];
        for (int k = 1; k <= L; ++k) a += 2 * h[L + k] * std::cos(kPi * f * k);
        return a;
    };
    struct P {
        double e;
        int band;
    };
    std::vector<P> pts;
    const int dens = 64 * (L + 1);
    for (int band = 0; band < 2; ++band) {
        double lo = band == 0 ? 0.0 : spec.stop_edge();
        double hi = band == 0 ? spec.pass_edge() : 1.0;
        double d = band == 0 ? 1.0 : 0.0;
        int n = std::max(2, int(dens * (hi - lo)));
        for (int i = 0; i <= n; ++i) pts.push_back({d - amp(lo + (hi - lo) * i / n), band});
    }
    double mx = 0;
    for (auto& p : pts) mx = std::max(mx, std::fabs(p.e));
    int count = 0;
    int last_sign = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        bool lb = i == 0 || pts[i - 1].band != pts[i].band;
        bool rb = i + 1 == pts.size() || pts[i + 1].band != pts[i].band;
        double e = pts[i].e;
        if (std::fabs(e) < mx * (1 - rel_tol)) continue;
        bool peak = (lb || std::fabs(e) >= std::fabs(pts[i - 1].e)) &&
                    (rb || std::fabs(e) >= std::fabs(pts[i + 1].e));
        if (!peak) continue;
        int s = e > 0 ? 1 : -1;
        if (s != last_sign) {
            ++count;
            last_sign = s;
        }
    }
    return count;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> y(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) y[i + j] += a[i] * b[j];
    return y;
}

std::vector<double> rc_rise(int taper) {
    std::vector<double> w(taper);
    for (int k = 0; k < taper; ++k) w[k] = 0.5 * (1 - std::cos(kPi * (k + 1) / (taper + 1)));
    return w;
}

WolaWindows design_rrc_window(const WindowSpec& s) {
    WolaWindows out;
    const auto rise = rc_rise(s.w);
    out.tx.assign(s.tx_length(), 1.0);
    for (int k = 0; k < s.w; ++k) {
        out.tx[k] = rise[k];
        out.tx[s.tx_length() - 1 - k] = rise[k];
    }
    const int t = s.rx_taper();
    const auto rrise = rc_rise(t);
    out.rx.assign(s.rx_length(), 1.0);
    for (int k = 0; k < t; ++k) {
        out.rx[k] = rrise[k];
        out.rx[s.rx_length() - 1 - k] = rrise[k];
    }
    out.p1.assign(out.tx.begin(), out.tx.begin() + s.w + s.cp);
    out.p2.assign(out.tx.end() - s.w, out.tx.end());
    return out;
}

QuantizedCoeffs quantize_coeffs(const std::vector<double>& c, const FxFormat& fmt, double stop_edge) {
    QuantizedCoeffs q;
    q.fmt = fmt;
    for (double v : c) {
        int64_t code = quantize(v, fmt);
        q.codes.push_back(code);
        q.values.push_back(dequantize(code, fmt));
        q.max_error = std::max(q.max_error, std::fabs(q.values.back() - v));
    }
    if (stop_edge > 0) {
        q.stopband_atten_db = measured_stopband_atten_db(q.values, stop_edge);
        q.atten_loss_db = measured_stopband_atten_db(c, stop_edge) - q.stopband_atten_db;
    }
    return q;
}

std::string format_coeff_file(const std::vector<double>& c) {
    std::string s;
    char buf[40];
    for (double v : c) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        s += buf;
    }
    return s;
}

std::vector<double> parse_coeff_file(const std::string& text) {
    std::vector<double> c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) {
            std::string rest;
            if (std::istringstream(line) >> rest)
                throw std::invalid_argument("coefficient file line " + std::to_string(lineno) +
                                            ": not a number");
            continue;
        }
        c.push_back(v);
    }
    return c;
}

std::vector<double> load_coeff_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open coefficient file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_coeff_file(ss.str());
}

}  // namespace ldacs
