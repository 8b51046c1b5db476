#include "ldacs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ldacs {

namespace {

// The planner is not thread-safe; executing an existing plan on new arrays is.
struct PlanCache {
    std::mutex mu;
    std::map<std::pair<int, int>, fftw_plan> plans;

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        CVec a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

CVec run(const CVec& x, int sign) {
    CVec in = x, out(x.size());
    if (x.empty()) return out;
    fftw_plan p = cache().get(int(x.size()), sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

CVec fft(const CVec& x) { return run(x, FFTW_FORWARD); }

CVec ifft(const CVec& x) {
    CVec y = run(x, FFTW_BACKWARD);
    const double s = 1.0 / double(x.size());
    for (auto& v : y) v *= s;
    return y;
}

CVec fft64(const CVec& x) {
    require(x.size() == 64, "fft64: length must be 64");
    return fft(x);
}

CVec ifft64(const CVec& x) {
    require(x.size() == 64, "ifft64: length must be 64");
    return ifft(x);
}

CVec fftshift(const CVec& x) {
    const size_t n = x.size(), h = (n + 1) / 2;
    CVec y(n);
    for (size_t i = 0; i < n; ++i) y[i] = x[(i + h) % n];
    return y;
}

CVec ifftshift(const CVec& x) {
    const size_t n = x.size(), h = n / 2;
    CVec y(n);
    for (size_t i = 0; i < n; ++i) y[i] = x[(i + h) % n];
    return y;
}

}  // namespace ldacs
