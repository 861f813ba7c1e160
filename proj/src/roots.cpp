#include "epile/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace epile {

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_zeros(const std::function<double(double)>& f, double lo, double hi,
                               int intervals, double xtol) {
    if (intervals < 1 || !(hi > lo)) {
        throw std::invalid_argument("scan_zeros: need hi > lo and at least one interval");
    }
    std::vector<double> zeros;
    auto push = [&](double z) {
        if (zeros.empty() || z - zeros.back() > xtol) zeros.push_back(z);
    };

    const double width = (hi - lo) / intervals;
    double x_prev = lo;
    double f_prev = f(lo);
    if (f_prev == 0.0) push(lo);
    for (int i = 1; i <= intervals; ++i) {
        const double x = (i == intervals) ? hi : lo + width * i;
        const double fx = f(x);
        if (fx == 0.0) {
            push(x);
        } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
            push(bisect(f, x_prev, x, xtol));
        }
        x_prev = x;
        f_prev = fx;
    }
    return zeros;
}

} // namespace epile
