#pragma once

#include <functional>
#include <vector>

namespace epile {

/// All zeros of f on [lo, hi]: scan `intervals` equal sub-intervals for sign
/// changes (or exact zeros at the scan nodes), then bisect each bracket until
/// its width is <= xtol. Returned in increasing order without duplicates.
std::vector<double> scan_zeros(const std::function<double(double)>& f, double lo, double hi,
                               int intervals, double xtol);

/// Bisection on a bracket with f(lo) and f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol);

} // namespace epile
