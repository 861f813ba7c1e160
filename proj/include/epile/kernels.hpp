#pragma once

// Data-parallel sampling kernels. Each kernel has a serial reference and an
// OpenMP version with identical per-element arithmetic, so results agree
// bit for bit; tests compare the two and bench/ times them.

#include <cstddef>
#include <span>
#include <vector>

#include "epile/pile_model.hpp"

namespace epile {

enum class Execution { serial, parallel };

namespace kernels {

inline Sample to_sample(double x, const PointResponse& r) {
    return Sample{x, r.u, r.strain, r.stress, r.shear};
}

/// out[i] = eval(i) for a callable returning Sample.
template <class Eval>
void sample_serial(std::span<Sample> out, const Eval& eval) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(i);
}

template <class Eval>
void sample_parallel(std::span<Sample> out, const Eval& eval) {
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = eval(static_cast<std::size_t>(i));
    }
}

template <class Eval>
std::vector<Sample> sample(std::size_t n, const Eval& eval, Execution exec) {
    std::vector<Sample> out(n);
    if (exec == Execution::parallel) {
        sample_parallel(std::span<Sample>(out), eval);
    } else {
        sample_serial(std::span<Sample>(out), eval);
    }
    return out;
}

/// terms[i] = term(i) for i in [0, n). Summation is left to the caller so the
/// reduction order stays fixed regardless of thread count.
template <class Term>
void map_serial(std::size_t n, std::span<double> terms, const Term& term) {
    for (std::size_t i = 0; i < n; ++i) terms[i] = term(i);
}

template <class Term>
void map_parallel(std::size_t n, std::span<double> terms, const Term& term) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        terms[static_cast<std::size_t>(i)] = term(static_cast<std::size_t>(i));
    }
}

} // namespace kernels
} // namespace epile
