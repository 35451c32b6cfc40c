#pragma once

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qaffine/coherent.hpp"
#include "qaffine/domain.hpp"

namespace testutil {

using cplx = std::complex<double>;

inline double hdot(const std::vector<double>& a, const std::vector<double>& b, double h) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s * h;
}

inline cplx hdot(const std::vector<cplx>& a, const std::vector<cplx>& b, double h) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
    return s * h;
}

// Expectation of a diagonal observable W(x) in a coherent state.
inline double diag_expectation(const qaffine::CoherentState& st,
                               const std::function<double(double)>& W) {
    double s = 0.0;
    for (std::size_t j = 0; j < st.samples.size(); ++j)
        s += std::norm(st.samples[j]) * W(st.grid.nodes[j]);
    return s * st.grid.h;
}

// Momentum expectation via the centered-difference P = -i hbar d/dx.
inline double momentum_expectation(const qaffine::CoherentState& st, double hbar) {
    const auto& f = st.samples;
    const std::size_t n = f.size();
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx d = 0.0;
        if (j + 1 < n) d += f[j + 1];
        if (j > 0) d -= f[j - 1];
        acc += std::conj(f[j]) * cplx(0.0, -hbar) * d / (2.0 * st.grid.h);
    }
    return (acc * st.grid.h).real();
}

// Composite Simpson quadrature (independent of the h-weighted grid sums).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n_panels) {
    const int n = 2 * n_panels;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Deterministic uniform generator for property-style tests.
struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(gen);
    }
};

}  // namespace testutil
