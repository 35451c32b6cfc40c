#include "qaffine/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qaffine/errors.hpp"

namespace qaffine {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// One off-diagonal entry exactly zero would split the matrix; the assembled
// stencils never produce that, but guard the Sturm pivots anyway.
double guarded(double x, double floor_) {
    if (std::abs(x) < floor_) return x < 0.0 ? -floor_ : floor_;
    return x;
}

}  // namespace

Spectrum eigen_ql(const TridiagonalOperator& T) {
    const std::size_t n = T.size();
    if (n < 1) throw std::invalid_argument("eigen_ql: empty matrix");

    std::vector<double> d = T.diag;
    std::vector<double> e = T.offdiag;
    e.push_back(0.0);

    // Implicit-shift QL sweeps (Wilkinson shift), deflating from the top.
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw SolverError("eigen_ql: no convergence at index " + std::to_string(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::sort(d.begin(), d.end());
    Spectrum out;
    out.eigenvalues = std::move(d);
    out.grid = T.grid;
    out.method = EigenMethod::QL;
    return out;
}

std::size_t sturm_count(const TridiagonalOperator& T, double lambda) {
    const std::size_t n = T.size();
    const double floor_ = kEps * kEps * std::max(T.norm_bound(), 1.0);
    std::size_t count = 0;
    double q = guarded(T.diag[0] - lambda, floor_);
    if (q < 0.0) ++count;
    for (std::size_t j = 1; j < n; ++j) {
        q = guarded(T.diag[j] - lambda - T.offdiag[j - 1] * T.offdiag[j - 1] / q, floor_);
        if (q < 0.0) ++count;
    }
    return count;
}

namespace {

// Solve (T - sigma) x = b by LU with partial pivoting between adjacent rows
// (the stable kernel for inverse iteration on nearly singular shifts).
void shifted_solve(const TridiagonalOperator& T, double sigma, std::vector<double>& x) {
    const std::size_t n = T.size();
    const double tiny = kEps * kEps * std::max(T.norm_bound(), 1.0);
    std::vector<double> d(n), u(n, 0.0), u2(n, 0.0);
    std::vector<double> l(n, 0.0);
    std::vector<bool> swapped(n, false);

    for (std::size_t j = 0; j < n; ++j) d[j] = T.diag[j] - sigma;
    for (std::size_t j = 0; j + 1 < n; ++j) u[j] = T.offdiag[j];

    // Factorization with row swaps.
    std::vector<double> sub(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) sub[j + 1] = T.offdiag[j];

    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (std::abs(sub[j + 1]) > std::abs(d[j])) {
            swapped[j] = true;
            std::swap(d[j], sub[j + 1]);
            std::swap(u[j], d[j + 1]);
            if (j + 2 < n) {
                u2[j] = u[j + 1];
                u[j + 1] = 0.0;
            }
        }
        if (d[j] == 0.0) d[j] = tiny;
        const double m = sub[j + 1] / d[j];
        l[j] = m;
        d[j + 1] -= m * u[j];
        if (j + 2 < n) u[j + 1] -= m * u2[j];
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;

    // Forward substitution with the recorded swaps.
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (swapped[j]) std::swap(x[j], x[j + 1]);
        x[j + 1] -= l[j] * x[j];
    }
    // Back substitution.
    x[n - 1] /= d[n - 1];
    if (n >= 2) {
        x[n - 2] = (x[n - 2] - u[n - 2] * x[n - 1]) / d[n - 2];
        for (std::size_t j = n - 2; j-- > 0;) {
            x[j] = (x[j] - u[j] * x[j + 1] - u2[j] * x[j + 2]) / d[j];
        }
    }
}

void normalize_h(std::vector<double>& v, double h) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s * h);
    for (double& x : v) x /= s;
}

double residual_norm(const TridiagonalOperator& T, const std::vector<double>& v, double lambda) {
    std::vector<double> y(v.size());
    T.apply(v, y);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double r = y[j] - lambda * v[j];
        num += r * r;
        den += v[j] * v[j];
    }
    return std::sqrt(num / den);
}

}  // namespace

Spectrum eigen_bisection(const TridiagonalOperator& T, std::size_t k) {
    const std::size_t n = T.size();
    if (k < 1 || k > n) throw std::invalid_argument("eigen_bisection: k out of range");

    // Gershgorin enclosure.
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t j = 0; j < n; ++j) {
        double r = 0.0;
        if (j > 0) r += std::abs(T.offdiag[j - 1]);
        if (j + 1 < n) r += std::abs(T.offdiag[j]);
        lo = std::min(lo, T.diag[j] - r);
        hi = std::max(hi, T.diag[j] + r);
    }
    const double scale = T.norm_bound();
    const double tol = std::max(1e-12 * scale, 8.0 * kEps * std::max(std::abs(lo), std::abs(hi)));

    Spectrum out;
    out.grid = T.grid;
    out.method = EigenMethod::Bisection;
    out.eigenvalues.resize(k);
    out.eigenvectors.resize(k);

    double left = lo;
    for (std::size_t idx = 0; idx < k; ++idx) {
        // Smallest lambda with sturm_count(lambda) >= idx+1.
        double a = left, b = hi;
        while (b - a > tol) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(T, mid) >= idx + 1)
                b = mid;
            else
                a = mid;
        }
        const double lambda = 0.5 * (a + b);
        out.eigenvalues[idx] = lambda;
        left = a;  // eigenvalues are sought in increasing order

        // Inverse iteration.  Deterministic start vector; a handful of
        // iterations suffices with a bisection-tight shift.
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = 1.0 + 0.5 * std::sin(2.399963 * static_cast<double>(j + 1));
        normalize_h(v, T.grid.h);

        double res = std::numeric_limits<double>::max();
        for (int it = 0; it < 8; ++it) {
            shifted_solve(T, lambda, v);
            // Re-orthogonalize against earlier vectors when levels cluster.
            for (std::size_t m = 0; m < idx; ++m) {
                if (std::abs(out.eigenvalues[m] - lambda) < 1e-6 * std::max(scale, 1.0)) {
                    double dot = 0.0;
                    for (std::size_t j = 0; j < n; ++j) dot += v[j] * out.eigenvectors[m][j];
                    dot *= T.grid.h;
                    for (std::size_t j = 0; j < n; ++j) v[j] -= dot * out.eigenvectors[m][j];
                }
            }
            normalize_h(v, T.grid.h);
            res = residual_norm(T, v, lambda);
            if (res <= 1e-10 * std::max(scale, 1.0)) break;
        }
        if (res > 1e-8 * std::max(scale, 1.0))
            throw SolverError("eigen_bisection: inverse iteration stalled at level " +
                              std::to_string(idx));

        // Rayleigh-quotient polish: the bisection bracket guards against
        // drifting onto a neighbouring level, the quotient restores the
        // eigenvalue to near machine precision.
        {
            std::vector<double> y(n);
            T.apply(v, y);
            double num = 0.0, den = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                num += v[j] * y[j];
                den += v[j] * v[j];
            }
            const double rq = num / den;
            if (std::abs(rq - lambda) <= 2.0 * tol) out.eigenvalues[idx] = rq;
        }

        // Fix the overall sign: first substantial component positive.
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(v[j]) > 1e-8) {
                if (v[j] < 0.0)
                    for (double& y : v) y = -y;
                break;
            }
        }
        out.eigenvectors[idx] = std::move(v);
    }
    return out;
}

std::vector<double> richardson(const Spectrum& coarse, const Spectrum& fine, std::size_t k) {
    const Grid1D& gc = coarse.grid;
    const Grid1D& gf = fine.grid;
    const double tol = 1e-9 * std::max(1.0, std::abs(gc.x_max - gc.x_min));
    const bool nested = std::abs(gc.x_min - gf.x_min) <= tol &&
                        std::abs(gc.x_max - gf.x_max) <= tol && gf.n == 2 * gc.n + 1;
    if (!nested)
        throw std::invalid_argument("richardson: grids are not in a 2:1 refinement relation");
    if (coarse.eigenvalues.size() < k || fine.eigenvalues.size() < k)
        throw std::invalid_argument("richardson: fewer than k levels available");

    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i)
        out[i] = (4.0 * fine.eigenvalues[i] - coarse.eigenvalues[i]) / 3.0;
    return out;
}

std::vector<double> level_spacings(const Spectrum& spec, std::size_t count) {
    if (count + 1 > spec.eigenvalues.size())
        throw std::invalid_argument("level_spacings: insufficient levels");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = spec.eigenvalues[i + 1] - spec.eigenvalues[i];
    return out;
}

double boundary_exponent(const Spectrum& spec, std::size_t level, double wall,
                         std::size_t fit_window) {
    if (level >= spec.eigenvectors.size() || spec.eigenvectors[level].empty())
        throw std::invalid_argument("boundary_exponent: eigenvector absent");
    if (fit_window < 4)
        throw std::invalid_argument("boundary_exponent: fit_window must be >= 4");

    const auto& psi = spec.eigenvectors[level];
    const auto& x = spec.grid.nodes;
    const std::size_t n = psi.size();

    // Indices sorted by distance to the wall; the nearest node carries the
    // largest relative stencil error and is excluded from the fit.
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(x[a] - wall) < std::abs(x[b] - wall);
    });

    if (fit_window + 1 > n) throw std::invalid_argument("boundary_exponent: window exceeds grid");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 1; i <= fit_window; ++i) {
        const std::size_t j = order[i];
        const double av = std::abs(psi[j]);
        if (av <= 1e-14)
            throw std::invalid_argument("boundary_exponent: window touches the underflow region");
        const double X = std::log(std::abs(x[j] - wall));
        const double Y = std::log(av);
        sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    }
    const double m = static_cast<double>(fit_window);
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace qaffine
