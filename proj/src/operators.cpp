#include "qaffine/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaffine {

double TridiagonalOperator::norm_bound() const {
    const std::size_t n = size();
    double bound = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double row = std::abs(diag[j]);
        if (j > 0) row += std::abs(offdiag[j - 1]);
        if (j + 1 < n) row += std::abs(offdiag[j]);
        bound = std::max(bound, row);
    }
    return bound;
}

template <typename T>
static void apply_tridiag(const std::vector<double>& d, const std::vector<double>& e,
                          std::span<const T> x, std::span<T> y) {
    const std::size_t n = d.size();
    if (x.size() != n || y.size() != n)
        throw std::invalid_argument("tridiagonal apply: size mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        T v = d[j] * x[j];
        if (j > 0) v += e[j - 1] * x[j - 1];
        if (j + 1 < n) v += e[j] * x[j + 1];
        y[j] = v;
    }
}

void TridiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
    apply_tridiag(diag, offdiag, x, y);
}

void TridiagonalOperator::apply(std::span<const std::complex<double>> x,
                                std::span<std::complex<double>> y) const {
    apply_tridiag(diag, offdiag, x, y);
}

double affine_correction(const DomainSpec& domain, double hbar, double x) {
    if (!domain.contains(x))
        throw std::invalid_argument("affine_correction: x at or outside the domain boundary");
    const double h2 = hbar * hbar;
    const double b = domain.b;
    switch (domain.kind) {
        case DomainKind::FullLine:
            return 0.0;
        case DomainKind::HalfLine: {
            const double s = x + b;  // distance to the wall
            return 0.75 * h2 / (s * s);
        }
        case DomainKind::Interval:
        case DomainKind::PuncturedExterior: {
            const double num = 2.0 * x * x + b * b;
            const double den = (b * b - x * x);
            return h2 * num / (den * den);
        }
        case DomainKind::PuncturedLine:
            return 2.0 * h2 / (x * x);
    }
    throw std::invalid_argument("affine_correction: unknown domain kind");
}

namespace {

// The grid must discretize one component of the model's domain, with the
// walls as ghost endpoints.
void check_grid_matches(const ModelSpec& model, const Grid1D& grid) {
    const double tol = 1e-9 * std::max(1.0, std::abs(grid.x_max) + std::abs(grid.x_min));
    const double b = model.domain.b;
    auto near = [tol](double a, double c) { return std::abs(a - c) <= tol; };
    bool ok = true;
    switch (model.domain.kind) {
        case DomainKind::FullLine: break;
        case DomainKind::HalfLine: ok = near(grid.x_min, -b); break;
        case DomainKind::Interval: ok = near(grid.x_min, -b) && near(grid.x_max, b); break;
        case DomainKind::PuncturedExterior:
            ok = near(grid.x_min, b) || near(grid.x_max, -b);
            break;
        case DomainKind::PuncturedLine:
            ok = near(grid.x_min, 0.0) || near(grid.x_max, 0.0);
            break;
    }
    if (!ok) throw std::invalid_argument("assemble: grid does not match the model's domain");
}

}  // namespace

TridiagonalOperator assemble(const ModelSpec& model, const Grid1D& grid) {
    model.validate();
    check_grid_matches(model, grid);

    TridiagonalOperator T;
    T.grid = grid;
    T.hbar = model.hbar;
    T.mass = model.mass;

    const std::size_t n = grid.n;
    const double kin = model.hbar * model.hbar / (model.mass * grid.h * grid.h);
    T.diag.resize(n);
    T.offdiag.assign(n - 1, -0.5 * kin);
    for (std::size_t j = 0; j < n; ++j) {
        double v = potential_value(model, grid.nodes[j]);
        if (model.scheme == Scheme::Affine) {
            v += affine_correction(model.domain, model.hbar, grid.nodes[j]) / (2.0 * model.mass);
        }
        T.diag[j] = kin + v;
    }
    return T;
}

std::vector<std::complex<double>> DilationMatrix::apply(
    std::span<const std::complex<double>> f) const {
    const std::size_t n = grid.n;
    if (f.size() != n) throw std::invalid_argument("dilation apply: size mismatch");
    const auto& x = grid.nodes;
    const std::complex<double> scale(0.0, -hbar / (4.0 * grid.h));
    std::vector<std::complex<double>> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> v = 0.0;
        if (j + 1 < n) v += (x[j] + x[j + 1]) * f[j + 1];
        if (j > 0) v -= (x[j] + x[j - 1]) * f[j - 1];
        out[j] = scale * v;
    }
    return out;
}

std::complex<double> DilationMatrix::expectation(std::span<const std::complex<double>> f) const {
    const auto df = apply(f);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) acc += std::conj(f[j]) * df[j];
    return acc * grid.h;
}

DilationMatrix dilation_matrix(const Grid1D& grid, double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("dilation_matrix: hbar must be > 0");
    return DilationMatrix{grid, hbar};
}

namespace {

// Test functions for the kinetic identity must be interior-supported:
// |f| decaying at least quadratically into both walls (so f, f', f'' all
// vanish there), checked as a log-log slope over the nodes within 5h.
void check_interior_support(const Grid1D& grid, const std::vector<double>& f) {
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    if (fmax == 0.0)
        throw std::invalid_argument("kinetic identity: degenerate (identically zero) input");

    const std::size_t w = 5;
    for (int side = 0; side < 2; ++side) {
        const double wall = side == 0 ? grid.x_min : grid.x_max;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = 0;
        bool negligible = true;
        for (std::size_t i = 0; i < w && i < grid.n; ++i) {
            const std::size_t j = side == 0 ? i : grid.n - 1 - i;
            const double av = std::abs(f[j]);
            if (av > 1e-13 * fmax) negligible = false;
            if (av <= 0.0) continue;
            const double X = std::log(std::abs(grid.nodes[j] - wall));
            const double Y = std::log(av);
            sx += X; sy += Y; sxx += X * X; sxy += X * Y;
            ++m;
        }
        if (negligible) continue;  // numerically compact support
        if (m < 3)
            throw std::invalid_argument("kinetic identity: test function vanishes irregularly at a wall");
        const double denom = static_cast<double>(m) * sxx - sx * sx;
        const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
        if (slope < 1.9)
            throw std::invalid_argument(
                "kinetic identity: test function is not interior-supported "
                "(near-wall decay slope < 2)");
    }
}

}  // namespace

double kinetic_identity_residual(const Grid1D& grid, double hbar,
                                 const std::vector<std::function<double(double)>>& testfns) {
    if (testfns.empty())
        throw std::invalid_argument("kinetic identity: no test functions");
    for (double x : grid.nodes) {
        if (std::abs(x) < 0.5 * grid.h)
            throw std::invalid_argument("kinetic identity: grid has a node at x ~ 0 (Q^{-2} blows up)");
    }

    const DilationMatrix D = dilation_matrix(grid, hbar);
    const std::size_t n = grid.n;
    const double h2 = hbar * hbar;
    double worst = 0.0;

    for (const auto& fn : testfns) {
        std::vector<double> f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = fn(grid.nodes[j]);
        check_interior_support(grid, f);

        std::vector<std::complex<double>> fc(f.begin(), f.end());
        // lhs = D Q^{-2} D f
        auto df = D.apply(fc);
        for (std::size_t j = 0; j < n; ++j) df[j] /= grid.nodes[j] * grid.nodes[j];
        auto lhs = D.apply(df);
        // rhs = P^2 f + (3/4) hbar^2 Q^{-2} f, Dirichlet ghosts
        std::complex<double> dot = 0.0;
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double lap = -2.0 * f[j];
            if (j > 0) lap += f[j - 1];
            if (j + 1 < n) lap += f[j + 1];
            const double x = grid.nodes[j];
            const double rhs = -h2 * lap / (grid.h * grid.h) + 0.75 * h2 * f[j] / (x * x);
            dot += std::conj(fc[j]) * (lhs[j] - rhs);
            norm += f[j] * f[j];
        }
        worst = std::max(worst, std::abs(dot) / norm);
    }
    return worst;
}

double boundary_term(std::span<const double> f, std::span<const double> g, const Grid1D& grid) {
    const std::size_t n = grid.n;
    if (f.size() != n || g.size() != n)
        throw std::invalid_argument("boundary_term: sample size mismatch");

    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = f[j] * g[j];

    // Trapezoid of w' with quadratically extrapolated endpoint derivatives:
    // exact for linear w, O(h^2) in general.
    const double h = grid.h;
    std::vector<double> dw(n);
    dw[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
    dw[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
    for (std::size_t j = 1; j + 1 < n; ++j) dw[j] = (w[j + 1] - w[j - 1]) / (2.0 * h);

    // Derivative at the ghost endpoints from the quadratic through the three
    // nearest nodes (which sit at distances h, 2h, 3h from the endpoint).
    const double da = (-5.0 * w[0] + 8.0 * w[1] - 3.0 * w[2]) / (2.0 * h);
    const double db = (5.0 * w[n - 1] - 8.0 * w[n - 2] + 3.0 * w[n - 3]) / (2.0 * h);

    double acc = 0.5 * (da + db);
    for (std::size_t j = 0; j < n; ++j) acc += dw[j];
    return acc * h;
}

}  // namespace qaffine
