#include "qaffine/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace qaffine {

DomainSpec DomainSpec::full_line() { return {DomainKind::FullLine, 0.0}; }

DomainSpec DomainSpec::half_line(double b) {
    if (!(b >= 0.0)) throw std::invalid_argument("HalfLine requires b >= 0");
    return {DomainKind::HalfLine, b};
}

DomainSpec DomainSpec::interval(double b) {
    if (!(b > 0.0)) throw std::invalid_argument("Interval requires b > 0");
    return {DomainKind::Interval, b};
}

DomainSpec DomainSpec::punctured_exterior(double b) {
    if (!(b > 0.0)) throw std::invalid_argument("PuncturedExterior requires b > 0");
    return {DomainKind::PuncturedExterior, b};
}

DomainSpec DomainSpec::punctured_line() { return {DomainKind::PuncturedLine, 0.0}; }

bool DomainSpec::contains(double x) const {
    switch (kind) {
        case DomainKind::FullLine: return true;
        case DomainKind::HalfLine: return x > -b;
        case DomainKind::Interval: return x > -b && x < b;
        case DomainKind::PuncturedExterior: return std::abs(x) > b;
        case DomainKind::PuncturedLine: return x != 0.0;
    }
    return false;
}

std::vector<double> DomainSpec::walls() const {
    switch (kind) {
        case DomainKind::FullLine: return {};
        case DomainKind::HalfLine: return {-b + 0.0};  // avoid -0.0 for b = 0
        case DomainKind::Interval: return {-b, b};
        case DomainKind::PuncturedExterior: return {-b, b};
        case DomainKind::PuncturedLine: return {0.0};
    }
    return {};
}

double DomainSpec::lower_wall() const {
    switch (kind) {
        case DomainKind::FullLine:
            throw std::invalid_argument("full line has no wall");
        case DomainKind::HalfLine: return -b + 0.0;
        case DomainKind::Interval: return -b;
        case DomainKind::PuncturedExterior: return b;  // positive-side component
        case DomainKind::PuncturedLine: return 0.0;
    }
    return 0.0;
}

Grid1D Grid1D::uniform(double x_min, double x_max, std::size_t n) {
    if (n < 3) throw std::invalid_argument("grid needs n >= 3 interior nodes");
    if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.h = (x_max - x_min) / static_cast<double>(n + 1);
    g.nodes.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        g.nodes[j] = x_min + static_cast<double>(j + 1) * g.h;
    }
    return g;
}

Grid1D Grid1D::refined() const { return uniform(x_min, x_max, 2 * n + 1); }

bool Grid1D::same_as(const Grid1D& other, double tol) const {
    return n == other.n && std::abs(x_min - other.x_min) <= tol &&
           std::abs(x_max - other.x_max) <= tol;
}

namespace {

double default_extent(double b) { return 10.0 * std::max(1.0, b); }

}  // namespace

std::vector<Grid1D> build_grid(const DomainSpec& domain, std::size_t n,
                               std::optional<double> x_max_hint) {
    if (n < 3) throw std::invalid_argument("build_grid: n >= 3 required");
    const double b = domain.b;

    switch (domain.kind) {
        case DomainKind::FullLine: {
            const double X = x_max_hint.value_or(default_extent(0.0));
            if (!(X > 0.0)) throw std::invalid_argument("build_grid: x_max_hint must be > 0");
            return {Grid1D::uniform(-X, X, n)};
        }
        case DomainKind::HalfLine: {
            const double X = x_max_hint.value_or(-b + default_extent(b));
            if (!(X > -b))
                throw std::invalid_argument("build_grid: x_max_hint inside the excluded region");
            return {Grid1D::uniform(-b, X, n)};
        }
        case DomainKind::Interval: {
            // The walls are the exact endpoints; no hint applies.
            return {Grid1D::uniform(-b, b, n)};
        }
        case DomainKind::PuncturedExterior: {
            const double X = x_max_hint.value_or(b + default_extent(b));
            if (!(X > b))
                throw std::invalid_argument("build_grid: x_max_hint inside the excluded region");
            return {Grid1D::uniform(b, X, n), Grid1D::uniform(-X, -b, n)};
        }
        case DomainKind::PuncturedLine: {
            const double X = x_max_hint.value_or(default_extent(0.0));
            if (!(X > 0.0))
                throw std::invalid_argument("build_grid: x_max_hint inside the excluded region");
            return {Grid1D::uniform(0.0, X, n), Grid1D::uniform(-X, 0.0, n)};
        }
    }
    throw std::invalid_argument("build_grid: unknown domain kind");
}

}  // namespace qaffine
