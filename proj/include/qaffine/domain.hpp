#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qaffine {

// Coordinate domains with hard walls / excluded points:
//
//   FullLine              -inf < x < inf
//   HalfLine(b)             -b < x < inf     (b >= 0; b = 0 is the bare half line)
//   Interval(b)             -b < x < b       (b > 0)
//   PuncturedExterior(b)     b < |x| < inf   (b > 0)
//   PuncturedLine            0 < |x| < inf   (the b -> 0 limit of PuncturedExterior)
enum class DomainKind { FullLine, HalfLine, Interval, PuncturedExterior, PuncturedLine };

struct DomainSpec {
    DomainKind kind = DomainKind::FullLine;
    double b = 0.0;  // wall parameter (length); meaning depends on kind

    static DomainSpec full_line();
    static DomainSpec half_line(double b = 0.0);
    static DomainSpec interval(double b);
    static DomainSpec punctured_exterior(double b);
    static DomainSpec punctured_line();

    bool bounded() const { return kind == DomainKind::Interval; }
    bool has_wall() const { return kind != DomainKind::FullLine; }
    bool contains(double x) const;      // strict interior
    std::vector<double> walls() const;  // finite boundary positions
    // Lower wall of the (primary, positive-side for punctured) component.
    double lower_wall() const;
};

// Uniform grid of n interior nodes on (x_min, x_max); both endpoints are
// Dirichlet ghost points and are never nodes:
//
//   nodes[j] = x_min + (j+1) h,   h = (x_max - x_min)/(n+1),   j = 0..n-1
//
// Refining n -> 2n+1 halves h and keeps every old node (nested grids, used
// by Richardson extrapolation).
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n = 0;
    double h = 0.0;
    std::vector<double> nodes;

    static Grid1D uniform(double x_min, double x_max, std::size_t n);
    Grid1D refined() const;

    bool same_as(const Grid1D& other, double tol = 1e-12) const;
};

// Discretizes a domain.  Returns one grid, except for the punctured domains
// which yield a pair (positive half first, then its mirror); the puncture is
// the excluded endpoint of each half.  For unbounded directions the cut is
// x_max_hint when given, else a default extent of 10*max(1,b) past the wall
// (truncation_radius() in model.hpp is the principled choice of hint).
std::vector<Grid1D> build_grid(const DomainSpec& domain, std::size_t n,
                               std::optional<double> x_max_hint = std::nullopt);

}  // namespace qaffine
