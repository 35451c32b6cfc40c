#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qaffine/model.hpp"

namespace qaffine {

// Real symmetric tridiagonal Hamiltonian on a grid:
//
//   diag[j]    = hbar^2/(m h^2) + V_total(x_j)
//   offdiag[j] = -hbar^2/(2 m h^2)
//
// where V_total(x) = V(x) + affine_correction(x)/(2m) for the affine scheme.
// Dirichlet ghost endpoints are implicit.
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<double> offdiag;  // size n-1
    Grid1D grid;
    double hbar = 1.0;
    double mass = 1.0;

    std::size_t size() const { return diag.size(); }
    // Gershgorin bound max_j(|d_j| + |e_{j-1}| + |e_j|); the natural scale
    // for eigenvalue tolerances.
    double norm_bound() const;

    void apply(std::span<const double> x, std::span<double> y) const;
    void apply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const;
};

// The extra quantum potential of the affine scheme, as the bare bracket term
// (the caller applies the global 1/(2m) of the Hamiltonian):
//
//   HalfLine(b)           (3/4) hbar^2 / (x+b)^2
//   Interval(b)           hbar^2 (2x^2 + b^2) / (b^2 - x^2)^2
//   PuncturedExterior(b)  hbar^2 (2x^2 + b^2) / (b^2 - x^2)^2
//   PuncturedLine         2 hbar^2 / x^2
//   FullLine              0
//
// Each expression is >= 0 on the domain interior.  Throws on x at or outside
// the boundary.
double affine_correction(const DomainSpec& domain, double hbar, double x);

// 3-point stencil for -hbar^2/(2m) d^2/dx^2 with Dirichlet ghosts, plus
// V_total on the diagonal.  The grid must have been built for model.domain.
TridiagonalOperator assemble(const ModelSpec& model, const Grid1D& grid);

// Dilation operator D = [P^dag Q + Q P]/2 = -i hbar (x d/dx + 1/2),
// discretized with centered differences in the symmetrized form
// -i hbar (X C + C X)/2 (C = centered first difference, X = diag(x)).
// The matrix is exactly Hermitian and purely off-diagonal:
//
//   (D f)_j = -i hbar [ (x_j + x_{j+1}) f_{j+1} - (x_j + x_{j-1}) f_{j-1} ] / (4h)
struct DilationMatrix {
    Grid1D grid;
    double hbar = 1.0;

    std::vector<std::complex<double>> apply(std::span<const std::complex<double>> f) const;
    std::complex<double> expectation(std::span<const std::complex<double>> f) const;
};

DilationMatrix dilation_matrix(const Grid1D& grid, double hbar);

// Residual of the kinetic identity D Q^{-2} D = P^2 + (3/4) hbar^2 / Q^2 on
// interior-supported test functions:
//
//   max_f  | <f| D Q^{-2} D - P^2 - (3/4) hbar^2 Q^{-2} |f> | / <f|f>
//
// Vanishes as O(h^2) under grid refinement.  Test functions must vanish with
// two derivatives within 5h of both grid ends (checked via the near-wall
// log-log decay slope); identically-zero functions are rejected.
double kinetic_identity_residual(const Grid1D& grid, double hbar,
                                 const std::vector<std::function<double(double)>>& testfns);

// Quadrature of the total derivative integral(a..b) d/dx [f g] dx from node
// samples of f and g, with one-sided boundary extrapolation.  Equals
// f(b)g(b) - f(a)g(a) to O(h^2); nonzero values witness P^dag != P when the
// product does not vanish at the walls.
double boundary_term(std::span<const double> f, std::span<const double> g, const Grid1D& grid);

}  // namespace qaffine
