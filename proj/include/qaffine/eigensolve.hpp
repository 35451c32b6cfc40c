#pragma once

#include <cstddef>
#include <vector>

#include "qaffine/operators.hpp"

namespace qaffine {

enum class EigenMethod { QL, Bisection };

// Sorted eigenvalues of a symmetric tridiagonal operator, optionally with
// h-weighted-normalized eigenvectors (h * sum psi_j^2 = 1).
struct Spectrum {
    std::vector<double> eigenvalues;                 // strictly increasing
    std::vector<std::vector<double>> eigenvectors;   // may be empty
    Grid1D grid;
    EigenMethod method = EigenMethod::QL;
    bool extrapolated = false;
};

// All eigenvalues by the implicit-shift QL algorithm (eigenvalues only;
// O(n^2)).  Throws SolverError past 50 sweeps on any index.
Spectrum eigen_ql(const TridiagonalOperator& T);

// Lowest k eigenvalues by Sturm-sequence bisection to an absolute tolerance
// of 1e-12 * norm_bound, with eigenvectors by inverse iteration (residual
// ||T psi - E psi|| <= 1e-8 * norm_bound each).
Spectrum eigen_bisection(const TridiagonalOperator& T, std::size_t k);

// Number of eigenvalues of T strictly below lambda (Sturm sign count).
std::size_t sturm_count(const TridiagonalOperator& T, double lambda);

// (4 E_{h/2} - E_h)/3 for the first k levels, cancelling the O(h^2) stencil
// error.  `fine` must be computed on the refined (h -> h/2, nested) grid.
std::vector<double> richardson(const Spectrum& coarse, const Spectrum& fine, std::size_t k);

// E_{n+1} - E_n for n = 0..count-1.
std::vector<double> level_spacings(const Spectrum& spec, std::size_t count);

// Least-squares slope of log|psi| vs log(distance to wall) over the
// fit_window nodes nearest the wall, excluding the nearest node (largest
// relative stencil error).  Indicial values: 3/2 for the (3/4)hbar^2/x^2
// barrier, 2 for 2 hbar^2/x^2, 1 for a bare Dirichlet wall.
double boundary_exponent(const Spectrum& spec, std::size_t level, double wall,
                         std::size_t fit_window);

}  // namespace qaffine
