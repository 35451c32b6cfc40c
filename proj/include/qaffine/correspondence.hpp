#pragma once

#include <utility>
#include <vector>

#include "qaffine/coherent.hpp"
#include "qaffine/operators.hpp"

namespace qaffine {

// Weak correspondence: H(p,q) = <p,q| Hhat |p,q> recovers the classical
// Hamiltonian as hbar -> 0.  hbar_scaling fits the decay order of
// |H_hbar(p,q) - H_cl(p,q)| against the hbar ladder, per phase-space point;
// H_cl(p,q) = p^2/2m + V(q) for both schemes (the affine barrier is itself
// O(hbar^2) and has no classical counterpart).

struct CorrespondenceReport {
    ModelSpec model;
    std::vector<std::pair<double, double>> points;
    std::vector<double> hbars;                 // strictly decreasing, > 0
    std::vector<std::vector<double>> values;   // values[i][k] = H_{hbars[k]}(points[i])
    std::vector<double> classical;             // H_cl per point
    std::vector<double> fitted_order;          // log-log slope per point
};

// h-weighted quadratic form <psi| T |psi>; real to roundoff by symmetry.
double expectation(const CoherentState& state, const TridiagonalOperator& T);

inline std::vector<double> default_hbar_ladder() { return {1.0, 0.5, 0.25, 0.125, 0.0625}; }

// scheme.hbar is overridden by each ladder value, as is model.hbar; the
// canonical omega / affine beta are held fixed.  Requires >= 3 ladder values
// spanning at least one decade.
CorrespondenceReport hbar_scaling(const ModelSpec& model, const CoherentScheme& scheme,
                                  const std::vector<std::pair<double, double>>& points,
                                  const std::vector<double>& hbars, std::size_t grid_n = 4000);

}  // namespace qaffine
