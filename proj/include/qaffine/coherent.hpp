#pragma once

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "qaffine/domain.hpp"

namespace qaffine {

// Coherent states and the Fubini-Study geometry of their label manifold.
//
// Canonical (full line), fiducial [Q + iP/omega]|w> = 0:
//   psi_0(x)      ~ exp(-omega x^2 / 2 hbar)
//   psi_{p,q}(x)  = e^{ipx/hbar} psi_0(x - q)
//
// Affine (half line, Q > 0), fiducial [(Q-1) + iD/(beta hbar)]|b> = 0 with
// D = -i hbar (x d/dx + 1/2):
//   psi_b(x)      ~ x^{beta - 1/2} exp(-beta x)        (beta > 1/2)
//   psi_{p;q}(x)  = e^{ipx/hbar} q^{-1/2} psi_b(x/q)   (q > 0)
// so that <Q> = q and <D> = pq.
//
// Fubini-Study metric on the (p,q) labels:
//   dsigma^2 = 2 hbar [ || d|p,q> ||^2 - |<p,q| d |p,q>|^2 ]
// The subtracted term removes any smooth phase e^{if(p,q)} attached to the
// family.  Closed forms: canonical  omega^{-1} dp^2 + omega dq^2  (flat);
// affine  (beta hbar)^{-1} q^2 dp^2 + (beta hbar) q^{-2} dq^2, a surface of
// constant scalar curvature -2/(beta hbar).

struct CanonicalScheme {
    double omega = 1.0;
    double hbar = 1.0;
};

struct AffineScheme {
    double beta = 1.0;
    double hbar = 1.0;
};

using CoherentScheme = std::variant<CanonicalScheme, AffineScheme>;

double scheme_hbar(const CoherentScheme& scheme);

struct CoherentState {
    CoherentScheme scheme;
    double p = 0.0;
    double q = 0.0;
    std::vector<std::complex<double>> samples;  // h-weighted norm 1
    Grid1D grid;
};

struct MetricTensor2 {
    double g_pp = 0.0;
    double g_pq = 0.0;
    double g_qq = 0.0;

    double det() const { return g_pp * g_qq - g_pq * g_pq; }
    bool positive_definite() const { return g_pp > 0.0 && g_qq > 0.0 && det() > 0.0; }
};

// Fiducial state at (p,q) = (0,0) canonical / (0,1) affine.  The affine
// scheme requires beta > 1/2 ("fiducial not admissible" otherwise: the
// wavefunction would not vanish at the origin and the label-manifold
// quadratures lose their convergence) and a half-line-style grid (x > 0).
CoherentState fiducial(const CoherentScheme& scheme, const Grid1D& grid);

// U(p,q) applied to the fiducial, evaluated in closed form on fid's grid.
// Affine displacement requires q > 0 (it dilates by ln q).
CoherentState displace(const CoherentState& fid, double p, double q);

// h-weighted inner product <a|b> = h * sum conj(a_j) b_j (same grid).
std::complex<double> overlap(const CoherentState& a, const CoherentState& b);

// Grids sized so that displaced-state tails are negligible at the cut.
Grid1D canonical_state_grid(const CanonicalScheme& s, double q_absmax, std::size_t n);
Grid1D affine_state_grid(const AffineScheme& s, double q_max, std::size_t n);

// Fubini-Study metric at (p,q) from second-order central differences of the
// state family in its labels, with an internal (delta, delta/2) Richardson
// pair.  Throws std::invalid_argument when delta is too large (positivity
// lost) and SolverError when the pair is inconsistent (cancellation).
MetricTensor2 fs_metric(const CoherentScheme& scheme, const CoherentState& fid,
                        double p, double q, double delta);

// As fs_metric, walking the ladder delta in {1e-2, 1e-3, 1e-4} until the
// Richardson pair is consistent.
MetricTensor2 fs_metric_auto(const CoherentScheme& scheme, const CoherentState& fid,
                             double p, double q);

// Scalar curvature R = 2K of the label metric, by finite-differencing
// fs_metric over a 3x3 stencil in (p,q) and applying the Brioschi formula
// (valid for non-diagonal metrics), with a step-halving Richardson pair.
// Label-independent by construction: 0 canonical, -2/(beta hbar) affine.
double scalar_curvature(const CoherentScheme& scheme, const CoherentState& fid,
                        double p, double q, double delta);

// Metric machinery over an arbitrary state family (used to assert phase
// robustness: multiplying the family by e^{if(p,q)} leaves the metric
// unchanged).  The family must return states on one fixed grid.
using StateFamily = std::function<CoherentState(double p, double q)>;
MetricTensor2 fs_metric_family(const StateFamily& family, double hbar,
                               double p, double q, double dp, double dq);

}  // namespace qaffine
