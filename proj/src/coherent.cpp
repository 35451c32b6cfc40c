#include "qaffine/coherent.hpp"

#include <cmath>
#include <stdexcept>

#include "qaffine/errors.hpp"

namespace qaffine {

namespace {

using cplx = std::complex<double>;

void normalize_on_grid(std::vector<cplx>& s, double h) {
    double acc = 0.0;
    for (const cplx& v : s) acc += std::norm(v);
    const double nrm = std::sqrt(acc * h);
    if (!(nrm > 0.0)) throw std::invalid_argument("coherent state has zero norm on this grid");
    for (cplx& v : s) v /= nrm;
}

// Closed-form displaced wavefunctions (up to normalization).
std::vector<cplx> sample_state(const CoherentScheme& scheme, const Grid1D& grid,
                               double p, double q) {
    std::vector<cplx> s(grid.n);
    if (const auto* can = std::get_if<CanonicalScheme>(&scheme)) {
        const double w = can->omega, hb = can->hbar;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double x = grid.nodes[j];
            const double env = std::exp(-w * (x - q) * (x - q) / (2.0 * hb));
            s[j] = std::polar(env, p * x / hb);
        }
    } else {
        const auto& aff = std::get<AffineScheme>(scheme);
        if (!(q > 0.0)) throw std::invalid_argument("affine displacement requires q > 0");
        const double beta = aff.beta, hb = aff.hbar;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double u = grid.nodes[j] / q;
            if (!(u > 0.0)) throw std::invalid_argument("affine states need a grid with x > 0");
            const double env = std::pow(u, beta - 0.5) * std::exp(-beta * u);
            s[j] = std::polar(env / std::sqrt(q), p * grid.nodes[j] / hb);
        }
    }
    normalize_on_grid(s, grid.h);
    return s;
}

void check_scheme(const CoherentScheme& scheme) {
    if (const auto* can = std::get_if<CanonicalScheme>(&scheme)) {
        if (!(can->omega > 0.0) || !(can->hbar > 0.0))
            throw std::invalid_argument("canonical scheme needs omega > 0, hbar > 0");
    } else {
        const auto& aff = std::get<AffineScheme>(scheme);
        if (!(aff.hbar > 0.0)) throw std::invalid_argument("affine scheme needs hbar > 0");
        if (!(aff.beta > 0.5)) throw std::invalid_argument("fiducial not admissible: beta <= 1/2");
    }
}

}  // namespace

double scheme_hbar(const CoherentScheme& scheme) {
    return std::visit([](const auto& s) { return s.hbar; }, scheme);
}

CoherentState fiducial(const CoherentScheme& scheme, const Grid1D& grid) {
    check_scheme(scheme);
    const bool affine = std::holds_alternative<AffineScheme>(scheme);
    const double p0 = 0.0, q0 = affine ? 1.0 : 0.0;
    return CoherentState{scheme, p0, q0, sample_state(scheme, grid, p0, q0), grid};
}

CoherentState displace(const CoherentState& fid, double p, double q) {
    check_scheme(fid.scheme);
    return CoherentState{fid.scheme, p, q, sample_state(fid.scheme, fid.grid, p, q), fid.grid};
}

std::complex<double> overlap(const CoherentState& a, const CoherentState& b) {
    if (!a.grid.same_as(b.grid)) throw std::invalid_argument("overlap: grid mismatch");
    cplx acc = 0.0;
    for (std::size_t j = 0; j < a.samples.size(); ++j)
        acc += std::conj(a.samples[j]) * b.samples[j];
    return acc * a.grid.h;
}

Grid1D canonical_state_grid(const CanonicalScheme& s, double q_absmax, std::size_t n) {
    // Gaussian tails: exp(-omega X^2 / hbar) below 1e-20 at the cut.
    const double X = q_absmax + std::sqrt(92.0 * s.hbar / s.omega) + 2.0;
    return Grid1D::uniform(-X, X, n);
}

Grid1D affine_state_grid(const AffineScheme& s, double q_max, std::size_t n) {
    // |psi|^2 ~ x^{2 beta - 1} e^{-2 beta x / q}: tail mass below ~1e-20.
    const double X = q_max * (3.0 + 27.0 / s.beta);
    return Grid1D::uniform(0.0, X, n);
}

namespace {

struct MetricSample {
    MetricTensor2 g;
};

// One central-difference evaluation of the Fubini-Study form at steps
// (dp, dq):  g_ab = 2 hbar Re[ <d_a psi | d_b psi> - <d_a psi|psi><psi|d_b psi> ].
MetricTensor2 metric_once(const StateFamily& family, double hbar, double p, double q,
                          double dp, double dq) {
    const CoherentState c = family(p, q);
    const CoherentState pp = family(p + dp, q);
    const CoherentState pm = family(p - dp, q);
    const CoherentState qp = family(p, q + dq);
    const CoherentState qm = family(p, q - dq);
    const std::size_t n = c.samples.size();
    const double h = c.grid.h;

    std::vector<cplx> dpsi_p(n), dpsi_q(n);
    for (std::size_t j = 0; j < n; ++j) {
        dpsi_p[j] = (pp.samples[j] - pm.samples[j]) / (2.0 * dp);
        dpsi_q[j] = (qp.samples[j] - qm.samples[j]) / (2.0 * dq);
    }
    auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += std::conj(a[j]) * b[j];
        return acc * h;
    };
    const std::vector<cplx> cs(c.samples.begin(), c.samples.end());
    const cplx Ap = dot(cs, dpsi_p);  // <psi|d_p psi>
    const cplx Aq = dot(cs, dpsi_q);

    MetricTensor2 g;
    g.g_pp = 2.0 * hbar * (dot(dpsi_p, dpsi_p).real() - std::norm(Ap));
    g.g_qq = 2.0 * hbar * (dot(dpsi_q, dpsi_q).real() - std::norm(Aq));
    g.g_pq = 2.0 * hbar * (dot(dpsi_p, dpsi_q) - std::conj(Ap) * Aq).real();
    return g;
}

double metric_scale(const MetricTensor2& g) {
    return std::max({std::abs(g.g_pp), std::abs(g.g_qq), std::abs(g.g_pq), 1e-300});
}

}  // namespace

MetricTensor2 fs_metric_family(const StateFamily& family, double hbar, double p, double q,
                               double dp, double dq) {
    // Richardson pair (delta, delta/2): central differences are O(delta^2),
    // the combination is O(delta^4).
    const MetricTensor2 g1 = metric_once(family, hbar, p, q, dp, dq);
    const MetricTensor2 g2 = metric_once(family, hbar, p, q, dp / 2.0, dq / 2.0);
    MetricTensor2 g;
    g.g_pp = (4.0 * g2.g_pp - g1.g_pp) / 3.0;
    g.g_pq = (4.0 * g2.g_pq - g1.g_pq) / 3.0;
    g.g_qq = (4.0 * g2.g_qq - g1.g_qq) / 3.0;

    if (!g.positive_definite())
        throw std::invalid_argument("fs_metric: delta too large (metric positivity lost)");
    const double scale = metric_scale(g);
    const double mismatch =
        std::max({std::abs(g2.g_pp - g1.g_pp), std::abs(g2.g_qq - g1.g_qq),
                  std::abs(g2.g_pq - g1.g_pq)}) /
        scale;
    if (mismatch > 0.05)
        throw SolverError("fs_metric: non-convergent Richardson pair (delta ladder failure)");
    return g;
}

namespace {

StateFamily displaced_family(const CoherentState& fid) {
    // Capture scheme and grid by value; states are rebuilt in closed form.
    const CoherentScheme scheme = fid.scheme;
    const Grid1D grid = fid.grid;
    return [scheme, grid](double p, double q) {
        return CoherentState{scheme, p, q, sample_state(scheme, grid, p, q), grid};
    };
}

void label_steps(const CoherentScheme& scheme, double p, double q, double delta,
                 double& dp, double& dq) {
    dp = delta * (1.0 + std::abs(p));
    if (std::holds_alternative<AffineScheme>(scheme)) {
        if (!(q > 0.0)) throw std::invalid_argument("fs_metric: affine q must be > 0");
        dq = delta * q;
        if (!(q - dq > 0.0)) throw std::invalid_argument("fs_metric: delta too large for this q");
    } else {
        dq = delta * (1.0 + std::abs(q));
    }
    // A half step must still move the labels, or the differencing collapses.
    if (p + dp / 2.0 == p || q + dq / 2.0 == q)
        throw std::invalid_argument("fs_metric: delta too small (cancellation, label step collapses)");
}

}  // namespace

MetricTensor2 fs_metric(const CoherentScheme& scheme, const CoherentState& fid, double p,
                        double q, double delta) {
    if (!(delta > 0.0) || delta >= 0.5)
        throw std::invalid_argument("fs_metric: delta must be in (0, 1/2)");
    check_scheme(scheme);
    double dp, dq;
    label_steps(scheme, p, q, delta, dp, dq);
    return fs_metric_family(displaced_family(fid), scheme_hbar(scheme), p, q, dp, dq);
}

MetricTensor2 fs_metric_auto(const CoherentScheme& scheme, const CoherentState& fid, double p,
                             double q) {
    const double ladder[] = {1e-2, 1e-3, 1e-4};
    std::string last = "fs_metric_auto: ladder exhausted";
    for (double delta : ladder) {
        try {
            return fs_metric(scheme, fid, p, q, delta);
        } catch (const SolverError& e) {
            last = e.what();
        }
    }
    throw SolverError(last);
}

namespace {

// Gaussian curvature by the Brioschi formula, valid for non-diagonal metrics.
double brioschi(double E, double F, double G, double Ep, double Eq, double Fp, double Fq,
                double Gp, double Gq, double Eqq, double Gpp, double Fpq) {
    auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                   double a31, double a32, double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
               a13 * (a21 * a32 - a22 * a31);
    };
    const double m1 = det3(-0.5 * Eqq + Fpq - 0.5 * Gpp, 0.5 * Ep, Fp - 0.5 * Eq,
                           Fq - 0.5 * Gp, E, F,
                           0.5 * Gq, F, G);
    const double m2 = det3(0.0, 0.5 * Eq, 0.5 * Gp,
                           0.5 * Eq, E, F,
                           0.5 * Gp, F, G);
    const double w = E * G - F * F;
    return (m1 - m2) / (w * w);
}

double curvature_once(const CoherentScheme& scheme, const CoherentState& fid, double p,
                      double q, double delta, double Dp, double Dq) {
    // 3x3 stencil of metric evaluations around (p,q).
    MetricTensor2 M[3][3];
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            M[i + 1][j + 1] = fs_metric(scheme, fid, p + i * Dp, q + j * Dq, delta);

    auto derivs = [&](auto get, double& c, double& d_p, double& d_q, double& d_pp, double& d_qq,
                      double& d_pq) {
        c = get(M[1][1]);
        d_p = (get(M[2][1]) - get(M[0][1])) / (2.0 * Dp);
        d_q = (get(M[1][2]) - get(M[1][0])) / (2.0 * Dq);
        d_pp = (get(M[2][1]) - 2.0 * c + get(M[0][1])) / (Dp * Dp);
        d_qq = (get(M[1][2]) - 2.0 * c + get(M[1][0])) / (Dq * Dq);
        d_pq = (get(M[2][2]) - get(M[2][0]) - get(M[0][2]) + get(M[0][0])) / (4.0 * Dp * Dq);
    };
    double E, Ep, Eq, Epp, Eqq, Epq;
    double F, Fp, Fq, Fpp, Fqq, Fpq;
    double G, Gp, Gq, Gpp, Gqq, Gpq;
    derivs([](const MetricTensor2& m) { return m.g_pp; }, E, Ep, Eq, Epp, Eqq, Epq);
    derivs([](const MetricTensor2& m) { return m.g_pq; }, F, Fp, Fq, Fpp, Fqq, Fpq);
    derivs([](const MetricTensor2& m) { return m.g_qq; }, G, Gp, Gq, Gpp, Gqq, Gpq);
    return brioschi(E, F, G, Ep, Eq, Fp, Fq, Gp, Gq, Eqq, Gpp, Fpq);
}

}  // namespace

double scalar_curvature(const CoherentScheme& scheme, const CoherentState& fid, double p,
                        double q, double delta) {
    check_scheme(scheme);
    const double step = 0.05;
    const double Dp = step * (1.0 + std::abs(p));
    const bool affine = std::holds_alternative<AffineScheme>(scheme);
    const double Dq = affine ? step * q : step * (1.0 + std::abs(q));
    if (affine && !(q - Dq - delta * q > 0.0))
        throw std::invalid_argument("scalar_curvature: stencil leaves the q > 0 half plane");

    const double K1 = curvature_once(scheme, fid, p, q, delta, Dp, Dq);
    const double K2 = curvature_once(scheme, fid, p, q, delta, Dp / 2.0, Dq / 2.0);
    const double K = (4.0 * K2 - K1) / 3.0;
    // Consistency of the pair; the scale floor covers the flat (K = 0) case.
    const double scale = std::max(std::abs(K), 0.05);
    if (std::abs(K2 - K1) > 0.2 * scale)
        throw SolverError("scalar_curvature: non-convergent Richardson pair (delta ladder failure)");
    return 2.0 * K;  // scalar curvature of a 2-manifold is twice the Gaussian
}

}  // namespace qaffine
