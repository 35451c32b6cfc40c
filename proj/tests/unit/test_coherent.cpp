#include <cmath>
#include <complex>

#include "doctest.h"
#include "helpers.hpp"
#include "qaffine/coherent.hpp"
#include "qaffine/errors.hpp"
#include "qaffine/operators.hpp"

using namespace qaffine;
using testutil::cplx;

namespace {

double q_moment(const CoherentState& st, int power) {
    return testutil::diag_expectation(st, [power](double x) { return std::pow(x, power); });
}

}  // namespace

TEST_CASE("affine fiducial: <Q> = 1 and <D> = 0 from the defining condition") {
    // Gamma-function oracle for |psi|^2 ~ x^{2b-1} e^{-2bx}:
    // <x> = (2b)/(2b) = 1 exactly, for every admissible beta.
    for (double beta : {1.0, 2.0, 3.5}) {
        const AffineScheme s{beta, 1.0};
        const Grid1D g = affine_state_grid(s, 1.0, 20000);
        const CoherentState fid = fiducial(CoherentScheme{s}, g);

        CHECK(q_moment(fid, 1) == doctest::Approx(1.0).epsilon(1e-6));

        const DilationMatrix D = dilation_matrix(g, s.hbar);
        CHECK(std::abs(D.expectation(fid.samples)) < 1e-8);

        // second moment oracle: <x^2> = 1 + 1/(2 beta)
        CHECK(q_moment(fid, 2) == doctest::Approx(1.0 + 0.5 / beta).epsilon(1e-5));
    }
}

TEST_CASE("canonical fiducial: <P> = <Q> = 0") {
    const CanonicalScheme s{1.0, 1.0};
    const Grid1D g = canonical_state_grid(s, 0.0, 4000);
    const CoherentState fid = fiducial(CoherentScheme{s}, g);
    CHECK(std::abs(q_moment(fid, 1)) < 1e-8);
    CHECK(std::abs(testutil::momentum_expectation(fid, s.hbar)) < 1e-8);
}

TEST_CASE("inadmissible affine fiducial is rejected") {
    const Grid1D g = Grid1D::uniform(0.0, 10.0, 100);
    CHECK_THROWS_WITH_AS((void)fiducial(CoherentScheme{AffineScheme{0.5, 1.0}}, g),
                         doctest::Contains("fiducial not admissible"), std::invalid_argument);
    CHECK_THROWS_AS((void)fiducial(CoherentScheme{AffineScheme{0.2, 1.0}}, g),
                    std::invalid_argument);
}

TEST_CASE("displacement: identity at the fiducial label, labels land on <Q>, <P>, <D>") {
    const AffineScheme s{2.0, 1.0};
    const Grid1D g = affine_state_grid(s, 2.5, 20000);
    const CoherentState fid = fiducial(CoherentScheme{s}, g);

    const CoherentState same = displace(fid, 0.0, 1.0);
    for (std::size_t j = 0; j < g.n; j += 503)
        CHECK(std::abs(same.samples[j] - fid.samples[j]) < 1e-12);

    const DilationMatrix D = dilation_matrix(g, s.hbar);
    for (auto [p, q] : {std::pair{0.7, 1.4}, std::pair{-1.1, 0.6}, std::pair{2.0, 2.2}}) {
        const CoherentState st = displace(fid, p, q);
        CHECK(q_moment(st, 1) == doctest::Approx(q).epsilon(2e-5));
        CHECK(D.expectation(st.samples).real() == doctest::Approx(p * q).epsilon(2e-4));
    }

    CHECK_THROWS_AS((void)displace(fid, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)displace(fid, 0.0, 0.0), std::invalid_argument);

    const CanonicalScheme cs{1.0, 1.0};
    const Grid1D gc = canonical_state_grid(cs, 2.0, 6000);
    const CoherentState cfid = fiducial(CoherentScheme{cs}, gc);
    for (auto [p, q] : {std::pair{0.5, 1.0}, std::pair{-1.0, -1.5}}) {
        const CoherentState st = displace(cfid, p, q);
        CHECK(q_moment(st, 1) == doctest::Approx(q).epsilon(1e-8));
        CHECK(testutil::momentum_expectation(st, cs.hbar) == doctest::Approx(p).epsilon(1e-4));
    }
}

TEST_CASE("affine covariance law: <aD + bQ> = a pq + b q") {
    const AffineScheme s{1.0, 1.0};
    testutil::Rng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
        const double p = rng.uniform(-1.0, 1.0), q = rng.uniform(0.5, 2.0);
        // Richardson over the nested grid pair removes the O(h^2) stencil bias.
        double vals[2];
        for (int lvl = 0; lvl < 2; ++lvl) {
            const std::size_t n = lvl == 0 ? 4000 : 8001;
            const Grid1D g = affine_state_grid(s, 2.0, n);
            const CoherentState st = displace(fiducial(CoherentScheme{s}, g), p, q);
            const DilationMatrix D = dilation_matrix(g, s.hbar);
            vals[lvl] = a * D.expectation(st.samples).real() + b * q_moment(st, 1);
        }
        const double ext = (4.0 * vals[1] - vals[0]) / 3.0;
        CHECK(std::abs(ext - (a * p * q + b * q)) < 1e-6);
    }
}

TEST_CASE("overlap: normalization, gaussian oracle, strict positivity") {
    const CanonicalScheme s{1.0, 1.0};
    const Grid1D g = canonical_state_grid(s, 3.0, 6000);
    const CoherentState fid = fiducial(CoherentScheme{s}, g);
    CHECK(std::abs(overlap(fid, fid) - 1.0) < 1e-12);

    // |<0,0|0,q>| = exp(-omega q^2 / 4 hbar)
    for (double q : {0.3, 1.0, 2.2}) {
        const CoherentState st = displace(fid, 0.0, q);
        CHECK(std::abs(overlap(fid, st)) ==
              doctest::Approx(std::exp(-q * q / 4.0)).epsilon(1e-8));
    }

    testutil::Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const CoherentState a = displace(fid, rng.uniform(-2, 2), rng.uniform(-2, 2));
        const CoherentState b = displace(fid, rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double ov = std::abs(overlap(a, b));
        CHECK(ov > 0.0);            // coherent states are never orthogonal
        CHECK(ov <= 1.0 + 1e-8);    // cauchy-schwarz on normalized states
    }

    const Grid1D other = Grid1D::uniform(-5.0, 5.0, 100);
    const CoherentState mismatched = fiducial(CoherentScheme{s}, other);
    CHECK_THROWS_AS((void)overlap(fid, mismatched), std::invalid_argument);
}

TEST_CASE("fubini-study metric: canonical is cartesian") {
    for (auto [omega, hbar, p, q] : {std::tuple{1.0, 1.0, 0.0, 0.0},
                                     std::tuple{2.0, 0.5, 1.3, -0.4}}) {
        const CanonicalScheme s{omega, hbar};
        const Grid1D g = canonical_state_grid(s, std::abs(q) + 1.0, 6000);
        const CoherentState fid = fiducial(CoherentScheme{s}, g);
        const MetricTensor2 m = fs_metric(CoherentScheme{s}, fid, p, q, 1e-2);
        CHECK(m.g_pp == doctest::Approx(1.0 / omega).epsilon(1e-4));
        CHECK(m.g_qq == doctest::Approx(omega).epsilon(1e-4));
        CHECK(std::abs(m.g_pq) < 1e-4);
        CHECK(m.positive_definite());
    }
}

TEST_CASE("fubini-study metric: affine closed form q^2/(beta hbar), (beta hbar)/q^2") {
    for (auto [beta, hbar, p, q] : {std::tuple{1.0, 1.0, 0.0, 1.0},
                                    std::tuple{1.0, 1.0, 0.7, 1.6},
                                    std::tuple{2.0, 0.5, -1.2, 0.6},
                                    std::tuple{2.0, 1.0, 0.0, 2.0}}) {
        const AffineScheme s{beta, hbar};
        const Grid1D g = affine_state_grid(s, q * 1.5 + 0.5, 8000);
        const CoherentState fid = fiducial(CoherentScheme{s}, g);
        const MetricTensor2 m = fs_metric_auto(CoherentScheme{s}, fid, p, q);
        CHECK(m.g_pp == doctest::Approx(q * q / (beta * hbar)).epsilon(1e-4));
        CHECK(m.g_qq == doctest::Approx(beta * hbar / (q * q)).epsilon(1e-4));
        CHECK(std::abs(m.g_pq) < 1e-4 * m.g_pp);
        CHECK(m.positive_definite());
    }
}

TEST_CASE("metric is invariant under a smooth phase twist of the family") {
    const AffineScheme s{1.0, 1.0};
    const Grid1D g = affine_state_grid(s, 2.0, 6000);
    const CoherentState fid = fiducial(CoherentScheme{s}, g);

    const StateFamily plain = [&](double p, double q) { return displace(fid, p, q); };
    const StateFamily twisted = [&](double p, double q) {
        CoherentState st = displace(fid, p, q);
        const double f = 0.3 * p + 0.7 * p * q - 0.2 * q * q;
        const cplx phase = std::polar(1.0, f);
        for (auto& v : st.samples) v *= phase;
        return st;
    };

    const double p = 0.4, q = 1.3, dp = 1e-2, dq = 1e-2;
    const MetricTensor2 a = fs_metric_family(plain, s.hbar, p, q, dp, dq);
    const MetricTensor2 b = fs_metric_family(twisted, s.hbar, p, q, dp, dq);
    CHECK(a.g_pp == doctest::Approx(b.g_pp).epsilon(1e-6));
    CHECK(a.g_pq == doctest::Approx(b.g_pq).epsilon(1e-6));
    CHECK(a.g_qq == doctest::Approx(b.g_qq).epsilon(1e-6));
}

TEST_CASE("fs_metric rejects oversized and collapsing deltas") {
    const AffineScheme s{1.0, 1.0};
    const Grid1D g = affine_state_grid(s, 2.0, 2000);
    const CoherentState fid = fiducial(CoherentScheme{s}, g);
    CHECK_THROWS_AS((void)fs_metric(CoherentScheme{s}, fid, 0.0, 1.0, 0.9),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)fs_metric(CoherentScheme{s}, fid, 0.0, 1.0, 1e-17),
                    std::invalid_argument);
}

TEST_CASE("scalar curvature: flat canonical, constant negative affine") {
    const CanonicalScheme cs{1.0, 1.0};
    const Grid1D gc = canonical_state_grid(cs, 2.0, 4000);
    const CoherentState cfid = fiducial(CoherentScheme{cs}, gc);
    CHECK(std::abs(scalar_curvature(CoherentScheme{cs}, cfid, 0.5, -0.3, 1e-3)) < 1e-3);

    const AffineScheme as{1.0, 1.0};
    const Grid1D ga = affine_state_grid(as, 1.6, 4000);
    const CoherentState afid = fiducial(CoherentScheme{as}, ga);
    CHECK(scalar_curvature(CoherentScheme{as}, afid, 0.0, 1.0, 1e-3) ==
          doctest::Approx(-2.0).epsilon(1e-2));

    // beta = 2, hbar = 1: R = -1 at different labels (constancy)
    const AffineScheme a2{2.0, 1.0};
    const Grid1D g2 = affine_state_grid(a2, 3.0, 4000);
    const CoherentState fid2 = fiducial(CoherentScheme{a2}, g2);
    const double r1 = scalar_curvature(CoherentScheme{a2}, fid2, 3.0, 0.5, 1e-3);
    const double r2 = scalar_curvature(CoherentScheme{a2}, fid2, 0.0, 2.0, 1e-3);
    CHECK(r1 == doctest::Approx(-1.0).epsilon(1e-2));
    CHECK(r2 == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("coherent states are h-normalized on their grid") {
    const AffineScheme s{1.5, 0.7};
    const Grid1D g = affine_state_grid(s, 2.0, 3000);
    const CoherentState st = displace(fiducial(CoherentScheme{s}, g), 0.8, 1.7);
    double nrm = 0.0;
    for (const auto& v : st.samples) nrm += std::norm(v);
    CHECK(nrm * g.h == doctest::Approx(1.0).epsilon(1e-8));
}
