#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qaffine/classical.hpp"
#include "qaffine/errors.hpp"

using namespace qaffine;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("poisson bracket: canonical maps pass, non-canonical map is flagged") {
    const std::vector<std::pair<double, double>> pts = {{0.3, 1.2}, {-0.8, 2.0}, {1.5, 0.7}};
    const double step = 1e-5;

    PhaseMap identity{[](double p, double) { return p; }, [](double, double q) { return q; },
                      {}, {}, {}, {}, {}};
    for (double r : poisson_bracket_residual(identity, pts, step)) CHECK(r < 1e-10);

    const double lam = 3.0;
    PhaseMap scale{[lam](double p, double) { return p / lam; },
                   [lam](double, double q) { return lam * q; }, {}, {}, {}, {}, {}};
    for (double r : poisson_bracket_residual(scale, pts, step)) CHECK(r < 1e-10);

    // the affine variables (d, ln q) = (pq, ln q) are canonical on q > 0
    PhaseMap dil{[](double p, double q) { return p * q; },
                 [](double, double q) { return std::log(q); }, {}, {}, {}, {},
                 {-10.0, 10.0, 0.1, 10.0}};
    for (double r : poisson_bracket_residual(dil, pts, step)) CHECK(r < 1e-8);

    PhaseMap bad{[](double p, double) { return p * p; }, [](double, double q) { return q; },
                 {}, {}, {}, {}, {}};
    const auto res = poisson_bracket_residual(bad, pts, step);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(res[i] == doctest::Approx(std::abs(2.0 * pts[i].first - 1.0)).epsilon(1e-6));
}

TEST_CASE("poisson bracket: analytic partials short-circuit the finite differences") {
    PhaseMap dil{[](double p, double q) { return p * q; },
                 [](double, double q) { return std::log(q); },
                 [](double, double q) { return q; },        // df/dp
                 [](double p, double) { return p; },        // df/dq
                 [](double, double) { return 0.0; },        // dg/dp
                 [](double, double q) { return 1.0 / q; },  // dg/dq
                 {-10.0, 10.0, 0.1, 10.0}};
    for (double r : poisson_bracket_residual(dil, {{0.4, 1.7}}, 1e-5)) CHECK(r < 1e-14);
}

TEST_CASE("poisson bracket rejects points at the rectangle edge") {
    PhaseMap dil{[](double p, double q) { return p * q; },
                 [](double, double q) { return std::log(q); }, {}, {}, {}, {},
                 {-1.0, 1.0, 0.1, 2.0}};
    CHECK_THROWS_AS((void)poisson_bracket_residual(dil, {{0.0, 0.1}}, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("half-oscillator bounce: period pi with bounces at pi/2 + k pi") {
    const ModelSpec hho = ModelSpec::half_harmonic_oscillator();
    const TrajectoryResult traj = integrate(hho, 0.0, 1.0, 1e-4, 10.0);

    CHECK(period_estimate(traj) == doctest::Approx(kPi).epsilon(1e-6));
    REQUIRE(traj.bounce_events.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(traj.bounce_events[k].wall == 0.0);
        CHECK(traj.bounce_events[k].time ==
              doctest::Approx(kPi / 2.0 + static_cast<double>(k) * kPi).epsilon(1e-6));
    }
    for (double q : traj.q_series) CHECK(q > 0.0);
}

TEST_CASE("free particle in the box: period 4b/|p0|") {
    const ModelSpec box = ModelSpec::canonical_box(1.0);
    const TrajectoryResult traj = integrate(box, 1.0, 0.25, 1e-4, 20.0);
    CHECK(period_estimate(traj) == doctest::Approx(4.0).epsilon(1e-9));
    // alternating walls
    REQUIRE(traj.bounce_events.size() >= 4);
    CHECK(traj.bounce_events[0].wall == 1.0);
    CHECK(traj.bounce_events[1].wall == -1.0);
}

TEST_CASE("full oscillator: period 2 pi, no bounce events") {
    const ModelSpec ho = ModelSpec::harmonic_oscillator();
    const TrajectoryResult traj = integrate(ho, 0.0, 1.0, 2e-4, 40.0);
    CHECK(traj.bounce_events.empty());
    CHECK(period_estimate(traj) == doctest::Approx(2.0 * kPi).epsilon(1e-6));
}

TEST_CASE("energy: no secular drift, oscillation within the verlet envelope") {
    const ModelSpec hho = ModelSpec::half_harmonic_oscillator();
    const double dt = kPi / 1e4;
    const TrajectoryResult traj = integrate(hho, 0.0, 1.0, dt, 10.0 * kPi);

    const double e0 = traj.energy_series.front();
    CHECK(std::abs(traj.energy_series.back() - e0) / e0 < 1e-10);

    // kick-drift-kick conserves p^2 + (1 - dt^2/4) q^2 exactly, so the
    // energy oscillation is bounded by (dt^2/8) max|q^2 - q0^2|.
    double max_dev = 0.0;
    for (double e : traj.energy_series) max_dev = std::max(max_dev, std::abs(e - e0));
    CHECK(max_dev <= dt * dt / 8.0 + 1e-12);
}

TEST_CASE("recurrence jitter is tiny for conservative dynamics") {
    const ModelSpec hho = ModelSpec::half_harmonic_oscillator();
    const TrajectoryResult traj = integrate(hho, 0.0, 1.0, kPi / 1e4, 12.0);
    const auto rec = recurrence_times(traj);
    REQUIRE(rec.size() >= 3);
    const double period = period_estimate(traj);
    for (std::size_t i = 0; i + 1 < rec.size(); ++i)
        CHECK(std::abs(rec[i + 1] - rec[i] - period) / period < 1e-6);
}

TEST_CASE("time reversal returns to the mirrored start") {
    const ModelSpec hho = ModelSpec::half_harmonic_oscillator();
    const double T = 1.0;
    const TrajectoryResult fwd = integrate(hho, 0.4, 0.8, 1e-4, T);
    const TrajectoryResult back =
        integrate(hho, -fwd.p_series.back(), fwd.q_series.back(), 1e-4, T);
    CHECK(back.q_series.back() == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(-back.p_series.back() == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("dilation d = pq flips sign at a box wall with q|p| preserved") {
    const ModelSpec box = ModelSpec::canonical_box(1.0);
    const TrajectoryResult traj = integrate(box, 1.0, 0.0, 1e-4, 3.0);
    REQUIRE(!traj.bounce_events.empty());
    const double tb = traj.bounce_events[0].time;
    // locate the samples straddling the bounce
    std::size_t i = 0;
    while (i + 1 < traj.times.size() && traj.times[i + 1] <= tb) ++i;
    const double d_before = traj.p_series[i] * traj.q_series[i];
    const double d_after = traj.p_series[i + 1] * traj.q_series[i + 1];
    CHECK(d_before > 0.0);
    CHECK(d_after < 0.0);
    CHECK(std::abs(d_before) == doctest::Approx(std::abs(d_after)).epsilon(1e-3));
}

TEST_CASE("dilation is continuous along half-oscillator trajectories") {
    // d(t) = p q is continuous everywhere here: at the q = 0 wall both
    // one-sided values vanish, so even the reflection preserves q|p| (= 0).
    const ModelSpec hho = ModelSpec::half_harmonic_oscillator();
    const double dt = 1e-4;
    const TrajectoryResult traj = integrate(hho, 0.0, 1.0, dt, 8.0);
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
        const double d0 = traj.p_series[i] * traj.q_series[i];
        const double d1 = traj.p_series[i + 1] * traj.q_series[i + 1];
        // |d/dt(pq)| = |p^2 - q V'(q)| <= 2E here, so steps move d by O(dt)
        CHECK(std::abs(d1 - d0) <= 2.5 * dt);
    }
}

TEST_CASE("integrate validates its inputs") {
    const ModelSpec hho = ModelSpec::half_harmonic_oscillator();
    CHECK_THROWS_AS((void)integrate(hho, 0.0, -1.0, 1e-4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate(hho, 0.0, 1.0, 0.2, 1.0), std::invalid_argument);

    // a fixed point never recurs
    const ModelSpec ho = ModelSpec::harmonic_oscillator();
    const TrajectoryResult still = integrate(ho, 0.0, 0.0, 1e-3, 5.0);
    CHECK_THROWS_AS((void)period_estimate(still), SolverError);
}
