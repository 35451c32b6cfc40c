#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qaffine/model.hpp"

namespace qaffine {

// Classical side: Poisson-bracket checks for phase-space variable changes,
// and symplectic integration of the catalog Hamiltonians with hard
// reflecting walls ("the ball bounces backwards at the wall").

// A candidate change of variables pbar = f(p,q), qbar = g(p,q) on an open
// rectangle.  Analytic partials are optional; central differences are used
// where they are absent.
struct PhaseMap {
    std::function<double(double, double)> f;  // new momentum
    std::function<double(double, double)> g;  // new coordinate
    std::function<double(double, double)> df_dp, df_dq, dg_dp, dg_dq;  // optional

    struct Rect {
        double p_lo = -1e30, p_hi = 1e30, q_lo = -1e30, q_hi = 1e30;
    } rect;
};

// |{qbar, pbar} - 1| per point, where
// {qbar,pbar} = dg/dq df/dp - dg/dp df/dq.  Canonical maps give 0.
std::vector<double> poisson_bracket_residual(const PhaseMap& map,
                                             const std::vector<std::pair<double, double>>& points,
                                             double fd_step);

struct BounceEvent {
    double time;
    double wall;
};

struct TrajectoryResult {
    double p0 = 0.0, q0 = 0.0;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> p_series;
    std::vector<double> q_series;
    std::vector<double> energy_series;  // H(p,q) = p^2/2m + V(q)
    std::vector<BounceEvent> bounce_events;
};

// Velocity-Verlet (leapfrog) between walls; wall crossings located by
// bisection in time to 1e-12, then elastic specular reflection (p -> -p,
// q unchanged) -- the only energy-conserving restitution.  Samples are
// recorded at multiples of dt and stay strictly inside the domain.
TrajectoryResult integrate(const ModelSpec& model, double p0, double q0,
                           double dt, double t_end);

// Times of successive recurrences: upward interpolated crossings of the
// section q = q0, p > 0; for trajectories started at a turning point
// (p0 = 0, where that section is tangential) the upper turning points
// (p: + -> - away from bounces) are used instead.
std::vector<double> recurrence_times(const TrajectoryResult& traj);

// Mean recurrence interval over >= 3 recurrences (SolverError otherwise).
double period_estimate(const TrajectoryResult& traj);

}  // namespace qaffine
