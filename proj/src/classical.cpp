#include "qaffine/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "qaffine/errors.hpp"

namespace qaffine {

namespace {

double partial(const std::function<double(double, double)>& fn, bool wrt_p, double p, double q,
               double step) {
    if (wrt_p) return (fn(p + step, q) - fn(p - step, q)) / (2.0 * step);
    return (fn(p, q + step) - fn(p, q - step)) / (2.0 * step);
}

}  // namespace

std::vector<double> poisson_bracket_residual(const PhaseMap& map,
                                             const std::vector<std::pair<double, double>>& points,
                                             double fd_step) {
    if (!map.f || !map.g) throw std::invalid_argument("poisson bracket: map lacks f or g");
    if (!(fd_step > 0.0)) throw std::invalid_argument("poisson bracket: fd_step must be > 0");

    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& [p, q] : points) {
        if (p - fd_step < map.rect.p_lo || p + fd_step > map.rect.p_hi ||
            q - fd_step < map.rect.q_lo || q + fd_step > map.rect.q_hi)
            throw std::invalid_argument("poisson bracket: point too close to the rectangle edge");

        const double gf_q = map.dg_dq ? map.dg_dq(p, q) : partial(map.g, false, p, q, fd_step);
        const double gf_p = map.dg_dp ? map.dg_dp(p, q) : partial(map.g, true, p, q, fd_step);
        const double ff_p = map.df_dp ? map.df_dp(p, q) : partial(map.f, true, p, q, fd_step);
        const double ff_q = map.df_dq ? map.df_dq(p, q) : partial(map.f, false, p, q, fd_step);
        out.push_back(std::abs(gf_q * ff_p - gf_p * ff_q - 1.0));
    }
    return out;
}

namespace {

double force(const ModelSpec& model, double q) {
    switch (model.potential.kind) {
        case PotentialKind::None: return 0.0;
        case PotentialKind::Harmonic: return -model.mass * model.omega * model.omega * q;
        case PotentialKind::Custom: {
            const double s = 1e-6 * std::max(1.0, std::abs(q));
            return -(model.potential.fn(q + s) - model.potential.fn(q - s)) / (2.0 * s);
        }
    }
    return 0.0;
}

double energy(const ModelSpec& model, double p, double q) {
    return p * p / (2.0 * model.mass) + potential_value(model, q);
}

// Active walls for a classical particle starting at q0: the reachable
// boundaries of the connected component containing q0.
struct Walls {
    double lo = -1e300;
    double hi = 1e300;
};

Walls active_walls(const DomainSpec& d, double q0) {
    Walls w;
    switch (d.kind) {
        case DomainKind::FullLine: break;
        case DomainKind::HalfLine: w.lo = -d.b + 0.0; break;  // avoid -0.0
        case DomainKind::Interval: w.lo = -d.b; w.hi = d.b; break;
        case DomainKind::PuncturedExterior:
            if (q0 > 0) w.lo = d.b; else w.hi = -d.b;
            break;
        case DomainKind::PuncturedLine:
            if (q0 > 0) w.lo = 0.0; else w.hi = 0.0;
            break;
    }
    return w;
}

// One velocity-Verlet (kick-drift-kick) step of size tau.
void vv_step(const ModelSpec& model, double tau, double& p, double& q) {
    const double ph = p + 0.5 * tau * force(model, q);
    q += tau * ph / model.mass;
    p = ph + 0.5 * tau * force(model, q);
}

std::optional<double> characteristic_period(const ModelSpec& model, double p0) {
    if (model.potential.kind == PotentialKind::Harmonic)
        return 2.0 * std::numbers::pi / model.omega;
    if (model.potential.kind == PotentialKind::None && model.domain.bounded() && p0 != 0.0)
        return 4.0 * model.domain.b * model.mass / std::abs(p0);
    return std::nullopt;
}

}  // namespace

TrajectoryResult integrate(const ModelSpec& model, double p0, double q0, double dt,
                           double t_end) {
    model.validate();
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("integrate: dt and t_end must be > 0");
    if (!model.domain.contains(q0))
        throw std::invalid_argument("integrate: initial condition outside the domain");
    if (auto T = characteristic_period(model, p0); T && dt >= *T / 100.0)
        throw std::invalid_argument("integrate: dt too large (>= characteristic period / 100)");

    const Walls walls = active_walls(model.domain, q0);
    TrajectoryResult out;
    out.p0 = p0;
    out.q0 = q0;
    out.dt = dt;

    const std::size_t steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-12)));
    out.times.reserve(steps + 1);
    out.p_series.reserve(steps + 1);
    out.q_series.reserve(steps + 1);
    out.energy_series.reserve(steps + 1);

    double p = p0, q = q0, t = 0.0;
    auto record = [&]() {
        out.times.push_back(t);
        out.p_series.push_back(p);
        out.q_series.push_back(q);
        out.energy_series.push_back(energy(model, p, q));
    };
    record();

    for (std::size_t s = 0; s < steps; ++s) {
        double remaining = std::min(dt, t_end - t);
        // Sub-step across wall reflections until the step is consumed.
        int guard = 0;
        while (remaining > 0.0) {
            double tp = p, tq = q;
            vv_step(model, remaining, tp, tq);
            if (tq > walls.lo && tq < walls.hi) {
                p = tp;
                q = tq;
                t += remaining;
                break;
            }
            // Crossing: bisect the sub-step length until the endpoint sits on
            // the wall to 1e-12 in time.
            const double wall = (tq <= walls.lo) ? walls.lo : walls.hi;
            double a = 0.0, b = remaining;
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                double mp = p, mq = q;
                vv_step(model, mid, mp, mq);
                const bool crossed = (wall == walls.lo) ? (mq <= wall) : (mq >= wall);
                (crossed ? b : a) = mid;
            }
            const double tau = 0.5 * (a + b);
            vv_step(model, tau, p, q);
            q = wall;     // land exactly on the wall
            p = -p;       // elastic reflection, energy preserved
            t += tau;
            remaining -= tau;
            out.bounce_events.push_back({t, wall});
            if (++guard > 64)
                throw SolverError("integrate: too many reflections within one step");
        }
        record();
    }
    return out;
}

std::vector<double> recurrence_times(const TrajectoryResult& traj) {
    const auto& t = traj.times;
    const auto& p = traj.p_series;
    const auto& q = traj.q_series;
    const std::size_t n = t.size();
    std::vector<double> rec;
    if (n < 3) return rec;

    double qmin = q[0], qmax = q[0], pmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        qmin = std::min(qmin, q[i]);
        qmax = std::max(qmax, q[i]);
        pmax = std::max(pmax, std::abs(p[i]));
    }
    if (qmax - qmin < 1e-12 * std::max(1.0, std::abs(traj.q0)) || pmax == 0.0)
        return rec;  // fixed point

    auto bounce_in = [&](double ta, double tb) {
        for (const auto& ev : traj.bounce_events)
            if (ev.time > ta && ev.time <= tb) return true;
        return false;
    };

    if (std::abs(traj.p0) > 1e-12 * pmax) {
        // Upward crossings of the section q = q0 with p > 0.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double s0 = q[i] - traj.q0, s1 = q[i + 1] - traj.q0;
            if (s0 < 0.0 && s1 >= 0.0 && p[i] > 0.0 && p[i + 1] > 0.0) {
                rec.push_back(t[i] + (t[i + 1] - t[i]) * (-s0) / (s1 - s0));
            }
        }
    } else {
        // Started at a turning point: use upper turning points (p: + -> -,
        // continuous, i.e. not produced by a reflection).
        const double qmid = 0.5 * (qmin + qmax);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (p[i] > 0.0 && p[i + 1] <= 0.0 && q[i] > qmid && !bounce_in(t[i], t[i + 1])) {
                rec.push_back(t[i] + (t[i + 1] - t[i]) * p[i] / (p[i] - p[i + 1]));
            }
        }
    }
    return rec;
}

double period_estimate(const TrajectoryResult& traj) {
    const std::vector<double> rec = recurrence_times(traj);
    if (rec.size() < 3) throw SolverError("period_estimate: no recurrences (need >= 3)");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rec.size(); ++i) acc += rec[i + 1] - rec[i];
    return acc / static_cast<double>(rec.size() - 1);
}

}  // namespace qaffine
