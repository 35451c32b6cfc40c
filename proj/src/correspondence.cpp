#include "qaffine/correspondence.hpp"

#include <cmath>
#include <stdexcept>

#include "qaffine/errors.hpp"

namespace qaffine {

double expectation(const CoherentState& state, const TridiagonalOperator& T) {
    if (!state.grid.same_as(T.grid)) throw std::invalid_argument("expectation: grid mismatch");
    const std::size_t n = state.samples.size();
    std::vector<std::complex<double>> y(n);
    T.apply(state.samples, y);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::conj(state.samples[j]) * y[j];
    acc *= state.grid.h;
    // Hermiticity: the form is real up to roundoff.
    const double scale = std::max(std::abs(acc.real()), T.norm_bound());
    if (std::abs(acc.imag()) > 1e-10 * scale)
        throw SolverError("expectation: lost Hermiticity (imaginary part too large)");
    return acc.real();
}

namespace {

// Fit slope of log|diff| against log hbar; near-zero differences are
// excluded (they carry no order information, only roundoff).
double fit_order(const std::vector<double>& hbars, const std::vector<double>& diffs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    double dmax = 0.0;
    for (double d : diffs) dmax = std::max(dmax, std::abs(d));
    if (dmax == 0.0) throw std::invalid_argument("hbar_scaling: degenerate fit (all differences zero)");
    for (std::size_t i = 0; i < hbars.size(); ++i) {
        if (std::abs(diffs[i]) < 1e-12 * dmax) continue;
        const double X = std::log(hbars[i]);
        const double Y = std::log(std::abs(diffs[i]));
        sx += X; sy += Y; sxx += X * X; sxy += X * Y;
        ++m;
    }
    if (m < 3) throw std::invalid_argument("hbar_scaling: degenerate fit (fewer than 3 usable points)");
    const double dm = static_cast<double>(m);
    return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

Grid1D scaling_grid(const ModelSpec& model, const CoherentScheme& scheme, double q_absmax,
                    double hbar_max, std::size_t n) {
    if (const auto* aff = std::get_if<AffineScheme>(&scheme)) {
        const bool origin_wall =
            (model.domain.kind == DomainKind::HalfLine && model.domain.b == 0.0) ||
            model.domain.kind == DomainKind::PuncturedLine;
        if (!origin_wall)
            throw std::invalid_argument(
                "hbar_scaling: affine coherent states require the wall at the origin "
                "(half line with b = 0, or the punctured line)");
        return affine_state_grid(*aff, q_absmax, n);
    }
    CanonicalScheme c = std::get<CanonicalScheme>(scheme);
    c.hbar = hbar_max;  // widest state of the ladder
    if (model.domain.kind == DomainKind::FullLine) return canonical_state_grid(c, q_absmax, n);
    // Canonical v-wall models: clip the state grid at the wall.
    const double wall = model.domain.lower_wall();
    const double X = q_absmax + std::sqrt(92.0 * c.hbar / c.omega) + 2.0;
    return Grid1D::uniform(wall, std::max(X, wall + 1.0), n);
}

}  // namespace

CorrespondenceReport hbar_scaling(const ModelSpec& model, const CoherentScheme& scheme,
                                  const std::vector<std::pair<double, double>>& points,
                                  const std::vector<double>& hbars, std::size_t grid_n) {
    model.validate();
    if (hbars.size() < 3) throw std::invalid_argument("hbar_scaling: need >= 3 hbar values");
    for (std::size_t i = 0; i + 1 < hbars.size(); ++i)
        if (!(hbars[i] > hbars[i + 1]) || !(hbars[i + 1] > 0.0))
            throw std::invalid_argument("hbar_scaling: hbars must be strictly decreasing and > 0");
    if (hbars.front() / hbars.back() < 10.0)
        throw std::invalid_argument("hbar_scaling: ladder must span at least one decade");
    const bool affine = std::holds_alternative<AffineScheme>(scheme);
    for (const auto& [p, q] : points) {
        (void)p;
        if (affine && !(q > 0.0))
            throw std::invalid_argument("hbar_scaling: affine points need q > 0");
        if (!model.domain.contains(q))
            throw std::invalid_argument("hbar_scaling: point outside the domain");
    }

    CorrespondenceReport rep;
    rep.model = model;
    rep.points = points;
    rep.hbars = hbars;
    rep.values.resize(points.size());
    rep.classical.resize(points.size());
    rep.fitted_order.resize(points.size());

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [p, q] = points[i];
        const Grid1D grid = scaling_grid(model, scheme, std::abs(q), hbars.front(), grid_n);
        rep.classical[i] = p * p / (2.0 * model.mass) + potential_value(model, q);

        std::vector<double> diffs(hbars.size());
        rep.values[i].resize(hbars.size());
        const Grid1D fine = grid.refined();
        for (std::size_t k = 0; k < hbars.size(); ++k) {
            ModelSpec mh = model;
            mh.hbar = hbars[k];
            CoherentScheme sh = scheme;
            std::visit([&](auto& s) { s.hbar = hbars[k]; }, sh);
            // Richardson over the nested grid pair removes the O(h^2)
            // stencil bias of the quadratic form.
            double v[2];
            for (int lvl = 0; lvl < 2; ++lvl) {
                const Grid1D& g = lvl == 0 ? grid : fine;
                const TridiagonalOperator T = assemble(mh, g);
                const CoherentState state = displace(fiducial(sh, g), p, q);
                v[lvl] = expectation(state, T);
            }
            rep.values[i][k] = (4.0 * v[1] - v[0]) / 3.0;
            diffs[k] = rep.values[i][k] - rep.classical[i];
        }
        rep.fitted_order[i] = fit_order(hbars, diffs);
    }
    return rep;
}

}  // namespace qaffine
