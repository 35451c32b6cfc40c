#include "qaffine/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qaffine {

void ModelSpec::validate() const {
    if (!(hbar > 0.0)) throw std::invalid_argument("model: hbar must be > 0");
    if (!(omega > 0.0)) throw std::invalid_argument("model: omega must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("model: mass must be > 0");
    if (scheme == Scheme::Affine && domain.kind == DomainKind::FullLine) {
        throw std::invalid_argument(
            "model: affine scheme on the full line is rejected "
            "(the correction is defined only when points are excluded)");
    }
    if (potential.kind == PotentialKind::Custom && !potential.fn) {
        throw std::invalid_argument("model: custom potential without a callback");
    }
}

ModelSpec ModelSpec::harmonic_oscillator(double hbar, double omega) {
    ModelSpec m;
    m.domain = DomainSpec::full_line();
    m.scheme = Scheme::Canonical;
    m.hbar = hbar;
    m.omega = omega;
    m.potential = Potential::harmonic();
    m.catalog = CatalogId::HO;
    return m;
}

ModelSpec ModelSpec::half_harmonic_oscillator(double hbar, double omega) {
    ModelSpec m;
    m.domain = DomainSpec::half_line(0.0);
    m.scheme = Scheme::Affine;
    m.hbar = hbar;
    m.omega = omega;
    m.potential = Potential::harmonic();
    m.catalog = CatalogId::HalfHO;
    return m;
}

ModelSpec ModelSpec::canonical_box(double b, double hbar) {
    ModelSpec m;
    m.domain = DomainSpec::interval(b);
    m.scheme = Scheme::Canonical;
    m.hbar = hbar;
    m.potential = Potential::none();
    m.catalog = CatalogId::CanonicalBox;
    return m;
}

ModelSpec ModelSpec::affine_box(double b, double hbar) {
    ModelSpec m;
    m.domain = DomainSpec::interval(b);
    m.scheme = Scheme::Affine;
    m.hbar = hbar;
    m.potential = Potential::none();
    m.catalog = CatalogId::Item3;
    return m;
}

ModelSpec ModelSpec::shifted_half_line(double b, Potential V, double hbar) {
    ModelSpec m;
    m.domain = DomainSpec::half_line(b);
    m.scheme = Scheme::Affine;
    m.hbar = hbar;
    m.potential = std::move(V);
    m.catalog = CatalogId::Item2;
    return m;
}

ModelSpec ModelSpec::punctured_exterior(double b, Potential V, double hbar) {
    ModelSpec m;
    m.domain = DomainSpec::punctured_exterior(b);
    m.scheme = Scheme::Affine;
    m.hbar = hbar;
    m.potential = std::move(V);
    m.catalog = CatalogId::Item4;
    return m;
}

ModelSpec ModelSpec::punctured_line(Potential V, double hbar) {
    ModelSpec m;
    m.domain = DomainSpec::punctured_line();
    m.scheme = Scheme::Affine;
    m.hbar = hbar;
    m.potential = std::move(V);
    m.catalog = CatalogId::Item5;
    return m;
}

double potential_value(const ModelSpec& model, double x) {
    switch (model.potential.kind) {
        case PotentialKind::None: return 0.0;
        case PotentialKind::Harmonic:
            return 0.5 * model.mass * model.omega * model.omega * x * x;
        case PotentialKind::Custom: return model.potential.fn(x);
    }
    return 0.0;
}

double truncation_radius(const ModelSpec& model, double energy_ceiling) {
    if (!(energy_ceiling > 0.0))
        throw std::invalid_argument("truncation_radius: energy_ceiling must be > 0");
    if (model.domain.bounded())
        throw std::invalid_argument("truncation_radius: truncation not needed (bounded domain)");

    const double target = 4.0 * energy_ceiling;
    switch (model.potential.kind) {
        case PotentialKind::None:
            throw std::invalid_argument(
                "truncation_radius: truncation not needed (potential does not grow)");
        case PotentialKind::Harmonic:
            // (1/2) m omega^2 x^2 = target
            return std::sqrt(2.0 * target / (model.mass * model.omega * model.omega));
        case PotentialKind::Custom: {
            // Probe outward until V >= target, then bisect.
            double lo = model.domain.has_wall() ? std::abs(model.domain.lower_wall()) : 0.0;
            double hi = std::max(1.0, 2.0 * lo + 1.0);
            int doublings = 0;
            while (potential_value(model, hi) < target) {
                hi *= 2.0;
                if (++doublings > 200)
                    throw std::invalid_argument(
                        "truncation_radius: truncation not needed (potential does not grow)");
            }
            for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
                const double mid = 0.5 * (lo + hi);
                (potential_value(model, mid) >= target ? hi : lo) = mid;
            }
            return hi;
        }
    }
    throw std::invalid_argument("truncation_radius: unknown potential kind");
}

}  // namespace qaffine
