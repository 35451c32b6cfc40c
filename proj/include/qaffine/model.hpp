#pragma once

#include <functional>
#include <string>

#include "qaffine/domain.hpp"

namespace qaffine {

// Quantization scheme.  Affine adds the domain's hbar^2 barrier term to the
// potential (see affine_correction in operators.hpp); Canonical is the bare
// Dirichlet ("v-wall") operator.
enum class Scheme { Canonical, Affine };

enum class PotentialKind { None, Harmonic, Custom };

struct Potential {
    PotentialKind kind = PotentialKind::None;
    std::function<double(double)> fn;  // used when kind == Custom

    static Potential none() { return {}; }
    static Potential harmonic() { return {PotentialKind::Harmonic, {}}; }
    static Potential custom(std::function<double(double)> f) {
        return {PotentialKind::Custom, std::move(f)};
    }
};

// Named models:  Item1..Item5 are the affine catalog
//   1.  0 < q < inf,        H = p^2/2 + V(q)
//   2. -b < q < inf,        H = p^2/2 + V(q)
//   3. -b < q < b,          H = p^2/2
//   4.  b < |q| < inf,      H = p^2/2 + V(q)
//   5.  0 < |q| < inf,      H = p^2/2 + V(q)
// HO / HalfHO are the (half-)harmonic oscillator; CanonicalBox is the
// Dirichlet particle in a box.
enum class CatalogId { Generic, Item1, Item2, Item3, Item4, Item5, HO, HalfHO, CanonicalBox };

struct ModelSpec {
    DomainSpec domain;
    Scheme scheme = Scheme::Canonical;
    double hbar = 1.0;
    double omega = 1.0;
    double mass = 1.0;
    Potential potential;
    CatalogId catalog = CatalogId::Generic;

    // Throws std::invalid_argument on bad parameters; notably the affine
    // scheme on the full line is rejected (no excluded point, no correction).
    void validate() const;

    static ModelSpec harmonic_oscillator(double hbar = 1.0, double omega = 1.0);
    static ModelSpec half_harmonic_oscillator(double hbar = 1.0, double omega = 1.0);
    static ModelSpec canonical_box(double b, double hbar = 1.0);
    static ModelSpec affine_box(double b, double hbar = 1.0);  // catalog item 3
    static ModelSpec shifted_half_line(double b, Potential V, double hbar = 1.0);  // item 2
    static ModelSpec punctured_exterior(double b, Potential V, double hbar = 1.0); // item 4
    static ModelSpec punctured_line(Potential V, double hbar = 1.0);               // item 5
};

double potential_value(const ModelSpec& model, double x);

// Truncation point for unbounded domains: the smallest x past the wall with
// V(x) >= 4 * energy_ceiling, so eigenfunctions below the ceiling are
// exponentially negligible at the Dirichlet cut.  Throws
// std::invalid_argument when truncation is not needed (bounded domain) or
// the potential does not grow.
double truncation_radius(const ModelSpec& model, double energy_ceiling);

}  // namespace qaffine
