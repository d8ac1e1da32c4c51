#pragma once

// Problem definitions: force fields, initial data, source terms, and the
// model variants (Riemann-Liouville form vs. the Caputo-left comparator).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracfp/fem1d.hpp"
#include "fracfp/fracops.hpp"
#include "fracfp/meshing.hpp"

namespace fracfp {

enum class ForceKind { Zero, SinTPlusX, SinXPlusT, AffineInT, Custom };

/// Space-time dependent drift F(x,t).  Custom is a linear combination of
/// {1, x, t, sin x, sin t, cos x, cos t}, which covers every force used by
/// the built-in experiments.  Bounded on any [a,b] x [0,T].
struct ForceField {
    ForceKind kind = ForceKind::Zero;
    // AffineInT: coeffs[0] + coeffs[1]*t.  Custom: the 7-term basis above.
    std::array<double, 7> coeffs{};

    double operator()(double x, double t) const {
        switch (kind) {
            case ForceKind::Zero: return 0.0;
            case ForceKind::SinTPlusX: return std::sin(t) + x;
            case ForceKind::SinXPlusT: return std::sin(x) + t;
            case ForceKind::AffineInT: return coeffs[0] + coeffs[1] * t;
            case ForceKind::Custom:
                return coeffs[0] + coeffs[1] * x + coeffs[2] * t + coeffs[3] * std::sin(x) +
                       coeffs[4] * std::sin(t) + coeffs[5] * std::cos(x) + coeffs[6] * std::cos(t);
        }
        throw std::logic_error("ForceField: unknown kind");
    }

    /// Sampled sup-norm bound over [a,b] x [0,T] (the theorem's F_inf),
    /// from an equispaced samples x samples grid.
    double sup_norm_sampled(const SpaceGrid& grid, double T, int samples = 200) const {
        double sup = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double x = grid.a + (grid.b - grid.a) * i / double(samples - 1);
            for (int j = 0; j < samples; ++j) {
                const double t = T * j / double(samples - 1);
                sup = std::max(sup, std::abs((*this)(x, t)));
            }
        }
        return sup;
    }
};

inline ForceField make_force(ForceKind kind, std::span<const double> params = {}) {
    ForceField f;
    f.kind = kind;
    switch (kind) {
        case ForceKind::Zero:
        case ForceKind::SinTPlusX:
        case ForceKind::SinXPlusT:
            if (!params.empty())
                throw std::invalid_argument("make_force: kind takes no parameters");
            break;
        case ForceKind::AffineInT:
            if (params.size() != 2)
                throw std::invalid_argument("make_force: AffineInT takes params [a, b] for a + b*t");
            f.coeffs[0] = params[0];
            f.coeffs[1] = params[1];
            break;
        case ForceKind::Custom:
            if (params.size() != 7)
                throw std::invalid_argument(
                    "make_force: Custom takes 7 coefficients for {1, x, t, sin x, sin t, cos x, cos t}");
            for (std::size_t i = 0; i < 7; ++i) f.coeffs[i] = params[i];
            break;
    }
    return f;
}

/// Nodal interpolation of the Gaussian density with the end values forced to
/// zero so the Dirichlet constraint is met exactly.
inline NodalField gaussian_initial(const SpaceGrid& grid, double sigma, double mu) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_initial: sigma must be positive");
    NodalField psi(grid.num_nodes());
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t i = 0; i <= grid.nx; ++i) {
        const double z = (grid.nodes[i] - mu) / sigma;
        psi[i] = norm * std::exp(-0.5 * z * z);
    }
    psi[0] = 0.0;
    psi[grid.nx] = 0.0;
    return psi;
}

enum class InitialKind { Gaussian, SineMode, NodalVector };

/// Initial datum; resolve() produces the nodal field on a grid.
/// SineMode is sin(m pi (x-a)/(b-a)), the Dirichlet eigenmode.
struct InitialDatum {
    InitialKind kind = InitialKind::Gaussian;
    double sigma = 0.1;
    double mu = 2.0;
    int wavenumber = 1;
    std::vector<double> values; // NodalVector only

    NodalField resolve(const SpaceGrid& grid) const {
        switch (kind) {
            case InitialKind::Gaussian:
                return gaussian_initial(grid, sigma, mu);
            case InitialKind::SineMode: {
                if (wavenumber < 1)
                    throw std::invalid_argument("InitialDatum: wavenumber must be >= 1");
                NodalField psi(grid.num_nodes());
                const double pi = 3.14159265358979323846;
                for (std::size_t i = 0; i <= grid.nx; ++i)
                    psi[i] = std::sin(wavenumber * pi * (grid.nodes[i] - grid.a) / (grid.b - grid.a));
                psi[0] = 0.0;
                psi[grid.nx] = 0.0;
                return psi;
            }
            case InitialKind::NodalVector: {
                if (values.size() != grid.num_nodes())
                    throw std::invalid_argument("InitialDatum: nodal vector length mismatch");
                return NodalField(values);
            }
        }
        throw std::logic_error("InitialDatum: unknown kind");
    }
};

/// Exact integral of the P1 interpolant, 1^T M psi.  Column sums of the mass
/// matrix are h on interior nodes and h/2 at the ends.
inline double discrete_mass(const SpaceGrid& grid, const NodalField& field) {
    if (field.size() != grid.num_nodes())
        throw std::invalid_argument("discrete_mass: size mismatch");
    double acc = 0.5 * (field[0] + field[grid.nx]);
    for (std::size_t i = 1; i < grid.nx; ++i) acc += field[i];
    return acc * grid.h;
}

enum class ModelVariant { RiemannLiouville, CaputoLeft };

/// Boundary handling for the per-step linear systems.  Dirichlet replaces
/// the end rows (the experiments' setting).  Natural keeps the plain
/// Galerkin rows, whose built-in boundary condition is total no-flux; this
/// is the setting in which the constant test function is admissible and
/// discrete mass conservation is exact.
enum class BoundaryTreatment { Dirichlet, Natural };

/// Full problem definition for the time marcher.
struct ProblemSpec {
    FractionalOrder alpha{0.5};
    double D = 1.0;
    SpaceGrid grid;
    GradedTimeMesh tmesh;
    ForceField force;
    InitialDatum initial;
    std::function<double(double, double)> source; // f(x,t); empty means zero
    ModelVariant variant = ModelVariant::RiemannLiouville;
    BoundaryTreatment boundary = BoundaryTreatment::Dirichlet;

    void validate() const {
        if (!(D > 0.0)) throw std::invalid_argument("ProblemSpec: D must be positive");
        if (grid.nx < 2) throw std::invalid_argument("ProblemSpec: grid not initialized");
        if (tmesh.N < 1) throw std::invalid_argument("ProblemSpec: time mesh not initialized");
    }
};

} // namespace fracfp
