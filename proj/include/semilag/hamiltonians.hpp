#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semilag/extended_real.hpp"
#include "semilag/vec.hpp"

namespace semilag {

/// H(x,t,p)/|p| -> K uniformly as |p| -> inf; the conjugate is +inf outside B(0,K).
struct LinearAtInfinity {
    double K = 1.0;
};

/// H(x,t,p)/|p| -> inf. `radius_of(r)` bounds the maximizing p of the
/// conjugate for every |xi| <= r; it must be nondecreasing and finite.
struct Superlinear {
    std::function<double(double)> radius_of;
};

using GrowthClass = std::variant<LinearAtInfinity, Superlinear>;

using ScalarField = std::function<double(Vec x, double t)>;

struct PotentialSpec {
    enum class Type { Zero, Quadratic };
    Type type = Type::Zero;
    double omega = 0.0;  ///< V(x) = omega^2 |x|^2 / 2 when quadratic

    ScalarField as_function() const;
};

/// A convex Hamiltonian together with its transport velocity and the
/// structural constants the scheme's estimates refer to. Constants are valid
/// on the computational domain the model was built for.
///
/// Built-in models fill every field. A user-defined model needs at least
/// `hamiltonian`, `velocity`, `growth` and `dim`; the conjugate is then
/// computed numerically.
struct HamiltonianModel {
    std::string name;
    int dim = 1;

    std::function<double(Vec x, double t, Vec p)> hamiltonian;
    /// Closed-form conjugate; empty means "maximize numerically".
    std::function<ExtReal(Vec x, double t, Vec xi)> conjugate;
    std::function<Vec(Vec x, Vec p)> velocity;
    GrowthClass growth;

    double lip_x_H = 0.0;         ///< eta in |H(x,p)-H(y,p)| <= eta (1+|p|) |x-y|
    double conc_Hstar = 0.0;      ///< semiconcavity constant of H* in x
    double sup_H0 = 0.0;          ///< M = sup |H(x,t,0)|
    double lip_x_Hstar = 0.0;     ///< Lipschitz constant of H* in x on the search ball
    double hstar0_sup = 0.0;      ///< sup_x H*(x,t,0), signed
    double hstar0_abs = 0.0;      ///< sup_x |H*(x,t,0)|
    double lip_p_velocity = 1.0;  ///< Lipschitz constant of a in p

    /// r -> sup_{|p|<=r} |a(x,p)|
    std::function<double(double)> speed_bound;
    /// r -> sup_{|p|<=r} |D_p H(x,t,p)|, the Hamilton-Jacobi characteristic speed
    std::function<double(double)> char_speed;
    /// r -> inf_{x,t,|xi|=r} H*(x,t,xi); empty means "estimate from probe_points"
    std::function<double(double)> hstar_floor;

    /// Optional separable form H*(x,t,xi) = kinetic_conjugate(xi) - potential(x,t).
    std::function<ExtReal(Vec xi)> kinetic_conjugate;
    ScalarField potential;

    /// Sample locations for numerically estimated constants.
    std::vector<Vec> probe_points;
};

/// `domain_radius` is max |x| over the computational box; it only matters for
/// x-dependent potentials.
HamiltonianModel make_schrodinger(int dim, const PotentialSpec& potential, double domain_radius);
HamiltonianModel make_bethe_salpeter(int dim, const PotentialSpec& potential, double domain_radius);
HamiltonianModel make_eikonal(int dim, const PotentialSpec& potential, double domain_radius);

/// "schrodinger", "bethe-salpeter" or "eikonal".
HamiltonianModel make_model(const std::string& name, int dim, const PotentialSpec& potential,
                            double domain_radius);

/// sup_p { xi.p - H(x,t,p) }. Uses the closed form when the model has one.
ExtReal legendre_transform(const HamiltonianModel& model, Vec x, double t, Vec xi);

/// Numeric maximization ignoring any closed form: golden section in one
/// dimension, grid start plus coordinate descent in two. Throws
/// NonFiniteResult when the growth class does not match the Hamiltonian.
ExtReal numeric_legendre_transform(const HamiltonianModel& model, Vec x, double t, Vec xi);

struct FieldBounds {
    double sup_abs_u = 0.0;    ///< sup |u|
    double hstar0_sup = 0.0;   ///< sup H*(.,.,0)
};

/// Radius of a ball guaranteed to contain every minimizer of
/// xi -> u(x - xi h) + h H*(x,t,xi).
double xi_search_radius(const HamiltonianModel& model, const FieldBounds& bounds, double h);

Vec velocity(const HamiltonianModel& model, Vec x, Vec p);

/// K for linear growth, nullopt for superlinear models.
std::optional<double> linear_growth_bound(const HamiltonianModel& model);

/// Sampled spot checks of the model hypotheses.
struct ModelCheck {
    double worst_convexity_defect = 0.0;  ///< max of H(mid) - (H(a)+H(b))/2, should be <= 0
    double worst_lipschitz_ratio = 0.0;   ///< max |H(x,p)-H(y,p)| / (eta (1+|p|)|x-y|)
    double sup_velocity = 0.0;            ///< max |a| over sampled |p| <= p_radius
    bool conjugate_bounded = true;        ///< H* finite and bounded on dom H* (linear growth)
};

ModelCheck check_model(const HamiltonianModel& model, double x_radius, double p_radius,
                       int samples, unsigned long long seed);

}  // namespace semilag
