#include "semilag/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "golden.hpp"
#include "semilag/errors.hpp"

namespace semilag {

namespace {

struct PotentialConstants {
    double sup = 0.0;   // sup V on the domain
    double inf = 0.0;   // inf V on the domain
    double lip = 0.0;   // Lipschitz constant of V in x
};

PotentialConstants potential_constants(const PotentialSpec& spec, double domain_radius) {
    if (spec.type == PotentialSpec::Type::Zero) return {};
    const double w2 = spec.omega * spec.omega;
    return {0.5 * w2 * domain_radius * domain_radius, 0.0, w2 * domain_radius};
}

std::vector<Vec> default_probes(int dim, double radius) {
    std::vector<Vec> pts;
    const double r = std::max(radius, 1.0);
    const double c[] = {-r, -0.5 * r, 0.0, 0.5 * r, r};
    if (dim == 1) {
        for (double a : c) pts.emplace_back(a);
    } else {
        for (double a : c)
            for (double b : c) pts.emplace_back(a, b);
    }
    return pts;
}

HamiltonianModel with_potential(HamiltonianModel m, const PotentialSpec& spec, double radius) {
    m.potential = spec.as_function();
    auto kinetic = m.kinetic_conjugate;
    auto pot = m.potential;
    m.conjugate = [kinetic, pot](Vec x, double t, Vec xi) -> ExtReal {
        const ExtReal k = kinetic(xi);
        if (k.is_infinite()) return k;
        return ExtReal(k.value() - pot(x, t));
    };
    m.probe_points = default_probes(m.dim, radius);
    return m;
}

double project_to_ball(double coord, double other, double radius) {
    const double lim = std::sqrt(std::max(0.0, radius * radius - other * other));
    return std::clamp(coord, -lim, lim);
}

struct NumericMax {
    double value;
    Vec arg;
};

// Maximizes xi.p - H(x,t,p) over the ball B(0,R).
NumericMax maximize_on_ball(const HamiltonianModel& model, Vec x, double t, Vec xi, double R) {
    constexpr double tol = 1e-10;
    auto g = [&](Vec p) { return dot(xi, p) - model.hamiltonian(x, t, p); };
    if (model.dim == 1) {
        auto best = detail::golden_min([&](double p) { return -g(Vec(p)); }, -R, R, tol);
        return {-best.value, Vec(best.arg)};
    }
    constexpr int n = 101;
    Vec best_p;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec p(-R + 2.0 * R * i / (n - 1), -R + 2.0 * R * j / (n - 1));
            if (norm2(p) > R * R) continue;
            const double v = g(p);
            if (v > best_v) {
                best_v = v;
                best_p = p;
            }
        }
    }
    // Coordinate ascent; the objective is concave so each line search is exact.
    const double span = 2.0 * R / (n - 1);
    for (int sweep = 0; sweep < 200; ++sweep) {
        const Vec before = best_p;
        for (int axis = 0; axis < 2; ++axis) {
            const double other = axis == 0 ? best_p.y : best_p.x;
            const double lo = project_to_ball(best_p[axis] - span, other, R);
            const double hi = project_to_ball(best_p[axis] + span, other, R);
            auto line = detail::golden_min(
                [&](double s) {
                    Vec p = best_p;
                    p[axis] = s;
                    return -g(p);
                },
                lo, hi, tol);
            if (-line.value >= best_v) {
                best_v = -line.value;
                best_p[axis] = line.arg;
            }
        }
        if (norm(best_p - before) < tol) break;
    }
    return {best_v, best_p};
}

bool on_boundary(Vec p, double R) { return norm(p) > R * (1.0 - 1e-6); }

}  // namespace

ScalarField PotentialSpec::as_function() const {
    if (type == Type::Zero) return [](Vec, double) { return 0.0; };
    const double w2 = omega * omega;
    return [w2](Vec x, double) { return 0.5 * w2 * norm2(x); };
}

HamiltonianModel make_schrodinger(int dim, const PotentialSpec& spec, double domain_radius) {
    const auto pc = potential_constants(spec, domain_radius);
    HamiltonianModel m;
    m.name = "schrodinger";
    m.dim = dim;
    auto pot = spec.as_function();
    m.hamiltonian = [pot](Vec x, double t, Vec p) { return 0.5 * norm2(p) + pot(x, t); };
    m.kinetic_conjugate = [](Vec xi) { return ExtReal(0.5 * norm2(xi)); };
    m.velocity = [](Vec, Vec p) { return p; };
    // argmax p = xi; the margin keeps it strictly inside the search ball
    m.growth = Superlinear{[](double r) { return 2.0 * r + 1.0; }};
    m.lip_x_H = pc.lip;
    m.conc_Hstar = 0.0;  // -V is concave for convex V
    m.sup_H0 = std::max(std::abs(pc.sup), std::abs(pc.inf));
    m.lip_x_Hstar = pc.lip;
    m.hstar0_sup = -pc.inf;
    m.hstar0_abs = std::max(std::abs(pc.sup), std::abs(pc.inf));
    m.lip_p_velocity = 1.0;
    m.speed_bound = [](double r) { return r; };
    m.char_speed = [](double r) { return r; };
    const double supv = pc.sup;
    m.hstar_floor = [supv](double r) { return 0.5 * r * r - supv; };
    return with_potential(std::move(m), spec, domain_radius);
}

HamiltonianModel make_bethe_salpeter(int dim, const PotentialSpec& spec, double domain_radius) {
    const auto pc = potential_constants(spec, domain_radius);
    HamiltonianModel m;
    m.name = "bethe-salpeter";
    m.dim = dim;
    auto pot = spec.as_function();
    m.hamiltonian = [pot](Vec x, double t, Vec p) {
        return std::sqrt(0.5 * norm2(p) + 1.0) + pot(x, t);
    };
    m.kinetic_conjugate = [](Vec xi) -> ExtReal {
        const double s = 1.0 - 2.0 * norm2(xi);
        if (s < 0.0) return ExtReal::infinity();
        return ExtReal(-std::sqrt(s));
    };
    m.velocity = [](Vec, Vec p) { return (1.0 / std::sqrt(0.5 * norm2(p) + 1.0)) * p; };
    m.growth = LinearAtInfinity{1.0 / std::numbers::sqrt2};
    m.lip_x_H = pc.lip;
    m.conc_Hstar = 0.0;
    m.sup_H0 = std::max(std::abs(1.0 + pc.sup), std::abs(1.0 + pc.inf));
    m.lip_x_Hstar = pc.lip;
    m.hstar0_sup = -1.0 - pc.inf;
    m.hstar0_abs = std::max(std::abs(1.0 + pc.sup), std::abs(1.0 + pc.inf));
    m.lip_p_velocity = 1.0;
    m.speed_bound = [](double r) { return r / std::sqrt(0.5 * r * r + 1.0); };
    m.char_speed = [](double r) { return 0.5 * r / std::sqrt(0.5 * r * r + 1.0); };
    return with_potential(std::move(m), spec, domain_radius);
}

HamiltonianModel make_eikonal(int dim, const PotentialSpec& spec, double domain_radius) {
    const auto pc = potential_constants(spec, domain_radius);
    HamiltonianModel m;
    m.name = "eikonal";
    m.dim = dim;
    auto pot = spec.as_function();
    m.hamiltonian = [pot](Vec x, double t, Vec p) { return norm(p) + pot(x, t); };
    m.kinetic_conjugate = [](Vec xi) -> ExtReal {
        if (norm2(xi) > 1.0) return ExtReal::infinity();
        return ExtReal(0.0);
    };
    // D_p H = p/|p| is discontinuous at 0; the transport uses the reference field a = p.
    m.velocity = [](Vec, Vec p) { return p; };
    m.growth = LinearAtInfinity{1.0};
    m.lip_x_H = pc.lip;
    m.conc_Hstar = 0.0;
    m.sup_H0 = std::max(std::abs(pc.sup), std::abs(pc.inf));
    m.lip_x_Hstar = pc.lip;
    m.hstar0_sup = -pc.inf;
    m.hstar0_abs = std::max(std::abs(pc.sup), std::abs(pc.inf));
    m.lip_p_velocity = 1.0;
    m.speed_bound = [](double r) { return r; };
    m.char_speed = [](double) { return 1.0; };
    return with_potential(std::move(m), spec, domain_radius);
}

HamiltonianModel make_model(const std::string& name, int dim, const PotentialSpec& potential,
                            double domain_radius) {
    if (dim != 1 && dim != 2)
        throw Error(ErrorKind::InvalidArgument, "dimension must be 1 or 2");
    if (name == "schrodinger") return make_schrodinger(dim, potential, domain_radius);
    if (name == "bethe-salpeter") return make_bethe_salpeter(dim, potential, domain_radius);
    if (name == "eikonal") return make_eikonal(dim, potential, domain_radius);
    throw Error(ErrorKind::InvalidArgument, "unknown model '" + name + "'");
}

std::optional<double> linear_growth_bound(const HamiltonianModel& model) {
    if (const auto* lin = std::get_if<LinearAtInfinity>(&model.growth)) return lin->K;
    return std::nullopt;
}

ExtReal numeric_legendre_transform(const HamiltonianModel& model, Vec x, double t, Vec xi) {
    if (const auto* lin = std::get_if<LinearAtInfinity>(&model.growth)) {
        if (norm(xi) > lin->K) return ExtReal::infinity();
        // The sup need not be attained (|xi| = K); grow the ball until the
        // maximizer is interior or the value has settled.
        double R = 8.0;
        NumericMax prev = maximize_on_ball(model, x, t, xi, R);
        for (int i = 0; i < 40; ++i) {
            if (!std::isfinite(prev.value))
                throw Error(ErrorKind::NonFiniteResult, "conjugate maximization diverged");
            if (!on_boundary(prev.arg, R)) return ExtReal(prev.value);
            R *= 2.0;
            NumericMax next = maximize_on_ball(model, x, t, xi, R);
            if (std::abs(next.value - prev.value) <= 1e-12 * (1.0 + std::abs(next.value)))
                return ExtReal(next.value);
            prev = next;
        }
        throw Error(ErrorKind::NonFiniteResult,
                    "conjugate keeps growing with the search radius; is K misdeclared?");
    }
    const auto& sup = std::get<Superlinear>(model.growth);
    const double R = sup.radius_of(norm(xi));
    if (!(R > 0.0) || !std::isfinite(R))
        throw Error(ErrorKind::NonFiniteResult, "radius function returned a non-finite radius");
    const NumericMax best = maximize_on_ball(model, x, t, xi, R);
    if (!std::isfinite(best.value))
        throw Error(ErrorKind::NonFiniteResult, "conjugate maximization diverged");
    if (on_boundary(best.arg, R))
        throw Error(ErrorKind::NonFiniteResult,
                    "maximizer reached the search radius; growth class misdeclared?");
    return ExtReal(best.value);
}

ExtReal legendre_transform(const HamiltonianModel& model, Vec x, double t, Vec xi) {
    if (model.conjugate) return model.conjugate(x, t, xi);
    return numeric_legendre_transform(model, x, t, xi);
}

double xi_search_radius(const HamiltonianModel& model, const FieldBounds& bounds, double h) {
    if (auto K = linear_growth_bound(model)) return *K;

    const double target = 2.0 * bounds.sup_abs_u / h + bounds.hstar0_sup;
    std::function<double(double)> floor_at = model.hstar_floor;
    if (!floor_at) {
        floor_at = [&model](double r) {
            double lo = std::numeric_limits<double>::infinity();
            const int dirs = model.dim == 1 ? 2 : 16;
            for (const Vec& x : model.probe_points) {
                for (int k = 0; k < dirs; ++k) {
                    const double th = 2.0 * std::numbers::pi * k / dirs;
                    const Vec xi = model.dim == 1 ? Vec(k == 0 ? r : -r)
                                                  : Vec(r * std::cos(th), r * std::sin(th));
                    lo = std::min(lo, legendre_transform(model, x, 0.0, xi).value());
                }
            }
            return lo;
        };
    }
    if (floor_at(0.0) >= target) return 0.0;
    // H* is convex along rays, so once the floor clears the target at radius R
    // it stays above it for every larger radius.
    double hi = 1.0;
    while (floor_at(hi) < target) {
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorKind::NonFiniteResult, "conjugate is not superlinear");
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (floor_at(mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

Vec velocity(const HamiltonianModel& model, Vec x, Vec p) { return model.velocity(x, p); }

ModelCheck check_model(const HamiltonianModel& model, double x_radius, double p_radius,
                       int samples, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-x_radius, x_radius);
    std::uniform_real_distribution<double> up(-p_radius, p_radius);
    auto draw = [&](auto& dist) {
        Vec v(dist(rng));
        if (model.dim == 2) v.y = dist(rng);
        return v;
    };
    ModelCheck out;
    for (int s = 0; s < samples; ++s) {
        const Vec x = draw(ux), y = draw(ux), a = draw(up), b = draw(up);
        const double t = 0.0;
        const double mid = model.hamiltonian(x, t, 0.5 * (a + b));
        const double avg = 0.5 * (model.hamiltonian(x, t, a) + model.hamiltonian(x, t, b));
        out.worst_convexity_defect = std::max(out.worst_convexity_defect, mid - avg);
        const double dx = norm(x - y);
        if (dx > 0.0 && model.lip_x_H > 0.0) {
            const double ratio = std::abs(model.hamiltonian(x, t, a) - model.hamiltonian(y, t, a)) /
                                 (model.lip_x_H * (1.0 + norm(a)) * dx);
            out.worst_lipschitz_ratio = std::max(out.worst_lipschitz_ratio, ratio);
        } else if (dx > 0.0) {
            const double diff = std::abs(model.hamiltonian(x, t, a) - model.hamiltonian(y, t, a));
            if (diff > 1e-12) out.worst_lipschitz_ratio = std::numeric_limits<double>::infinity();
        }
        out.sup_velocity = std::max(out.sup_velocity, norm(model.velocity(x, a)));
        if (auto K = linear_growth_bound(model)) {
            Vec xi = draw(up);
            const double n = norm(xi);
            // stay a hair inside the closed ball so rounding cannot step off dom H*
            if (n > 0.0) xi = (*K * (1.0 - 1e-12) * std::min(1.0, n / p_radius) / n) * xi;
            const ExtReal v = legendre_transform(model, x, t, xi);
            if (v.is_infinite() || std::abs(v.value()) > 1e12) out.conjugate_bounded = false;
        }
    }
    return out;
}

}  // namespace semilag
