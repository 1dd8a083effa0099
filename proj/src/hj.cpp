#include "semilag/hj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "golden.hpp"
#include "semilag/diagnostics.hpp"
#include "semilag/errors.hpp"
#include "semilag/kernels/kernels.hpp"

namespace semilag {

void HjSolverConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidArgument, "time step h must be > 0");
    if (N < 0) throw Error(ErrorKind::InvalidArgument, "step count N must be >= 0");
    if (xi_grid_points < 3 || xi_grid_points % 2 == 0)
        throw Error(ErrorKind::InvalidArgument, "xi grid points must be odd and >= 3");
    if (xi_radius && !(*xi_radius > 0.0))
        throw Error(ErrorKind::InvalidArgument, "xi radius override must be > 0");
}

double conjugate_xi_lipschitz(const HamiltonianModel& model, double radius) {
    // Sampled chord slopes along one ray; infinite when the ray leaves dom H*.
    const int samples = 64;
    double worst = 0.0;
    const Vec x = model.probe_points.empty() ? Vec() : model.probe_points.front();
    for (int i = 0; i < samples; ++i) {
        const double a = radius * i / samples, b = radius * (i + 1) / samples;
        const ExtReal fa = legendre_transform(model, x, 0.0, Vec(a));
        const ExtReal fb = legendre_transform(model, x, 0.0, Vec(b));
        if (fa.is_infinite() || fb.is_infinite()) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(fb.value() - fa.value()) / (b - a));
    }
    return worst;
}

namespace {

struct Candidates {
    std::vector<Vec> xi;
    std::vector<double> d0, d1;    // foot offsets in index units, -xi h / k
    std::vector<double> cost;      // h * kinetic part, or h * H* at a fixed x
    double radius = 0.0;
    double spacing = 0.0;
};

Candidates make_candidates(const HamiltonianModel& model, const LatticeSpec& spec, double R,
                           int M, double h) {
    Candidates c;
    c.radius = R;
    c.spacing = 2.0 * R / (M - 1);
    const int half = M / 2;
    const int My = spec.dim() == 2 ? M : 1;
    const int halfy = spec.dim() == 2 ? half : 0;
    std::vector<Vec> pts;
    for (int a = -half; a <= half; ++a) {
        for (int b = -halfy; b < My - halfy; ++b) {
            const Vec xi(a * c.spacing, b * c.spacing);
            if (norm2(xi) > R * R * (1.0 + 1e-12)) continue;
            if (model.kinetic_conjugate && model.kinetic_conjugate(xi).is_infinite()) continue;
            pts.push_back(xi);
        }
    }
    std::stable_sort(pts.begin(), pts.end(), [](Vec p, Vec q) {
        const double np = norm2(p), nq = norm2(q);
        if (np != nq) return np < nq;
        if (p.x != q.x) return p.x < q.x;
        return p.y < q.y;
    });
    c.xi = std::move(pts);
    const double k = spec.k();
    for (const Vec& xi : c.xi) {
        c.d0.push_back(-xi.x * h / k);
        c.d1.push_back(-xi.y * h / k);
        if (model.kinetic_conjugate) c.cost.push_back(h * model.kinetic_conjugate(xi).value());
    }
    return c;
}

class NodeObjective {
public:
    NodeObjective(const LatticeField& u, const HamiltonianModel& model, Vec x, double t, double h)
        : u_(u), model_(model), x_(x), t_(t), h_(h) {}

    // Matches the coarse cost split: h * kinetic(xi) here, -h V(x) added by the caller.
    double operator()(Vec xi) const {
        double cost;
        if (model_.kinetic_conjugate) {
            const ExtReal kin = model_.kinetic_conjugate(xi);
            if (kin.is_infinite()) return std::numeric_limits<double>::infinity();
            cost = h_ * kin.value();
        } else {
            const ExtReal hs = legendre_transform(model_, x_, t_, xi);
            if (hs.is_infinite()) return std::numeric_limits<double>::infinity();
            cost = h_ * hs.value();
        }
        long clamps = 0;
        return interpolate_clamped(u_, x_ - h_ * xi, clamps) + cost;
    }

private:
    const LatticeField& u_;
    const HamiltonianModel& model_;
    Vec x_;
    double t_, h_;
};

// Chord of the disk |xi| <= R along `axis` through xi, intersected with [lo, hi].
void clip_to_disk(Vec xi, int axis, double R, double& lo, double& hi) {
    const double other = axis == 0 ? xi.y : xi.x;
    const double half = std::sqrt(std::max(0.0, R * R - other * other));
    lo = std::max(lo, -half);
    hi = std::min(hi, half);
}

Vec polish(const NodeObjective& f, Vec start, double start_value, double spacing, double R, int dim,
           double& value) {
    value = start_value;
    Vec best = start;
    if (dim == 1) {
        double lo = std::max(start.x - spacing, -R), hi = std::min(start.x + spacing, R);
        auto m = detail::golden_min([&](double s) { return f(Vec(s)); }, lo, hi, kXiPolishTol);
        if (m.value < value) {
            value = m.value;
            best = Vec(m.arg);
        }
        return best;
    }
    double window = spacing;
    for (int sweep = 0; sweep < 40; ++sweep) {
        const double before = value;
        const Vec prev = best;
        for (int axis = 0; axis < 2; ++axis) {
            double lo = best[axis] - window, hi = best[axis] + window;
            clip_to_disk(best, axis, R, lo, hi);
            if (!(hi > lo)) continue;
            auto m = detail::golden_min(
                [&](double s) {
                    Vec p = best;
                    p[axis] = s;
                    return f(p);
                },
                lo, hi, kXiPolishTol);
            if (m.value < value) {
                value = m.value;
                best[axis] = m.arg;
            }
        }
        const double moved = norm(best - prev);
        if (moved < kXiPolishTol && before - value <= 0.0) break;
        window = std::max(std::min(window, 4.0 * moved), 16.0 * kXiPolishTol);
    }
    return best;
}

}  // namespace

LatticeField sl_step(const LatticeField& u, double t, const HamiltonianModel& model,
                     const HjSolverConfig& cfg, StepReport* report) {
    cfg.validate();
    const LatticeSpec& spec = u.spec();
    if (spec.count(0) < 2 || (spec.dim() == 2 && spec.count(1) < 2))
        throw Error(ErrorKind::InvalidArgument, "lattice needs at least two nodes per axis");
    if (model.dim != spec.dim()) throw Error(ErrorKind::InvalidArgument, "model and lattice dimensions differ");

    const double h = cfg.h;
    double R;
    if (auto K = linear_growth_bound(model)) {
        R = *K;
    } else if (cfg.xi_radius) {
        R = *cfg.xi_radius;
    } else {
        R = xi_search_radius(model, {sup_norm(u), model.hstar0_sup}, h);
    }
    if (!std::isfinite(R)) throw Error(ErrorKind::NonFiniteResult, "xi search radius is not finite");
    R = std::max(R, 1e-300);

    const Candidates cand = make_candidates(model, spec, R, cfg.xi_grid_points, h);
    const bool separable = static_cast<bool>(model.kinetic_conjugate);
    if (cand.xi.empty()) throw Error(ErrorKind::EmptyCandidateSet, "no xi candidate inside dom H*");

    const int n0 = spec.count(0), n1 = spec.count(1);
    const double* uv = u.values().data();
    std::vector<double> out(u.size());
    std::vector<double> node_cost;
    long clamped = 0;
    if (report) {
        report->argmin.clear();
        if (cfg.record_argmin) report->argmin.resize(u.size());
    }

    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        const auto m = spec.multi_index(idx);
        const Vec x = spec.node(m);
        double offset = 0.0;
        const double* cost = cand.cost.data();
        if (separable) {
            if (model.potential) offset = -h * model.potential(x, t);
        } else {
            node_cost.clear();
            for (const Vec& xi : cand.xi) {
                const ExtReal v = legendre_transform(model, x, t, xi);
                node_cost.push_back(v.is_infinite() ? std::numeric_limits<double>::infinity()
                                                    : h * v.value());
            }
            cost = node_cost.data();
        }
        const int count = static_cast<int>(cand.xi.size());
        const kernels::SlMin best =
            spec.dim() == 1
                ? kernels::sl_min_1d(uv, n0, m[0], cand.d0.data(), cost, count)
                : kernels::sl_min_2d(uv, n0, n1, m[0], m[1], cand.d0.data(), cand.d1.data(), cost, count);
        if (!std::isfinite(best.value))
            throw Error(ErrorKind::EmptyCandidateSet, "no finite candidate at a node");

        Vec arg = cand.xi[best.arg];
        double value = best.value;
        if (cfg.xi_refine) {
            NodeObjective f(u, model, x, t, h);
            double polished;
            const Vec p = polish(f, arg, value, cand.spacing, R, spec.dim(), polished);
            if (polished < value) {
                value = polished;
                arg = p;
            }
        }
        if (!spec.contains(x - h * arg)) ++clamped;
        out[idx] = value + offset;
        if (report && cfg.record_argmin) report->argmin[idx] = arg;
    }

    if (report) {
        report->xi_radius = R;
        report->xi_spacing = cand.spacing;
        report->clamped_feet = clamped;
        // A computed minimum exceeds the exact one by at most the objective's
        // variation over the unresolved part of the xi interval.
        const double slope = h * (lipschitz_estimate(u) + conjugate_xi_lipschitz(model, R));
        const double resolution = cfg.xi_refine ? kXiPolishTol : 0.5 * cand.spacing * std::sqrt(spec.dim());
        const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * (sup_norm(u) + 1.0);
        report->min_excess = slope * resolution + rounding;
    }
    return LatticeField(u.spec_ptr(), std::move(out));
}

HjSolution solve(const LatticeField& u0, const HamiltonianModel& model, const HjSolverConfig& cfg) {
    cfg.validate();
    HjSolution sol;
    sol.h = cfg.h;
    sol.fields.reserve(cfg.N + 1);
    sol.fields.push_back(u0);

    auto stats_for = [&](const LatticeField& u, int n) {
        StepStats s;
        s.n = n;
        s.t = n * cfg.h;
        s.sup_norm = sup_norm(u);
        s.lipschitz = lipschitz_estimate(u);
        s.semiconcavity = discrete_semiconcavity_constant(u, cfg.semiconcavity_shift);
        return s;
    };
    sol.stats.push_back(stats_for(u0, 0));

    for (int n = 0; n < cfg.N; ++n) {
        StepReport rep;
        LatticeField next = sl_step(sol.fields.back(), n * cfg.h, model, cfg, &rep);
        StepStats s = stats_for(next, n + 1);
        s.xi_radius = rep.xi_radius;
        s.xi_spacing = rep.xi_spacing;
        s.min_excess = rep.min_excess;
        s.clamped_feet = rep.clamped_feet;
        sol.stats.push_back(s);
        if (cfg.record_argmin) sol.argmins.push_back(std::move(rep.argmin));
        sol.fields.push_back(std::move(next));
    }
    return sol;
}

}  // namespace semilag
