#include "semilag/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "semilag/errors.hpp"

namespace semilag {

FlowConfig::FlowConfig(double h, double eps, const HamiltonianModel& model, double lip_u, double fp_tol,
                       int fp_max_iter, double lip_x_velocity)
    : h_(h), eps_(eps), fp_tol_(fp_tol), fp_max_iter_(fp_max_iter) {
    if (!(h > 0.0) || !(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "flow needs h > 0 and eps > 0");
    if (!(fp_tol > 0.0) || fp_max_iter < 1)
        throw Error(ErrorKind::InvalidArgument, "fixed-point tolerance and iteration cap must be positive");
    const MollifierKernel k = mollifier_kernel(1.0, model.dim);
    c2_ = model.lip_p_velocity * lip_u * k.grad_l1 + eps * lip_x_velocity;
    const double guard = c2_ * h / eps;
    if (!(guard < 1.0)) {
        std::ostringstream msg;
        msg << "contraction guard C''h/eps = " << guard << " >= 1 (C'' = " << c2_ << ")";
        throw NoContractionError(msg.str(), guard);
    }
}

namespace {

template <class Grad>
FlowStep fixed_point(Vec x, Grad&& grad, const HamiltonianModel& model, const FlowConfig& cfg) {
    const double h = cfg.h();
    FlowStep st;
    Vec y = x;
    double prev_inc = -1.0;
    for (int m = 1; m <= cfg.fp_max_iter(); ++m) {
        const Vec v = model.velocity(y, grad(y));
        const Vec next = x + h * v;
        const double inc = norm(next - y);
        if (prev_inc > 0.0) st.contraction = std::max(st.contraction, inc / prev_inc);
        st.iterations = m;
        st.position = next;
        st.velocity = v;
        if (!std::isfinite(inc)) break;
        if (inc <= cfg.fp_tol()) return st;
        prev_inc = inc;
        y = next;
    }
    std::ostringstream msg;
    msg << "fixed point did not reach tolerance " << cfg.fp_tol() << " in " << cfg.fp_max_iter()
        << " iterations (observed contraction " << st.contraction << ", guard C''h/eps = "
        << cfg.contraction_guard() << ")";
    throw NoContractionError(msg.str(), st.contraction);
}

}  // namespace

FlowStep implicit_step(Vec x_prev, const GradientField& grad, const HamiltonianModel& model,
                       const FlowConfig& cfg) {
    return fixed_point(x_prev, grad, model, cfg);
}

FlowStep implicit_step(Vec x_prev, const SmoothedField& u_next, const HamiltonianModel& model,
                       const FlowConfig& cfg, long* clamps) {
    long local = 0;
    FlowStep st = fixed_point(
        x_prev, [&](Vec y) { return evaluate_clamped(u_next, y, local).gradient; }, model, cfg);
    if (clamps) *clamps += local;
    return st;
}

FlowStep explicit_step(Vec x_prev, const SmoothedField& u_curr, const HamiltonianModel& model,
                       const FlowConfig& cfg, long* clamps) {
    long local = 0;
    FlowStep st;
    st.velocity = model.velocity(x_prev, evaluate_clamped(u_curr, x_prev, local).gradient);
    st.position = x_prev + cfg.h() * st.velocity;
    st.iterations = 1;
    if (clamps) *clamps += local;
    return st;
}

namespace {

CharacteristicEnsemble run(const std::vector<Vec>& seeds, const HjSolution& hj, const HamiltonianModel& model,
                           const FlowConfig& cfg, bool implicit) {
    CharacteristicEnsemble ens;
    ens.dim = model.dim;
    ens.seeds = seeds;
    ens.h = hj.h;
    ens.states.push_back(seeds);
    const int N = hj.steps();
    for (int n = 0; n < N; ++n) {
        const SmoothedField field(hj.fields[implicit ? n + 1 : n], cfg.eps());
        std::vector<Vec> next(seeds.size()), vel(seeds.size());
        const auto& cur = ens.states.back();
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const FlowStep st = implicit ? implicit_step(cur[s], field, model, cfg, &ens.clamps)
                                         : explicit_step(cur[s], field, model, cfg, &ens.clamps);
            next[s] = st.position;
            vel[s] = st.velocity;
            ens.max_iterations = std::max(ens.max_iterations, st.iterations);
            ens.max_contraction = std::max(ens.max_contraction, st.contraction);
        }
        ens.states.push_back(std::move(next));
        ens.velocities.push_back(std::move(vel));
    }
    return ens;
}

}  // namespace

CharacteristicEnsemble evolve(const std::vector<Vec>& seeds, const HjSolution& hj,
                              const HamiltonianModel& model, const FlowConfig& cfg) {
    return run(seeds, hj, model, cfg, true);
}

CharacteristicEnsemble evolve_explicit(const std::vector<Vec>& seeds, const HjSolution& hj,
                                       const HamiltonianModel& model, const FlowConfig& cfg) {
    return run(seeds, hj, model, cfg, false);
}

Vec interpolate_trajectory(const CharacteristicEnsemble& ens, std::size_t seed, double t) {
    if (seed >= ens.seeds.size()) throw Error(ErrorKind::MissingTrajectory, "seed index out of range");
    const int N = ens.steps();
    if (N == 0 || t <= 0.0) return ens.states[0][seed];
    const double s = t / ens.h;
    int n = static_cast<int>(std::floor(s + 1e-12));
    if (n >= N) return ens.states[N][seed];
    const double local = t - n * ens.h;
    if (local <= 0.0) return ens.states[n][seed];
    if (local >= ens.h * (1.0 - 1e-12)) return ens.states[n + 1][seed];
    return ens.states[n][seed] + local * ens.velocities[n][seed];
}

void write_trajectories_csv(std::ostream& os, const CharacteristicEnsemble& ens) {
    const bool two_d = ens.dim == 2;
    os << (two_d ? "seed,n,t,x,y\n" : "seed,n,t,x\n");
    char buf[160];
    for (std::size_t s = 0; s < ens.seeds.size(); ++s) {
        for (int n = 0; n <= ens.steps(); ++n) {
            const Vec p = ens.states[n][s];
            if (two_d)
                std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g\n", s, n, n * ens.h, p.x, p.y);
            else
                std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", s, n, n * ens.h, p.x);
            os << buf;
        }
    }
}

}  // namespace semilag
