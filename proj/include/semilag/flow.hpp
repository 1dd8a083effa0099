#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "semilag/hamiltonians.hpp"
#include "semilag/hj.hpp"
#include "semilag/mollify.hpp"

namespace semilag {

class FlowConfig {
public:
    /// Estimates C'' = Lip_p(a) C1 ||grad rho||_L1 + eps Lip_x(a) and throws
    /// NoContractionError when C'' h / eps >= 1. `lip_u` is the Lipschitz
    /// constant C1 of the fields that will drive the flow.
    FlowConfig(double h, double eps, const HamiltonianModel& model, double lip_u,
               double fp_tol = 1e-12, int fp_max_iter = 200, double lip_x_velocity = 0.0);

    double h() const { return h_; }
    double eps() const { return eps_; }
    double fp_tol() const { return fp_tol_; }
    int fp_max_iter() const { return fp_max_iter_; }
    double c_double_prime() const { return c2_; }
    double contraction_guard() const { return c2_ * h_ / eps_; }

private:
    double h_, eps_, fp_tol_;
    int fp_max_iter_;
    double c2_;
};

struct FlowStep {
    Vec position;
    Vec velocity;             ///< a(X^{n+1}, grad u_eps(X^{n+1})), so position = x + h velocity
    int iterations = 0;
    double contraction = 0.0; ///< largest observed ratio of successive fixed-point increments
};

using GradientField = std::function<Vec(Vec)>;

/// Solves Y = x + h a(Y, grad(Y)) by fixed-point iteration from Y = x.
/// Throws NoContractionError (with the observed factor) past fp_max_iter.
FlowStep implicit_step(Vec x_prev, const GradientField& grad, const HamiltonianModel& model,
                       const FlowConfig& cfg);
FlowStep implicit_step(Vec x_prev, const SmoothedField& u_next, const HamiltonianModel& model,
                       const FlowConfig& cfg, long* clamps = nullptr);

/// X^{n+1} = X^n + h a(X^n, grad u_eps^n(X^n)).
FlowStep explicit_step(Vec x_prev, const SmoothedField& u_curr, const HamiltonianModel& model,
                       const FlowConfig& cfg, long* clamps = nullptr);

struct CharacteristicEnsemble {
    int dim = 1;
    std::vector<Vec> seeds;
    std::vector<std::vector<Vec>> states;       ///< states[n][s], n = 0..N
    std::vector<std::vector<Vec>> velocities;   ///< velocities[n][s], step n -> n+1
    double h = 0.0;
    int max_iterations = 0;
    double max_contraction = 0.0;
    long clamps = 0;

    int steps() const { return static_cast<int>(states.size()) - 1; }
};

/// Implicit flow driven by the smoothed fields of levels 1..N.
CharacteristicEnsemble evolve(const std::vector<Vec>& seeds, const HjSolution& hj,
                              const HamiltonianModel& model, const FlowConfig& cfg);

/// Explicit flow driven by the smoothed fields of levels 0..N-1.
CharacteristicEnsemble evolve_explicit(const std::vector<Vec>& seeds, const HjSolution& hj,
                                       const HamiltonianModel& model, const FlowConfig& cfg);

/// Piecewise-linear trajectory in time; returns the stored states exactly at
/// the time levels. t is clamped to [0, T].
Vec interpolate_trajectory(const CharacteristicEnsemble& ens, std::size_t seed, double t);

/// Columns: seed,n,t,x[,y].
void write_trajectories_csv(std::ostream& os, const CharacteristicEnsemble& ens);

}  // namespace semilag
