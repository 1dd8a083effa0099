#pragma once

#include <optional>
#include <vector>

#include "semilag/hamiltonians.hpp"
#include "semilag/lattice.hpp"

namespace semilag {

struct HjSolverConfig {
    double h = 0.1;
    int N = 10;
    int xi_grid_points = 61;       ///< M per axis, odd
    bool xi_refine = true;         ///< golden-section polish after the coarse grid
    bool record_argmin = false;
    /// Overrides the automatic search radius for superlinear models.
    std::optional<double> xi_radius;
    int semiconcavity_shift = 3;   ///< max lattice shift for the per-step statistic

    void validate() const;
};

/// Tolerance on the polished minimizer.
inline constexpr double kXiPolishTol = 1e-8;

struct StepStats {
    int n = 0;
    double t = 0.0;
    double sup_norm = 0.0;
    double lipschitz = 0.0;
    double semiconcavity = 0.0;
    double xi_radius = 0.0;
    double xi_spacing = 0.0;
    /// Bound on how far a computed nodal minimum may exceed the exact one.
    double min_excess = 0.0;
    long clamped_feet = 0;          ///< nodes whose selected foot point left the padded box
};

struct HjSolution {
    std::vector<LatticeField> fields;              ///< u^0 .. u^N
    std::vector<std::vector<Vec>> argmins;         ///< per step n >= 1 when recorded
    std::vector<StepStats> stats;                  ///< one per field
    double h = 0.0;

    double time(int n) const { return n * h; }
    int steps() const { return static_cast<int>(fields.size()) - 1; }
};

struct StepReport {
    std::vector<Vec> argmin;   ///< filled when requested
    double xi_radius = 0.0;
    double xi_spacing = 0.0;
    double min_excess = 0.0;
    long clamped_feet = 0;
};

/// One semi-Lagrangian step from time t. Throws EmptyCandidateSet when no
/// candidate lies in dom H*.
LatticeField sl_step(const LatticeField& u, double t, const HamiltonianModel& model,
                     const HjSolverConfig& cfg, StepReport* report = nullptr);

HjSolution solve(const LatticeField& u0, const HamiltonianModel& model, const HjSolverConfig& cfg);

/// sup_x |H*(x,t,xi) - H*(x,t,xi')| / |xi - xi'| over the search ball, from
/// the closed-form kinetic part when present, else by sampling.
double conjugate_xi_lipschitz(const HamiltonianModel& model, double radius);

}  // namespace semilag
