#pragma once

#include <vector>

#include "semilag/lattice.hpp"

namespace semilag {

/// rho_eps(z) = eps^-d c_d exp(-1/(1-|z/eps|^2)) on |z| < eps.
struct MollifierKernel {
    int dim = 1;
    double eps = 1.0;
    double c_d = 0.0;          ///< continuum normalization for unit eps
    double grad_l1 = 0.0;      ///< ||grad rho||_L1 for unit eps; scales as 1/eps

    double operator()(Vec z) const;
    Vec gradient(Vec z) const;
};

/// Continuum constant c_d = 1 / int exp(-1/(1-|z|^2)) dz over the unit ball.
double mollifier_constant(int dim);

MollifierKernel mollifier_kernel(double eps, int dim);

/// Nodal offsets within eps and their weights, renormalized after sampling so
/// that sum(weight) * k^d == 1.
struct NodalStencil {
    std::vector<std::array<int, 2>> offset;
    std::vector<double> weight;       ///< rho_eps samples, renormalized
    std::vector<Vec> grad_weight;     ///< grad rho_eps samples, same normalization
};

/// u_eps = u * rho_eps by the lattice rectangle rule. Off the nodes the rule is
/// normalized by its own discrete mass, so constants are reproduced exactly
/// everywhere.
class SmoothedField {
public:
    /// Throws InvalidArgument unless eps >= 2k.
    SmoothedField(LatticeField base, double eps);

    const LatticeField& base() const { return base_; }
    double eps() const { return kernel_.eps; }
    const MollifierKernel& kernel() const { return kernel_; }
    const NodalStencil& stencil() const { return stencil_; }

    struct Eval {
        double value;
        Vec gradient;
    };

    /// Throws OutOfDomain outside the padded box.
    Eval evaluate(Vec x) const;
    double value(Vec x) const { return evaluate(x).value; }
    Vec gradient(Vec x) const { return evaluate(x).gradient; }

private:
    LatticeField base_;
    MollifierKernel kernel_;
    NodalStencil stencil_;
};

/// Same as evaluate, but clamps x into the padded box and counts clamps.
SmoothedField::Eval evaluate_clamped(const SmoothedField& field, Vec x, long& clamp_count);

}  // namespace semilag
