#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "semilag/hamiltonians.hpp"
#include "semilag/lattice.hpp"
#include "semilag/mollify.hpp"

namespace semilag {

/// Restricts a statistic to nodes of the un-padded box, or uses every node.
enum class Region { Box, Padded };

double sup_norm(const LatticeField& u, Region region = Region::Padded);

/// Lipschitz constant of the P1 interpolant: max adjacent difference quotient
/// in one dimension, max simplex gradient norm in two.
double lipschitz_estimate(const LatticeField& u, Region region = Region::Padded);

/// max over box nodes x and lattice shifts 0 < |j|_inf <= max_shift of
/// [u(x+x_j) - 2u(x) + u(x-x_j)] / |x_j|^2, skipping shifts that leave the
/// padded box.
double discrete_semiconcavity_constant(const LatticeField& u, int max_shift);

struct PairSampling {
    int pairs = 10000;
    double min_sep = 0.0;            ///< pairs closer than this are not drawn
    unsigned long long seed = 0;
};

/// max over sampled pairs in the un-padded box of
/// (a(x, grad u_eps(x)) - a(y, grad u_eps(y))).(x-y) / |x-y|^2.
/// Separations are stratified by decade between min_sep and the box diameter.
double osl_constant(const SmoothedField& field, const HamiltonianModel& model,
                    const PairSampling& sampling);

/// Same statistic over explicit seed positions and velocities (used on
/// evolved ensembles).
double osl_constant(const std::vector<Vec>& points, const std::vector<Vec>& velocities, double min_sep);

/// max over box nodes of |u - exact|.
double sup_error(const LatticeField& u, const std::function<double(Vec)>& exact);

struct KinkFilter {
    std::vector<Vec> kinks;        ///< points where the exact solution is not differentiable
    double standoff = 0.0;         ///< samples closer than this to a kink are skipped
};

/// max over samples of |grad u_eps - exact_grad|, after the kink filter.
double gradient_error(const SmoothedField& field, const std::function<Vec(Vec)>& exact_grad,
                      const std::vector<Vec>& samples, const KinkFilter& filter = {});

/// Least-squares slope of log(error) against log(h). Throws DegenerateFit
/// when fewer than two distinct h values (or any non-positive entry) are given.
double rate_regression(const std::vector<std::pair<double, double>>& pairs);

}  // namespace semilag
