#pragma once

#include <string>

#include "semilag/scenario.hpp"

namespace semilag::io {

/// Parses the flat `dotted.key = value` format. Blank lines and text after
/// `#` are ignored; unknown or repeated keys are rejected with their line
/// number. Field-level validation is left to semilag::validate.
///
///   model.name = schrodinger          # | bethe-salpeter | eikonal
///   model.potential.type = zero       # | quadratic
///   model.potential.omega = 1
///   lattice.dim = 1
///   lattice.lo = -2                   # "x, y" in two dimensions
///   lattice.hi = 2
///   lattice.k = 0.01
///   lattice.padding = auto
///   time.T = 1
///   time.h = 0.1                      # or time.N
///   mollifier.alpha = 0.5
///   mollifier.epsilon = 0.2           # overrides eps = h^alpha
///   initial.u0 = quadratic            # | neg-abs | constant | expression
///   initial.u0.value = 0
///   initial.u0.expression = -abs(x)
///   measure.type = uniform            # | none | atoms | expression
///   measure.atoms = -0.5:0.5; 0.5:0.5 # "x,y:mass" in two dimensions
///   measure.lo / measure.hi / measure.density / measure.expression
///   solver.xi_points / solver.xi_refine / solver.record_argmin / solver.xi_radius
///   flow.fp_tol / flow.fp_max_iter / flow.seeds / flow.explicit_comparison
///   output.times = 0.25, 0.5          # output.svg = true, output.dir = out
///   diagnostics.semiconcavity_shift / diagnostics.osl_pairs
///   diagnostics.gradient_samples / diagnostics.concentration_times
///   study.levels / study.k_coeff / study.k_margin
///   seed = 0
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

}  // namespace semilag::io
