#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "semilag/flow.hpp"
#include "semilag/lattice.hpp"

namespace semilag {

struct Atom {
    Vec x;
    double mass = 0.0;
};

/// Constant density on an axis-aligned box (an interval in one dimension).
struct BoxDensity {
    Vec lo, hi;
    double density = 0.0;
};

/// Density given pointwise, integrated per cell by the midpoint rule.
struct DensityCallback {
    std::function<double(Vec)> density;
};

using MeasureDescription = std::variant<std::vector<Atom>, std::vector<BoxDensity>, DensityCallback>;

/// Lattice measure sum_i w_i delta_{x_i}; weights are stored sparsely by node.
class DiscreteMeasure {
public:
    explicit DiscreteMeasure(std::shared_ptr<const LatticeSpec> spec) : spec_(std::move(spec)) {}

    const LatticeSpec& spec() const { return *spec_; }
    const std::shared_ptr<const LatticeSpec>& spec_ptr() const { return spec_; }
    const std::map<std::size_t, double>& weights() const { return weights_; }

    void add(std::size_t node, double w);
    double at(std::size_t node) const;
    std::vector<std::size_t> support() const;

private:
    std::shared_ptr<const LatticeSpec> spec_;
    std::map<std::size_t, double> weights_;
};

/// Cells are half-open cubes of side k centered at the nodes, so an atom on a
/// cell boundary belongs to the right (upper) cell. Mass falling outside the
/// padded lattice throws UnsupportedMeasure.
DiscreteMeasure project_measure(std::shared_ptr<const LatticeSpec> spec, const MeasureDescription& m0);

/// Column j holds the barycentric weights of X^n(x_j) for each source node j.
struct PushForwardMatrix {
    std::map<std::size_t, Stencil> columns;
    long clamps = 0;   ///< endpoints clamped into the padded box
};

/// `sources[s]` is the lattice node that seed s of the ensemble started from.
/// Throws MissingTrajectory if a support node of `m0` has no seed.
PushForwardMatrix build_pushforward(const CharacteristicEnsemble& ens, int n, const LatticeSpec& spec,
                                    const std::vector<std::size_t>& sources, const DiscreteMeasure& m0);

/// Lambda m. Throws MissingTrajectory for a weighted node without a column.
DiscreteMeasure pushforward(const DiscreteMeasure& m, const PushForwardMatrix& lambda);

/// Compensated sum of the weights.
double mass(const DiscreteMeasure& m);
/// sum of |w_i| over |x_i| > R.
double tail_mass(const DiscreteMeasure& m, double R);
/// sum of w_i over |x_i - center| <= r.
double mass_in_ball(const DiscreteMeasure& m, Vec center, double r);
double total_variation(const DiscreteMeasure& m);

/// Fixed test functions used to compare measures on different lattices.
class ProbeDictionary {
public:
    struct Probe {
        enum class Kind { Hat, Bump } kind;
        Vec center;
        double radius;
    };

    /// P1 hats of `reference` at every `stride`-th node of its un-padded box,
    /// plus three smooth bumps sized from the box.
    static ProbeDictionary make(const LatticeSpec& reference, int stride = 4);

    const std::vector<Probe>& probes() const { return probes_; }
    double evaluate(std::size_t probe, Vec x) const;

private:
    std::vector<Probe> probes_;
};

/// max over probes of |<m_a - m_b, phi>|.
double weak_star_distance(const DiscreteMeasure& a, const DiscreteMeasure& b, const ProbeDictionary& probes);

/// Columns: node,i0[,i1],x[,y],weight.
void write_csv(std::ostream& os, const DiscreteMeasure& m);

}  // namespace semilag
