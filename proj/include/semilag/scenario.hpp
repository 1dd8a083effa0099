#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semilag/diagnostics.hpp"
#include "semilag/flow.hpp"
#include "semilag/hj.hpp"
#include "semilag/measure.hpp"

namespace semilag {

/// Everything a run needs, as read from a configuration file.
struct RunConfig {
    std::string model = "schrodinger";
    PotentialSpec potential;

    int dim = 1;
    Vec lo{-1.0, -1.0}, hi{1.0, 1.0};
    std::optional<double> k;           ///< required unless a study slaves it to h
    std::optional<double> padding;     ///< automatic when absent

    double T = 1.0;
    std::optional<double> h;
    std::optional<int> N;

    double alpha = 0.5;                ///< eps = h^alpha
    std::optional<double> eps;         ///< overrides the tie to h

    std::string u0 = "quadratic";      ///< neg-abs | quadratic | constant | expression
    double u0_value = 0.0;
    std::string u0_expression;

    std::string measure = "none";      ///< none | atoms | uniform | expression
    std::vector<Atom> atoms;
    Vec measure_lo{-1.0, -1.0}, measure_hi{1.0, 1.0};
    double measure_density = 1.0;
    std::string measure_expression;

    int xi_points = 61;
    bool xi_refine = true;
    bool record_argmin = false;
    std::optional<double> xi_radius;

    double fp_tol = 1e-12;
    int fp_max_iter = 200;
    std::vector<Vec> probe_seeds;      ///< extra trajectories next to the measure support
    bool explicit_comparison = false;

    std::vector<double> output_times;  ///< empty: only T
    bool svg = true;
    std::string output_dir = "out";

    int semiconcavity_shift = 3;
    int osl_pairs = 2000;
    int gradient_samples = 200;
    std::vector<double> concentration_times;

    int study_levels = 3;
    double k_coeff = 1.0;
    double k_margin = 0.1;             ///< k = k_coeff * h^(1 + alpha + k_margin) in studies

    unsigned long long seed = 0;

    /// Flat key = value echo of every field, in a fixed order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Throws Error(Config) with the field path of the first violated rule. In a
/// study lattice.k is ignored and checked as slaved to h instead.
void validate(const RunConfig& cfg, bool study = false);

double resolved_h(const RunConfig& cfg);
int resolved_N(const RunConfig& cfg);
double resolved_eps(const RunConfig& cfg);

/// Closed-form viscosity solution, available for V = 0 and the built-in data.
struct ExactSolution {
    std::function<double(Vec, double)> u;
    std::function<Vec(Vec, double)> grad;
    std::vector<Vec> kinks;
};
std::optional<ExactSolution> exact_solution(const RunConfig& cfg);

/// Exact Filippov transport of a uniform 1D density under u0 = -|x|: every
/// characteristic runs to the origin at constant speed and stops there.
struct ConcentrationReference {
    double atom_mass;   ///< mass already collapsed onto the origin
    double ball_mass;   ///< mass inside [-r, r], collapsed or still in transit
};
std::optional<ConcentrationReference> filippov_concentration(const RunConfig& cfg, double t, double r);

std::function<double(Vec)> initial_datum(const RunConfig& cfg);

/// (T + h) * max(sup|a|, sup|D_p H|) over |p| <= C1, plus 3 eps.
double automatic_padding(const RunConfig& cfg, const HamiltonianModel& model, double lip_u0);

struct RunConstants {
    double lip_u0 = 0.0;           ///< C1 measured on the box
    double lip_max = 0.0;          ///< max over levels of the box Lipschitz estimate
    double semiconcavity_u0 = 0.0;
    double osl_prepass = 0.0;      ///< C' measured on the smoothed initial field
    double c_double_prime = 0.0;
    double contraction_guard = 0.0;
    double eps = 0.0;
    double padding = 0.0;
};

struct RunWarnings {
    long hj_clamped_feet = 0;
    long flow_clamps = 0;
    long pushforward_clamps = 0;
};

struct ScenarioResult {
    RunConfig cfg;
    std::shared_ptr<const LatticeSpec> spec;
    HamiltonianModel model;
    HjSolution hj;
    RunConstants constants;
    RunWarnings warnings;

    std::optional<DiscreteMeasure> m0;
    std::vector<std::size_t> sources;              ///< seed -> source node
    std::optional<CharacteristicEnsemble> flow;
    std::optional<CharacteristicEnsemble> flow_explicit;
    std::vector<DiscreteMeasure> measures;         ///< m^n for n = 0..N
    std::vector<double> mass_ledger;
};

/// Builds the lattice, model and initial field and runs the value iteration.
/// Throws NoContractionError when C' h >= 1 on the smoothed initial field.
ScenarioResult run_hj(const RunConfig& cfg);

/// run_hj followed by the implicit flow and the measure push-forwards.
ScenarioResult run_system(const RunConfig& cfg);

/// n = floor(t/h) with a little slack for round-off.
int time_index(double t, double h);

struct StudyRow {
    int level = 0;
    double h = 0.0, k = 0.0, eps = 0.0;
    std::optional<double> sup_error;
    std::optional<double> gradient_error;
    std::optional<double> weak_star;   ///< distance to the previous level at T
    std::optional<double> concentration_mass;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::optional<double> sup_slope;
    std::optional<double> gradient_slope;
    std::vector<ScenarioResult> runs;   ///< kept only when requested
};

/// Levels h, h/2, ...; k and eps follow h as configured.
StudyResult run_study(const RunConfig& cfg, int levels, bool keep_runs = false);

RunConfig level_config(const RunConfig& base, int level);

}  // namespace semilag
