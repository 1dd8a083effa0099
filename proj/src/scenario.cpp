#include "semilag/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "semilag/errors.hpp"
#include "semilag/io/expression.hpp"

namespace semilag {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string vec_str(Vec v, int dim) { return dim == 1 ? num(v.x) : num(v.x) + "," + num(v.y); }

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Config, path + ": " + what);
}

double hamiltonian_at_unit(const std::string& model) {
    if (model == "schrodinger") return 0.5;
    if (model == "eikonal") return 1.0;
    return std::sqrt(1.5);
}

double hamiltonian_at_zero(const std::string& model) { return model == "bethe-salpeter" ? 1.0 : 0.0; }

// |D_p H| on the unit sphere.
double speed_at_unit(const std::string& model) {
    if (model == "bethe-salpeter") return 1.0 / std::sqrt(1.5);
    return 1.0;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e;
    auto put = [&](const std::string& k, const std::string& v) { e.emplace_back(k, v); };
    put("model.name", model);
    put("model.potential.type", potential.type == PotentialSpec::Type::Zero ? "zero" : "quadratic");
    put("model.potential.omega", num(potential.omega));
    put("lattice.dim", std::to_string(dim));
    put("lattice.lo", vec_str(lo, dim));
    put("lattice.hi", vec_str(hi, dim));
    put("lattice.k", k ? num(*k) : "slaved");
    put("lattice.padding", padding ? num(*padding) : "auto");
    put("time.T", num(T));
    put("time.h", h ? num(*h) : "from N");
    put("time.N", N ? std::to_string(*N) : "from h");
    put("mollifier.alpha", num(alpha));
    put("mollifier.epsilon", eps ? num(*eps) : "h^alpha");
    put("initial.u0", u0);
    if (u0 == "constant") put("initial.u0.value", num(u0_value));
    if (u0 == "expression") put("initial.u0.expression", u0_expression);
    put("measure.type", measure);
    if (measure == "atoms") {
        std::string a;
        for (const Atom& at : atoms) a += (a.empty() ? "" : ";") + vec_str(at.x, dim) + ":" + num(at.mass);
        put("measure.atoms", a);
    }
    if (measure == "uniform") {
        put("measure.lo", vec_str(measure_lo, dim));
        put("measure.hi", vec_str(measure_hi, dim));
        put("measure.density", num(measure_density));
    }
    if (measure == "expression") put("measure.expression", measure_expression);
    put("solver.xi_points", std::to_string(xi_points));
    put("solver.xi_refine", xi_refine ? "true" : "false");
    put("solver.record_argmin", record_argmin ? "true" : "false");
    put("solver.xi_radius", xi_radius ? num(*xi_radius) : "auto");
    put("flow.fp_tol", num(fp_tol));
    put("flow.fp_max_iter", std::to_string(fp_max_iter));
    put("flow.explicit_comparison", explicit_comparison ? "true" : "false");
    std::string seeds;
    for (const Vec& s : probe_seeds) seeds += (seeds.empty() ? "" : ";") + vec_str(s, dim);
    put("flow.seeds", seeds);
    std::string times;
    for (double t : output_times) times += (times.empty() ? "" : ",") + num(t);
    put("output.times", times);
    put("output.svg", svg ? "true" : "false");
    put("output.dir", output_dir);
    put("diagnostics.semiconcavity_shift", std::to_string(semiconcavity_shift));
    put("diagnostics.osl_pairs", std::to_string(osl_pairs));
    put("diagnostics.gradient_samples", std::to_string(gradient_samples));
    std::string ct;
    for (double t : concentration_times) ct += (ct.empty() ? "" : ",") + num(t);
    put("diagnostics.concentration_times", ct);
    put("study.levels", std::to_string(study_levels));
    put("study.k_coeff", num(k_coeff));
    put("study.k_margin", num(k_margin));
    put("seed", std::to_string(seed));
    return e;
}

void validate(const RunConfig& c, bool study) {
    if (c.model != "schrodinger" && c.model != "bethe-salpeter" && c.model != "eikonal")
        config_error("model.name", "expected schrodinger, bethe-salpeter or eikonal, got '" + c.model + "'");
    if (c.potential.type == PotentialSpec::Type::Quadratic && !std::isfinite(c.potential.omega))
        config_error("model.potential.omega", "must be finite");
    if (c.dim != 1 && c.dim != 2) config_error("lattice.dim", "must be 1 or 2");
    for (int a = 0; a < c.dim; ++a)
        if (!(c.hi[a] > c.lo[a])) config_error("lattice.hi", "must exceed lattice.lo on every axis");
    if (c.padding && !(*c.padding >= 0.0)) config_error("lattice.padding", "must be >= 0");
    if (!(c.T >= 0.0)) config_error("time.T", "must be >= 0");
    if (!c.h && !c.N) config_error("time.h", "give time.h or time.N");
    if (c.h && !(*c.h > 0.0)) config_error("time.h", "must be > 0");
    if (c.N && *c.N < 0) config_error("time.N", "must be >= 0");
    if (c.h && c.N && std::abs(*c.h * *c.N - c.T) > 1e-9 * std::max(1.0, c.T))
        config_error("time.N", "time.h * time.N must equal time.T");
    if (c.h && !c.N) {
        const double steps = c.T / *c.h;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
            config_error("time.h", "time.T must be an integer multiple of time.h");
    }
    if (c.N && *c.N == 0 && !c.h && c.T != 0.0) config_error("time.N", "N = 0 requires time.T = 0 or time.h");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) config_error("mollifier.alpha", "must lie in (0, 1)");
    RunConfig resolved = c;
    if (study) resolved = level_config(c, 0);
    if (!resolved.k) config_error("lattice.k", "required");
    if (!(*resolved.k > 0.0)) config_error("lattice.k", "must be > 0");
    const double eps = resolved_eps(resolved);
    if (!(eps >= 2.0 * *resolved.k * (1.0 - 1e-12)))
        config_error("mollifier.epsilon",
                     "mollifier resolution rule violated: eps = " + num(eps) + " must be at least 2k = " +
                         num(2.0 * *resolved.k));
    if (c.u0 != "neg-abs" && c.u0 != "quadratic" && c.u0 != "constant" && c.u0 != "expression")
        config_error("initial.u0", "expected neg-abs, quadratic, constant or expression, got '" + c.u0 + "'");
    if (c.u0 == "expression") {
        if (c.u0_expression.empty()) config_error("initial.u0.expression", "required when initial.u0 = expression");
        io::Expression::parse(c.u0_expression);
    }
    if (c.measure != "none" && c.measure != "atoms" && c.measure != "uniform" && c.measure != "expression")
        config_error("measure.type", "expected none, atoms, uniform or expression, got '" + c.measure + "'");
    if (c.measure == "atoms" && c.atoms.empty()) config_error("measure.atoms", "at least one atom required");
    if (c.measure == "uniform")
        for (int a = 0; a < c.dim; ++a)
            if (!(c.measure_hi[a] > c.measure_lo[a])) config_error("measure.hi", "must exceed measure.lo");
    if (c.measure == "expression" && c.measure_expression.empty())
        config_error("measure.expression", "required when measure.type = expression");
    if (c.xi_points < 3 || c.xi_points % 2 == 0) config_error("solver.xi_points", "must be odd and >= 3");
    if (c.xi_radius && !(*c.xi_radius > 0.0)) config_error("solver.xi_radius", "must be > 0");
    if (!(c.fp_tol > 0.0)) config_error("flow.fp_tol", "must be > 0");
    if (c.fp_max_iter < 1) config_error("flow.fp_max_iter", "must be >= 1");
    for (double t : c.output_times)
        if (!(t >= 0.0 && t <= c.T + 1e-12)) config_error("output.times", "every time must lie in [0, T]");
    for (double t : c.concentration_times)
        if (!(t >= 0.0 && t <= c.T + 1e-12)) config_error("diagnostics.concentration_times", "every time must lie in [0, T]");
    if (c.semiconcavity_shift < 1) config_error("diagnostics.semiconcavity_shift", "must be >= 1");
    if (c.osl_pairs < 1) config_error("diagnostics.osl_pairs", "must be >= 1");
    if (c.gradient_samples < 1) config_error("diagnostics.gradient_samples", "must be >= 1");
    if (c.study_levels < 1) config_error("study.levels", "must be >= 1");
    if (!(c.k_coeff > 0.0)) config_error("study.k_coeff", "must be > 0");
    if (!(c.k_margin >= 0.0)) config_error("study.k_margin", "must be >= 0");
}

double resolved_h(const RunConfig& c) {
    if (c.h) return *c.h;
    return *c.N > 0 ? c.T / *c.N : 1.0;
}

int resolved_N(const RunConfig& c) {
    if (c.N) return *c.N;
    return static_cast<int>(std::llround(c.T / *c.h));
}

double resolved_eps(const RunConfig& c) { return c.eps ? *c.eps : std::pow(resolved_h(c), c.alpha); }

std::function<double(Vec)> initial_datum(const RunConfig& c) {
    if (c.u0 == "neg-abs") return [](Vec x) { return -norm(x); };
    if (c.u0 == "quadratic") return [](Vec x) { return 0.5 * norm2(x); };
    if (c.u0 == "constant") {
        const double v = c.u0_value;
        return [v](Vec) { return v; };
    }
    const auto e = io::Expression::parse(c.u0_expression);
    return [e](Vec x) { return e(x); };
}

std::optional<ExactSolution> exact_solution(const RunConfig& c) {
    if (c.potential.type != PotentialSpec::Type::Zero && c.potential.omega != 0.0) return std::nullopt;
    ExactSolution ex;
    if (c.u0 == "quadratic" && c.model == "schrodinger") {
        ex.u = [](Vec x, double t) { return norm2(x) / (2.0 * (1.0 + t)); };
        ex.grad = [](Vec x, double t) { return (1.0 / (1.0 + t)) * x; };
        return ex;
    }
    if (c.u0 == "neg-abs") {
        const double H1 = hamiltonian_at_unit(c.model);
        ex.u = [H1](Vec x, double t) { return -norm(x) - t * H1; };
        ex.grad = [](Vec x, double) {
            const double r = norm(x);
            return r > 0.0 ? (-1.0 / r) * x : Vec();
        };
        ex.kinks = {Vec()};
        return ex;
    }
    if (c.u0 == "constant") {
        const double v = c.u0_value, H0 = hamiltonian_at_zero(c.model);
        ex.u = [v, H0](Vec, double t) { return v - t * H0; };
        ex.grad = [](Vec, double) { return Vec(); };
        return ex;
    }
    return std::nullopt;
}

std::optional<ConcentrationReference> filippov_concentration(const RunConfig& c, double t, double r) {
    const bool flat = c.potential.type == PotentialSpec::Type::Zero || c.potential.omega == 0.0;
    if (!flat || c.dim != 1 || c.u0 != "neg-abs" || c.measure != "uniform") return std::nullopt;
    const double a = c.measure_lo.x, b = c.measure_hi.x;
    if (!(a <= 0.0 && b >= 0.0)) return std::nullopt;
    const double s = speed_at_unit(c.model) * t;
    auto overlap = [&](double w) { return std::max(0.0, std::min(b, w) - std::max(a, -w)); };
    return ConcentrationReference{c.measure_density * overlap(s), c.measure_density * overlap(s + r)};
}

double automatic_padding(const RunConfig& c, const HamiltonianModel& model, double lip_u0) {
    const double h = resolved_h(c);
    const double A = std::max(model.speed_bound(lip_u0), model.char_speed(lip_u0));
    return (c.T + h) * A + 3.0 * resolved_eps(c);
}

int time_index(double t, double h) { return static_cast<int>(std::floor(t / h + 1e-9)); }

namespace {

double corner_radius(Vec lo, Vec hi, int dim, double pad) {
    const double ax = std::max(std::abs(lo.x), std::abs(hi.x)) + pad;
    const double ay = dim == 2 ? std::max(std::abs(lo.y), std::abs(hi.y)) + pad : 0.0;
    return std::hypot(ax, ay);
}

MeasureDescription measure_description(const RunConfig& c) {
    if (c.measure == "atoms") return c.atoms;
    if (c.measure == "uniform") return std::vector<BoxDensity>{{c.measure_lo, c.measure_hi, c.measure_density}};
    const auto e = io::Expression::parse(c.measure_expression);
    return DensityCallback{[e](Vec x) { return e(x); }};
}

}  // namespace

ScenarioResult run_hj(const RunConfig& cfg) {
    validate(cfg);
    ScenarioResult r;
    r.cfg = cfg;
    const double h = resolved_h(cfg);
    const int N = resolved_N(cfg);
    const double eps = resolved_eps(cfg);
    const double k = *cfg.k;
    const auto u0f = initial_datum(cfg);

    const LatticeSpec bare(cfg.dim, k, cfg.lo, cfg.hi, 0.0);
    auto bare_ptr = std::make_shared<const LatticeSpec>(bare);
    const double lip0 = lipschitz_estimate(project(bare_ptr, u0f));

    const HamiltonianModel probe_model =
        make_model(cfg.model, cfg.dim, cfg.potential, corner_radius(cfg.lo, cfg.hi, cfg.dim, 0.0));
    const double pad = cfg.padding ? *cfg.padding : automatic_padding(cfg, probe_model, lip0);
    r.spec = std::make_shared<const LatticeSpec>(cfg.dim, k, cfg.lo, cfg.hi, pad);
    r.model = make_model(cfg.model, cfg.dim, cfg.potential, corner_radius(cfg.lo, cfg.hi, cfg.dim, pad + k));

    const LatticeField u0 = project(r.spec, u0f);
    r.constants.lip_u0 = lip0;
    r.constants.eps = eps;
    r.constants.padding = pad;
    r.constants.semiconcavity_u0 = discrete_semiconcavity_constant(u0, cfg.semiconcavity_shift);

    // C' h < 1 on the smoothed initial field, before any work is spent.
    const SmoothedField s0(u0, eps);
    r.constants.osl_prepass =
        osl_constant(s0, r.model, PairSampling{cfg.osl_pairs, k, cfg.seed});
    const double cph = std::max(r.constants.osl_prepass, 0.0) * h;
    if (!(cph < 1.0)) {
        std::ostringstream msg;
        msg << "one-sided Lipschitz guard violated: C'h = " << cph << " >= 1 (C' = " << r.constants.osl_prepass
            << ")";
        throw NoContractionError(msg.str(), cph);
    }

    HjSolverConfig hc;
    hc.h = h;
    hc.N = N;
    hc.xi_grid_points = cfg.xi_points;
    hc.xi_refine = cfg.xi_refine;
    hc.record_argmin = cfg.record_argmin;
    hc.xi_radius = cfg.xi_radius;
    hc.semiconcavity_shift = cfg.semiconcavity_shift;
    r.hj = solve(u0, r.model, hc);

    for (const StepStats& s : r.hj.stats) r.warnings.hj_clamped_feet += s.clamped_feet;
    for (const LatticeField& f : r.hj.fields)
        r.constants.lip_max = std::max(r.constants.lip_max, lipschitz_estimate(f, Region::Box));
    return r;
}

ScenarioResult run_system(const RunConfig& cfg) {
    if (cfg.measure == "none") throw Error(ErrorKind::Config, "measure.type: solve-system needs an initial measure");
    ScenarioResult r = run_hj(cfg);
    const double eps = r.constants.eps;

    const FlowConfig fc(r.hj.h, eps, r.model, std::max(r.constants.lip_max, r.constants.lip_u0), cfg.fp_tol,
                        cfg.fp_max_iter);
    r.constants.c_double_prime = fc.c_double_prime();
    r.constants.contraction_guard = fc.contraction_guard();

    r.m0 = project_measure(r.spec, measure_description(cfg));
    std::vector<Vec> seeds;
    for (std::size_t node : r.m0->support()) {
        seeds.push_back(r.spec->node(node));
        r.sources.push_back(node);
    }
    for (const Vec& p : cfg.probe_seeds) {
        seeds.push_back(p);
        r.sources.push_back(std::numeric_limits<std::size_t>::max());
    }

    r.flow = evolve(seeds, r.hj, r.model, fc);
    r.warnings.flow_clamps = r.flow->clamps;
    if (cfg.explicit_comparison) r.flow_explicit = evolve_explicit(seeds, r.hj, r.model, fc);

    for (int n = 0; n <= r.hj.steps(); ++n) {
        const PushForwardMatrix lambda = build_pushforward(*r.flow, n, *r.spec, r.sources, *r.m0);
        r.warnings.pushforward_clamps += lambda.clamps;
        r.measures.push_back(pushforward(*r.m0, lambda));
        r.mass_ledger.push_back(mass(r.measures.back()));
    }
    return r;
}

RunConfig level_config(const RunConfig& base, int level) {
    RunConfig c = base;
    const double scale = std::ldexp(1.0, -level);
    const double h = resolved_h(base) * scale;
    c.h = h;
    c.N = resolved_N(base) << level;
    c.k = base.k_coeff * std::pow(h, 1.0 + base.alpha + base.k_margin);
    return c;
}

StudyResult run_study(const RunConfig& cfg, int levels, bool keep_runs) {
    if (levels < 1) throw Error(ErrorKind::Config, "study.levels: must be >= 1");
    validate(cfg, true);
    const RunConfig& base = cfg;
    StudyResult out;
    const auto exact = exact_solution(cfg);
    std::optional<ProbeDictionary> probes;
    std::optional<DiscreteMeasure> previous;

    for (int l = 0; l < levels; ++l) {
        const RunConfig lc = level_config(base, l);
        ScenarioResult run = lc.measure == "none" ? run_hj(lc) : run_system(lc);
        StudyRow row;
        row.level = l;
        row.h = run.hj.h;
        row.k = *lc.k;
        row.eps = run.constants.eps;
        const double T = run.hj.time(run.hj.steps());
        const LatticeField& uT = run.hj.fields.back();
        if (exact) {
            row.sup_error = sup_error(uT, [&](Vec x) { return exact->u(x, T); });
            const SmoothedField sf(uT, row.eps);
            std::vector<Vec> samples;
            const int m = lc.gradient_samples;
            for (int i = 0; i < m; ++i) {
                const double s = (i + 0.5) / m;
                Vec x(lc.lo.x + s * (lc.hi.x - lc.lo.x));
                if (lc.dim == 2) x.y = lc.lo.y + std::fmod(s * 7.0, 1.0) * (lc.hi.y - lc.lo.y);
                samples.push_back(x);
            }
            row.gradient_error = gradient_error(sf, [&](Vec x) { return exact->grad(x, T); }, samples,
                                                KinkFilter{exact->kinks, 3.0 * row.eps});
        }
        if (!run.measures.empty()) {
            if (!probes) probes = ProbeDictionary::make(*run.spec);
            const DiscreteMeasure& mT = run.measures.back();
            if (previous) row.weak_star = weak_star_distance(*previous, mT, *probes);
            row.concentration_mass = mass_in_ball(mT, Vec(), row.eps + 2.0 * row.k);
            previous = mT;
        }
        out.rows.push_back(row);
        if (keep_runs) out.runs.push_back(std::move(run));
    }
    if (levels >= 2 && exact) {
        std::vector<std::pair<double, double>> se, ge;
        for (const auto& row : out.rows) {
            if (row.sup_error && *row.sup_error > 0.0) se.emplace_back(row.h, *row.sup_error);
            if (row.gradient_error && *row.gradient_error > 0.0) ge.emplace_back(row.h, *row.gradient_error);
        }
        if (se.size() >= 2) out.sup_slope = rate_regression(se);
        if (ge.size() >= 2) out.gradient_slope = rate_regression(ge);
    }
    return out;
}

}  // namespace semilag
