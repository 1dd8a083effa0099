#include "semilag/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "semilag/errors.hpp"
#include "semilag/io/config.hpp"
#include "semilag/io/csv.hpp"
#include "semilag/io/svg.hpp"
#include "semilag/kernels/kernels.hpp"

#ifndef SEMILAG_VERSION
#define SEMILAG_VERSION "0.0.0"
#endif

namespace semilag::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kTrajectoryLimit = 64;

std::string padded(int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05d", n);
    return buf;
}

/// Time indices to write: configured output times plus the final level.
std::vector<int> output_levels(const RunConfig& cfg, double h, int N) {
    std::vector<int> out;
    for (double t : cfg.output_times) out.push_back(std::min(time_index(t, h), N));
    out.push_back(N);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

json base_manifest(const std::string& command, const RunConfig& cfg) {
    json m;
    m["command"] = command;
    m["version"] = SEMILAG_VERSION;
    m["compiler"] = __VERSION__;
    m["isa"] = kernels::to_string(kernels::active_isa());
    m["seed"] = cfg.seed;
    json c = json::object();
    for (const auto& [k, v] : cfg.echo()) c[k] = v;
    m["config"] = c;
    return m;
}

json constants_json(const ScenarioResult& r) {
    const auto& c = r.constants;
    json j;
    j["lipschitz_u0"] = c.lip_u0;
    j["lipschitz_max"] = c.lip_max;
    j["semiconcavity_u0"] = c.semiconcavity_u0;
    j["semiconcavity_final"] = r.hj.stats.back().semiconcavity;
    j["osl_constant"] = c.osl_prepass;
    j["c_double_prime"] = c.c_double_prime;
    j["contraction_guard"] = c.contraction_guard;
    j["epsilon"] = c.eps;
    j["padding"] = c.padding;
    j["h"] = r.hj.h;
    j["k"] = r.spec->k();
    j["xi_radius"] = r.hj.stats.size() > 1 ? r.hj.stats[1].xi_radius : 0.0;
    return j;
}

json warnings_json(const RunWarnings& w) {
    json j;
    j["hj_clamped_feet"] = w.hj_clamped_feet;
    j["flow_clamps"] = w.flow_clamps;
    j["pushforward_clamps"] = w.pushforward_clamps;
    return j;
}

void write_manifest(const fs::path& out, const json& m) { io::write_text_file(out / "manifest.json", m.dump(2) + "\n"); }

template <class T>
std::string to_text(const T& obj) {
    std::ostringstream os;
    write_csv(os, obj);
    return os.str();
}

std::string to_trajectories(const CharacteristicEnsemble& ens) {
    std::ostringstream os;
    write_trajectories_csv(os, ens);
    return os.str();
}

/// Nodes of the row through y = 0 (or the whole lattice in 1D).
std::vector<std::size_t> plot_row(const LatticeSpec& spec) {
    std::vector<std::size_t> idx;
    if (spec.dim() == 1) {
        for (int i = 0; i < spec.count(0); ++i) idx.push_back(spec.index({i, 0}));
        return idx;
    }
    const long j = std::clamp<long>(spec.nearest(Vec(0.0, 0.0))[1], 0, spec.count(1) - 1);
    for (int i = 0; i < spec.count(0); ++i) idx.push_back(spec.index({i, static_cast<int>(j)}));
    return idx;
}

/// Shared by both solve commands: fields, step log, error summary, plot.
void write_hj_artifacts(const ScenarioResult& r, const fs::path& out, json& manifest, std::ostream& log) {
    const HjSolution& sol = r.hj;
    const int N = sol.steps();
    const auto levels = output_levels(r.cfg, sol.h, N);
    json files = json::array();
    for (int n : levels) {
        const std::string name = "fields/u_" + padded(n) + ".csv";
        io::write_text_file(out / name, to_text(sol.fields[n]));
        files.push_back(name);
    }
    io::write_text_file(out / "steps.csv", io::step_log(sol).str());
    manifest["fields"] = files;

    const auto exact = exact_solution(r.cfg);
    if (exact) {
        io::CsvTable errors({"n", "t", "sup_error"});
        for (int n : levels) {
            const double t = sol.time(n);
            const double e = sup_error(sol.fields[n], [&](Vec x) { return exact->u(x, t); });
            errors.row().cell(n).cell(t).cell(e);
            if (n == N) {
                manifest["sup_error_final"] = e;
                log << "sup error at T: " << io::format_real(e) << "\n";
            }
        }
        io::write_text_file(out / "errors.csv", errors.str());
    }

    if (r.cfg.svg) {
        const LatticeSpec& spec = *r.spec;
        const double T = sol.time(N);
        io::Series num{"u_h(T)", {}, {}, false}, ref{"exact", {}, {}, false};
        for (std::size_t i : plot_row(spec)) {
            const Vec x = spec.node(i);
            num.x.push_back(x.x);
            num.y.push_back(sol.fields[N][i]);
            if (exact) {
                ref.x.push_back(x.x);
                ref.y.push_back(exact->u(x, T));
            }
        }
        std::vector<io::Series> series{num};
        if (exact) series.push_back(ref);
        io::PlotOptions opt;
        opt.title = "u(x, T), T = " + io::format_real(T) + (spec.dim() == 2 ? ", row y = 0" : "");
        opt.xlabel = "x";
        opt.ylabel = "u";
        io::write_text_file(out / "u_T.svg", io::line_plot(series, opt));
    }
    log << "steps: " << N << ", h = " << io::format_real(sol.h) << ", k = " << io::format_real(r.spec->k())
        << ", nodes = " << r.spec->size() << "\n";
    if (r.warnings.hj_clamped_feet > 0)
        log << "warning: " << r.warnings.hj_clamped_feet << " clamped feet in the value iteration\n";
}

/// Every probe seed and an evenly spaced subset of the support seeds.
CharacteristicEnsemble trajectory_subset(const CharacteristicEnsemble& ens, const std::vector<std::size_t>& sources) {
    std::vector<std::size_t> keep, support;
    for (std::size_t s = 0; s < ens.seeds.size(); ++s) (sources[s] == SIZE_MAX ? keep : support).push_back(s);
    const std::size_t stride = std::max<std::size_t>(1, (support.size() + kTrajectoryLimit - 1) / kTrajectoryLimit);
    for (std::size_t i = 0; i < support.size(); i += stride) keep.push_back(support[i]);
    std::sort(keep.begin(), keep.end());

    CharacteristicEnsemble sub;
    sub.dim = ens.dim;
    sub.h = ens.h;
    for (std::size_t s : keep) sub.seeds.push_back(ens.seeds[s]);
    for (const auto& level : ens.states) {
        sub.states.emplace_back();
        for (std::size_t s : keep) sub.states.back().push_back(level[s]);
    }
    for (const auto& level : ens.velocities) {
        sub.velocities.emplace_back();
        for (std::size_t s : keep) sub.velocities.back().push_back(level[s]);
    }
    return sub;
}

double max_speed(const CharacteristicEnsemble& ens) {
    double v = 0.0;
    for (const auto& level : ens.velocities)
        for (const Vec& w : level) v = std::max(v, norm(w));
    return v;
}

}  // namespace

void cmd_solve_hj(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    validate(cfg);
    const ScenarioResult r = run_hj(cfg);
    json manifest = base_manifest("solve-hj", cfg);
    write_hj_artifacts(r, out, manifest, log);
    manifest["constants"] = constants_json(r);
    manifest["warnings"] = warnings_json(r.warnings);
    write_manifest(out, manifest);
}

void cmd_solve_system(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    validate(cfg);
    const ScenarioResult r = run_system(cfg);
    json manifest = base_manifest("solve-system", cfg);
    write_hj_artifacts(r, out, manifest, log);

    const int N = r.hj.steps();
    const double h = r.hj.h;
    json files = json::array();
    for (int n : output_levels(cfg, h, N)) {
        const std::string name = "measures/m_" + padded(n) + ".csv";
        io::write_text_file(out / name, to_text(r.measures[n]));
        files.push_back(name);
    }
    manifest["measures"] = files;

    io::CsvTable ledger({"n", "t", "mass"});
    for (int n = 0; n <= N; ++n) ledger.row().cell(n).cell(r.hj.time(n)).cell(r.mass_ledger[n]);
    io::write_text_file(out / "mass_ledger.csv", ledger.str());
    const double drift = std::abs(r.mass_ledger.back() - r.mass_ledger.front());
    manifest["mass_drift"] = drift;

    // Concentration around the origin at the configured times (or output times).
    std::vector<double> times = cfg.concentration_times;
    if (times.empty())
        for (int n : output_levels(cfg, h, N)) times.push_back(r.hj.time(n));
    const double radius = r.constants.eps + 2.0 * r.spec->k();
    const bool has_ref = filippov_concentration(cfg, 0.0, radius).has_value();
    std::vector<std::string> header{"t", "n", "radius", "mass"};
    if (has_ref) header.insert(header.end(), {"atom_reference", "ball_reference"});
    io::CsvTable conc(header);
    io::Series measured{"mass in ball", {}, {}, true}, atom{"collapsed mass (exact)", {}, {}, false},
        ball{"mass in ball (exact)", {}, {}, false};
    for (double t : times) {
        const int n = std::min(time_index(t, h), N);
        const double m = mass_in_ball(r.measures[n], Vec(), radius);
        conc.row().cell(r.hj.time(n)).cell(n).cell(radius).cell(m);
        measured.x.push_back(r.hj.time(n));
        measured.y.push_back(m);
        if (has_ref) {
            const auto ref = *filippov_concentration(cfg, r.hj.time(n), radius);
            conc.cell(ref.atom_mass).cell(ref.ball_mass);
            atom.x.push_back(r.hj.time(n));
            atom.y.push_back(ref.atom_mass);
            ball.x.push_back(r.hj.time(n));
            ball.y.push_back(ref.ball_mass);
        }
    }
    io::write_text_file(out / "concentration.csv", conc.str());
    if (cfg.svg) {
        std::vector<io::Series> series{measured};
        if (has_ref) series.insert(series.end(), {atom, ball});
        io::PlotOptions opt;
        opt.title = "mass within " + io::format_real(radius) + " of the origin";
        opt.xlabel = "t";
        opt.ylabel = "mass";
        io::write_text_file(out / "concentration.svg", io::line_plot(series, opt));
    }

    const CharacteristicEnsemble& ens = *r.flow;
    io::write_text_file(out / "trajectories.csv", to_trajectories(trajectory_subset(ens, r.sources)));
    if (r.flow_explicit)
        io::write_text_file(out / "trajectories_explicit.csv",
                            to_trajectories(trajectory_subset(*r.flow_explicit, r.sources)));

    const double vmax = max_speed(ens);
    json flow;
    flow["seeds"] = ens.seeds.size();
    flow["max_speed"] = vmax;
    flow["max_fixed_point_iterations"] = ens.max_iterations;
    flow["max_observed_contraction"] = ens.max_contraction;
    manifest["flow"] = flow;
    manifest["constants"] = constants_json(r);
    manifest["warnings"] = warnings_json(r.warnings);
    write_manifest(out, manifest);

    log << "seeds: " << ens.seeds.size() << ", mass drift: " << io::format_real(drift) << "\n";
    log << "max |velocity| = " << io::format_real(vmax);
    if (cfg.model == "bethe-salpeter")
        log << " (bound sqrt(2): " << (vmax <= std::sqrt(2.0) ? "holds" : "VIOLATED") << ")";
    log << "\n";
    if (r.warnings.flow_clamps > 0 || r.warnings.pushforward_clamps > 0)
        log << "warning: " << r.warnings.flow_clamps << " flow clamps, " << r.warnings.pushforward_clamps
            << " push-forward clamps\n";
}

void cmd_convergence_study(const RunConfig& cfg, int levels, const fs::path& out, std::ostream& log) {
    const StudyResult s = run_study(cfg, levels);
    auto opt_cell = [](io::CsvTable& t, const std::optional<double>& v) {
        if (v) t.cell(*v);
        else t.cell(std::string());
    };
    io::CsvTable table({"level", "h", "k", "eps", "sup_error", "gradient_error", "weak_star_distance",
                        "concentration_mass"});
    io::Series sup{"sup error", {}, {}, true}, grad{"gradient error", {}, {}, true},
        weak{"weak-* distance to previous level", {}, {}, true};
    for (const StudyRow& row : s.rows) {
        table.row().cell(row.level).cell(row.h).cell(row.k).cell(row.eps);
        opt_cell(table, row.sup_error);
        opt_cell(table, row.gradient_error);
        opt_cell(table, row.weak_star);
        opt_cell(table, row.concentration_mass);
        if (row.sup_error) sup.x.push_back(row.h), sup.y.push_back(*row.sup_error);
        if (row.gradient_error) grad.x.push_back(row.h), grad.y.push_back(*row.gradient_error);
        if (row.weak_star) weak.x.push_back(row.h), weak.y.push_back(*row.weak_star);
        log << "level " << row.level << ": h = " << io::format_real(row.h);
        if (row.sup_error) log << ", sup error = " << io::format_real(*row.sup_error);
        if (row.weak_star) log << ", weak-* = " << io::format_real(*row.weak_star);
        log << "\n";
    }
    io::write_text_file(out / "rates.csv", table.str());

    if (cfg.svg) {
        std::vector<io::Series> series;
        for (const auto* x : {&sup, &grad, &weak})
            if (!x->x.empty()) series.push_back(*x);
        io::PlotOptions opt;
        opt.title = "refinement study";
        opt.xlabel = "h";
        opt.ylabel = "error";
        opt.loglog = true;
        io::write_text_file(out / "rates.svg", io::line_plot(series, opt));
    }

    json manifest = base_manifest("study", cfg);
    manifest["levels"] = levels;
    manifest["sup_slope"] = s.sup_slope ? json(*s.sup_slope) : json();
    manifest["gradient_slope"] = s.gradient_slope ? json(*s.gradient_slope) : json();
    write_manifest(out, manifest);
    if (s.sup_slope) log << "sup error slope: " << io::format_real(*s.sup_slope) << "\n";
    if (s.gradient_slope) log << "gradient error slope: " << io::format_real(*s.gradient_slope) << "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
    CLI::App app{"Semi-Lagrangian solver for Hamilton-Jacobi equations and transported measures", "semilag"};
    app.require_subcommand(1);
    std::string config;
    std::string out_dir;
    long long seed = -1;
    int levels = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "RNG seed (overrides seed)")->check(CLI::NonNegativeNumber);
    };
    CLI::App* hj = app.add_subcommand("solve-hj", "value iteration only");
    CLI::App* sys = app.add_subcommand("solve-system", "value iteration, flow and measure transport");
    CLI::App* study = app.add_subcommand("study", "refinement study with k and eps slaved to h");
    for (CLI::App* sub : {hj, sys, study}) add_common(sub);
    study->add_option("--levels", levels, "number of refinement levels (overrides study.levels)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        log << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        log << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig cfg = io::load_config(config);
        if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
        // --out is not echoed into the manifest, so reruns elsewhere stay identical
        const fs::path out = out_dir.empty() ? cfg.output_dir : out_dir;
        if (hj->parsed()) cmd_solve_hj(cfg, out, log);
        else if (sys->parsed()) cmd_solve_system(cfg, out, log);
        else cmd_convergence_study(cfg, levels > 0 ? levels : cfg.study_levels, out, log);
        log << "wrote " << out.string() << "\n";
        return 0;
    } catch (const NoContractionError& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidArgument ? 2 : 1;
    } catch (const fs::filesystem_error& e) {
        err << "filesystem error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace semilag::cli
