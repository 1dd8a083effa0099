#include "semilag/io/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "semilag/errors.hpp"

namespace semilag::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

struct Field {
    std::string key;
    std::string value;
    int line;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Config, key + " (line " + std::to_string(line) + "): " + what);
    }

    double real() const { return parse_real(value); }

    double parse_real(const std::string& s) const {
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0' || errno == ERANGE) fail("expected a number, got '" + s + "'");
        return v;
    }

    long integer() const {
        errno = 0;
        char* end = nullptr;
        const long v = std::strtol(value.c_str(), &end, 10);
        if (value.empty() || *end != '\0' || errno == ERANGE) fail("expected an integer, got '" + value + "'");
        return v;
    }

    bool boolean() const {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        fail("expected true or false, got '" + value + "'");
    }

    std::vector<double> reals() const {
        std::vector<double> v;
        if (value.empty()) return v;
        for (const auto& part : split(value, ',')) v.push_back(parse_real(part));
        return v;
    }

    Vec point() const {
        const auto v = reals();
        if (v.size() == 1) return Vec(v[0]);
        if (v.size() == 2) return Vec(v[0], v[1]);
        fail("expected one or two comma-separated numbers");
    }

    std::vector<Vec> points() const {
        std::vector<Vec> out;
        if (value.empty()) return out;
        for (const auto& item : split(value, ';')) {
            Field f{key, item, line};
            out.push_back(f.point());
        }
        return out;
    }

    std::vector<Atom> atoms() const {
        std::vector<Atom> out;
        for (const auto& item : split(value, ';')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) fail("atom '" + item + "' needs the form position:mass");
            Field pos{key, trim(item.substr(0, colon)), line};
            out.push_back({pos.point(), parse_real(trim(item.substr(colon + 1)))});
        }
        return out;
    }
};

using Setter = std::function<void(RunConfig&, const Field&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model.name", [](RunConfig& c, const Field& f) { c.model = f.value; }},
        {"model.potential.type",
         [](RunConfig& c, const Field& f) {
             if (f.value == "zero") c.potential.type = PotentialSpec::Type::Zero;
             else if (f.value == "quadratic") c.potential.type = PotentialSpec::Type::Quadratic;
             else f.fail("expected zero or quadratic");
         }},
        {"model.potential.omega", [](RunConfig& c, const Field& f) { c.potential.omega = f.real(); }},
        {"lattice.dim", [](RunConfig& c, const Field& f) { c.dim = static_cast<int>(f.integer()); }},
        {"lattice.lo", [](RunConfig& c, const Field& f) { c.lo = f.point(); }},
        {"lattice.hi", [](RunConfig& c, const Field& f) { c.hi = f.point(); }},
        {"lattice.k", [](RunConfig& c, const Field& f) { c.k = f.real(); }},
        {"lattice.padding",
         [](RunConfig& c, const Field& f) {
             if (f.value == "auto") c.padding.reset();
             else c.padding = f.real();
         }},
        {"time.T", [](RunConfig& c, const Field& f) { c.T = f.real(); }},
        {"time.h", [](RunConfig& c, const Field& f) { c.h = f.real(); }},
        {"time.N", [](RunConfig& c, const Field& f) { c.N = static_cast<int>(f.integer()); }},
        {"mollifier.alpha", [](RunConfig& c, const Field& f) { c.alpha = f.real(); }},
        {"mollifier.epsilon", [](RunConfig& c, const Field& f) { c.eps = f.real(); }},
        {"initial.u0", [](RunConfig& c, const Field& f) { c.u0 = f.value; }},
        {"initial.u0.value", [](RunConfig& c, const Field& f) { c.u0_value = f.real(); }},
        {"initial.u0.expression", [](RunConfig& c, const Field& f) { c.u0_expression = f.value; }},
        {"measure.type", [](RunConfig& c, const Field& f) { c.measure = f.value; }},
        {"measure.atoms", [](RunConfig& c, const Field& f) { c.atoms = f.atoms(); }},
        {"measure.lo", [](RunConfig& c, const Field& f) { c.measure_lo = f.point(); }},
        {"measure.hi", [](RunConfig& c, const Field& f) { c.measure_hi = f.point(); }},
        {"measure.density", [](RunConfig& c, const Field& f) { c.measure_density = f.real(); }},
        {"measure.expression", [](RunConfig& c, const Field& f) { c.measure_expression = f.value; }},
        {"solver.xi_points", [](RunConfig& c, const Field& f) { c.xi_points = static_cast<int>(f.integer()); }},
        {"solver.xi_refine", [](RunConfig& c, const Field& f) { c.xi_refine = f.boolean(); }},
        {"solver.record_argmin", [](RunConfig& c, const Field& f) { c.record_argmin = f.boolean(); }},
        {"solver.xi_radius",
         [](RunConfig& c, const Field& f) {
             if (f.value == "auto") c.xi_radius.reset();
             else c.xi_radius = f.real();
         }},
        {"flow.fp_tol", [](RunConfig& c, const Field& f) { c.fp_tol = f.real(); }},
        {"flow.fp_max_iter", [](RunConfig& c, const Field& f) { c.fp_max_iter = static_cast<int>(f.integer()); }},
        {"flow.seeds", [](RunConfig& c, const Field& f) { c.probe_seeds = f.points(); }},
        {"flow.explicit_comparison", [](RunConfig& c, const Field& f) { c.explicit_comparison = f.boolean(); }},
        {"output.times", [](RunConfig& c, const Field& f) { c.output_times = f.reals(); }},
        {"output.svg", [](RunConfig& c, const Field& f) { c.svg = f.boolean(); }},
        {"output.dir", [](RunConfig& c, const Field& f) { c.output_dir = f.value; }},
        {"diagnostics.semiconcavity_shift",
         [](RunConfig& c, const Field& f) { c.semiconcavity_shift = static_cast<int>(f.integer()); }},
        {"diagnostics.osl_pairs", [](RunConfig& c, const Field& f) { c.osl_pairs = static_cast<int>(f.integer()); }},
        {"diagnostics.gradient_samples",
         [](RunConfig& c, const Field& f) { c.gradient_samples = static_cast<int>(f.integer()); }},
        {"diagnostics.concentration_times", [](RunConfig& c, const Field& f) { c.concentration_times = f.reals(); }},
        {"study.levels", [](RunConfig& c, const Field& f) { c.study_levels = static_cast<int>(f.integer()); }},
        {"study.k_coeff", [](RunConfig& c, const Field& f) { c.k_coeff = f.real(); }},
        {"study.k_margin", [](RunConfig& c, const Field& f) { c.k_margin = f.real(); }},
        {"seed",
         [](RunConfig& c, const Field& f) {
             const long v = f.integer();
             if (v < 0) f.fail("must be >= 0");
             c.seed = static_cast<unsigned long long>(v);
         }},
    };
    return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Config, "line " + std::to_string(line) + ": expected 'key = value'");
        const Field f{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line};
        const auto it = setters().find(f.key);
        if (it == setters().end()) f.fail("unknown key");
        if (!seen.insert(f.key).second) f.fail("key given twice");
        it->second(cfg, f);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace semilag::io
