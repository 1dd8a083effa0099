#include "semilag/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "semilag/errors.hpp"

namespace semilag {

namespace {

// Neumaier's variant of compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0, comp_ = 0.0;
};

// Index of the half-open cell [x_i - k/2, x_i + k/2) containing coordinate x.
long cell_of(double x, double k) { return static_cast<long>(std::floor(x / k + 0.5)); }

}  // namespace

void DiscreteMeasure::add(std::size_t node, double w) {
    if (w == 0.0) return;
    weights_[node] += w;
}

double DiscreteMeasure::at(std::size_t node) const {
    const auto it = weights_.find(node);
    return it == weights_.end() ? 0.0 : it->second;
}

std::vector<std::size_t> DiscreteMeasure::support() const {
    std::vector<std::size_t> s;
    for (const auto& [i, w] : weights_)
        if (w != 0.0) s.push_back(i);
    return s;
}

DiscreteMeasure project_measure(std::shared_ptr<const LatticeSpec> spec, const MeasureDescription& m0) {
    DiscreteMeasure out(spec);
    const LatticeSpec& s = *spec;
    const double k = s.k();
    const int d = s.dim();

    auto node_of_cell = [&](long c0, long c1) -> std::size_t {
        const long i0 = c0 - s.origin(0), i1 = d == 2 ? c1 - s.origin(1) : 0;
        if (i0 < 0 || i0 >= s.count(0) || i1 < 0 || i1 >= s.count(1))
            throw Error(ErrorKind::UnsupportedMeasure, "initial measure has mass outside the padded lattice");
        return s.index({static_cast<int>(i0), static_cast<int>(i1)});
    };

    if (const auto* atoms = std::get_if<std::vector<Atom>>(&m0)) {
        for (const Atom& a : *atoms) {
            if (!std::isfinite(a.mass) || !std::isfinite(a.x.x) || !std::isfinite(a.x.y))
                throw Error(ErrorKind::UnsupportedMeasure, "atom with non-finite data");
            out.add(node_of_cell(cell_of(a.x.x, k), d == 2 ? cell_of(a.x.y, k) : 0), a.mass);
        }
        return out;
    }

    if (const auto* boxes = std::get_if<std::vector<BoxDensity>>(&m0)) {
        for (const BoxDensity& b : *boxes) {
            if (!std::isfinite(b.density)) throw Error(ErrorKind::UnsupportedMeasure, "non-finite density");
            for (int a = 0; a < d; ++a)
                if (!(b.hi[a] > b.lo[a])) throw Error(ErrorKind::UnsupportedMeasure, "degenerate density box");
            // Exact overlap of [lo, hi] with each cell, axis by axis.
            auto overlaps = [&](int axis) {
                std::vector<std::pair<long, double>> r;
                const long c_lo = cell_of(b.lo[axis], k), c_hi = cell_of(b.hi[axis], k);
                for (long c = c_lo; c <= c_hi; ++c) {
                    const double left = std::max(b.lo[axis], (c - 0.5) * k);
                    const double right = std::min(b.hi[axis], (c + 0.5) * k);
                    if (right > left) r.emplace_back(c, right - left);
                }
                return r;
            };
            const auto ox = overlaps(0);
            const auto oy = d == 2 ? overlaps(1) : std::vector<std::pair<long, double>>{{0, 1.0}};
            for (const auto& [cx, lx] : ox)
                for (const auto& [cy, ly] : oy) out.add(node_of_cell(cx, cy), b.density * lx * ly);
        }
        return out;
    }

    const auto& cb = std::get<DensityCallback>(m0);
    if (!cb.density) throw Error(ErrorKind::UnsupportedMeasure, "empty density callback");
    const double cell = std::pow(k, d);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = cb.density(s.node(i));
        if (!std::isfinite(v)) throw Error(ErrorKind::UnsupportedMeasure, "density callback returned non-finite value");
        out.add(i, v * cell);
    }
    return out;
}

PushForwardMatrix build_pushforward(const CharacteristicEnsemble& ens, int n, const LatticeSpec& spec,
                                    const std::vector<std::size_t>& sources, const DiscreteMeasure& m0) {
    if (n < 0 || n > ens.steps()) throw Error(ErrorKind::MissingTrajectory, "time level not in the ensemble");
    if (sources.size() != ens.seeds.size())
        throw Error(ErrorKind::InvalidArgument, "one source node per seed expected");
    std::unordered_map<std::size_t, std::size_t> seed_of;
    for (std::size_t s = 0; s < sources.size(); ++s) seed_of.emplace(sources[s], s);

    PushForwardMatrix lambda;
    for (const auto& [j, w] : m0.weights()) {
        if (w == 0.0) continue;
        const auto it = seed_of.find(j);
        if (it == seed_of.end()) throw Error(ErrorKind::MissingTrajectory, "support node without a trajectory");
        Vec x = ens.states[n][it->second];
        if (!spec.contains(x)) {
            ++lambda.clamps;
            x = spec.clamp(x);
        }
        lambda.columns.emplace(j, barycentric_weights(spec, x));
    }
    return lambda;
}

DiscreteMeasure pushforward(const DiscreteMeasure& m, const PushForwardMatrix& lambda) {
    std::map<std::size_t, CompensatedSum> acc;
    for (const auto& [j, w] : m.weights()) {
        if (w == 0.0) continue;
        const auto it = lambda.columns.find(j);
        if (it == lambda.columns.end()) throw Error(ErrorKind::MissingTrajectory, "weighted node without a column");
        const Stencil& st = it->second;
        for (int q = 0; q < st.size; ++q) acc[st.node[q]].add(st.weight[q] * w);
    }
    DiscreteMeasure out(m.spec_ptr());
    for (const auto& [i, s] : acc) out.add(i, s.value());
    return out;
}

double mass(const DiscreteMeasure& m) {
    CompensatedSum s;
    for (const auto& [i, w] : m.weights()) s.add(w);
    return s.value();
}

double tail_mass(const DiscreteMeasure& m, double R) {
    CompensatedSum s;
    for (const auto& [i, w] : m.weights())
        if (norm(m.spec().node(i)) > R) s.add(std::abs(w));
    return s.value();
}

double mass_in_ball(const DiscreteMeasure& m, Vec center, double r) {
    CompensatedSum s;
    for (const auto& [i, w] : m.weights())
        if (norm(m.spec().node(i) - center) <= r) s.add(w);
    return s.value();
}

double total_variation(const DiscreteMeasure& m) {
    CompensatedSum s;
    for (const auto& [i, w] : m.weights()) s.add(std::abs(w));
    return s.value();
}

ProbeDictionary ProbeDictionary::make(const LatticeSpec& ref, int stride) {
    if (stride < 1) throw Error(ErrorKind::InvalidArgument, "probe stride must be >= 1");
    ProbeDictionary dict;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto m = ref.multi_index(i);
        const auto o0 = ref.origin(0) + m[0], o1 = ref.dim() == 2 ? ref.origin(1) + m[1] : 0;
        if (o0 % stride != 0 || o1 % stride != 0) continue;
        const Vec x = ref.node(m);
        if (!ref.in_box(x, 1e-9 * ref.k())) continue;
        dict.probes_.push_back({Probe::Kind::Hat, x, ref.k()});
    }
    const Vec c = 0.5 * (ref.lo() + ref.hi());
    const double half = 0.5 * (ref.hi().x - ref.lo().x);
    const Vec shift(0.25 * half, ref.dim() == 2 ? 0.25 * (ref.hi().y - ref.lo().y) : 0.0);
    dict.probes_.push_back({Probe::Kind::Bump, c, 0.5 * half});
    dict.probes_.push_back({Probe::Kind::Bump, c - shift, 0.25 * half});
    dict.probes_.push_back({Probe::Kind::Bump, c + shift, 0.25 * half});
    return dict;
}

double ProbeDictionary::evaluate(std::size_t probe, Vec x) const {
    const Probe& p = probes_[probe];
    const Vec z = (1.0 / p.radius) * (x - p.center);
    if (p.kind == Probe::Kind::Hat) {
        // Kuhn-lattice hat: 1 - max(|dx|, |dy|, |dx - dy|) in cell units.
        const double r = std::max({std::abs(z.x), std::abs(z.y), std::abs(z.x - z.y)});
        return std::max(0.0, 1.0 - r);
    }
    const double q = 1.0 - norm2(z);
    return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

double weak_star_distance(const DiscreteMeasure& a, const DiscreteMeasure& b, const ProbeDictionary& probes) {
    double worst = 0.0;
    for (std::size_t p = 0; p < probes.probes().size(); ++p) {
        CompensatedSum s;
        for (const auto& [i, w] : a.weights()) s.add(w * probes.evaluate(p, a.spec().node(i)));
        for (const auto& [i, w] : b.weights()) s.add(-w * probes.evaluate(p, b.spec().node(i)));
        worst = std::max(worst, std::abs(s.value()));
    }
    return worst;
}

void write_csv(std::ostream& os, const DiscreteMeasure& m) {
    const LatticeSpec& s = m.spec();
    os << (s.dim() == 1 ? "node,i0,x,weight\n" : "node,i0,i1,x,y,weight\n");
    char buf[160];
    for (const auto& [i, w] : m.weights()) {
        const auto mi = s.multi_index(i);
        const Vec p = s.node(mi);
        if (s.dim() == 1)
            std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", i, mi[0], p.x, w);
        else
            std::snprintf(buf, sizeof buf, "%zu,%d,%d,%.17g,%.17g,%.17g\n", i, mi[0], mi[1], p.x, p.y, w);
        os << buf;
    }
}

}  // namespace semilag
