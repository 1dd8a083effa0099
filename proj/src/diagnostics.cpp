#include "semilag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "semilag/errors.hpp"

namespace semilag {

namespace {

bool node_in_region(const LatticeSpec& s, std::size_t i, Region region) {
    return region == Region::Padded || s.in_box(s.node(i), 1e-9 * s.k());
}

}  // namespace

double sup_norm(const LatticeField& u, Region region) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (node_in_region(u.spec(), i, region)) m = std::max(m, std::abs(u[i]));
    return m;
}

double lipschitz_estimate(const LatticeField& u, Region region) {
    const LatticeSpec& s = u.spec();
    const double k = s.k();
    double best = 0.0;
    if (s.dim() == 1) {
        for (int i = 0; i + 1 < s.count(0); ++i) {
            if (!node_in_region(s, s.index({i, 0}), region) || !node_in_region(s, s.index({i + 1, 0}), region))
                continue;
            best = std::max(best, std::abs(u[s.index({i + 1, 0})] - u[s.index({i, 0})]) / k);
        }
        return best;
    }
    for (int i = 0; i + 1 < s.count(0); ++i) {
        for (int j = 0; j + 1 < s.count(1); ++j) {
            const std::size_t a = s.index({i, j}), b = s.index({i + 1, j});
            const std::size_t c = s.index({i, j + 1}), d = s.index({i + 1, j + 1});
            if (!node_in_region(s, a, region) || !node_in_region(s, d, region)) continue;
            const Vec lower((u[b] - u[a]) / k, (u[d] - u[b]) / k);
            const Vec upper((u[d] - u[c]) / k, (u[c] - u[a]) / k);
            best = std::max({best, norm(lower), norm(upper)});
        }
    }
    return best;
}

double discrete_semiconcavity_constant(const LatticeField& u, int max_shift) {
    const LatticeSpec& s = u.spec();
    const double k = s.k();
    const int sy = s.dim() == 2 ? max_shift : 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        if (!node_in_region(s, idx, Region::Box)) continue;
        const auto m = s.multi_index(idx);
        // j and -j give the same quotient; visit one of each pair.
        for (int a = 0; a <= max_shift; ++a) {
            for (int b = -sy; b <= sy; ++b) {
                if (a == 0 && b <= 0) continue;
                const int p0 = m[0] + a, p1 = m[1] + b, q0 = m[0] - a, q1 = m[1] - b;
                if (p0 < 0 || q0 < 0 || p0 >= s.count(0) || q0 >= s.count(0)) continue;
                if (p1 < 0 || q1 < 0 || p1 >= s.count(1) || q1 >= s.count(1)) continue;
                const double d2 = (u[s.index({p0, p1})] - 2.0 * u[idx] + u[s.index({q0, q1})]);
                best = std::max(best, d2 / ((a * a + b * b) * k * k));
            }
        }
    }
    return best;
}

double osl_constant(const std::vector<Vec>& points, const std::vector<Vec>& velocities, double min_sep) {
    if (points.size() != velocities.size())
        throw Error(ErrorKind::InvalidArgument, "points and velocities differ in length");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const Vec dx = points[i] - points[j];
            const double d2 = norm2(dx);
            if (d2 < min_sep * min_sep || d2 == 0.0) continue;
            best = std::max(best, dot(velocities[i] - velocities[j], dx) / d2);
        }
    }
    return best;
}

double osl_constant(const SmoothedField& field, const HamiltonianModel& model, const PairSampling& sampling) {
    const LatticeSpec& s = field.base().spec();
    const double min_sep = std::max(sampling.min_sep, s.k());
    const Vec lo = s.lo(), hi = s.hi();
    const double diameter = norm(hi - lo);
    if (!(diameter > min_sep)) throw Error(ErrorKind::InvalidArgument, "box smaller than the pair separation");

    std::mt19937_64 rng(sampling.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lmin = std::log10(min_sep), lmax = std::log10(diameter);
    const int decades = std::max(1, static_cast<int>(std::ceil(lmax - lmin)));

    auto vel = [&](Vec x) { return model.velocity(x, field.gradient(x)); };
    double best = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < sampling.pairs; ++p) {
        const int dec = p % decades;
        const double a = lmin + (lmax - lmin) * dec / decades;
        const double b = lmin + (lmax - lmin) * (dec + 1) / decades;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const double sep = std::pow(10.0, a + (b - a) * unit(rng));
            Vec dir(unit(rng) < 0.5 ? -1.0 : 1.0);
            if (s.dim() == 2) {
                const double th = 2.0 * std::numbers::pi * unit(rng);
                dir = Vec(std::cos(th), std::sin(th));
            }
            Vec x(lo.x + (hi.x - lo.x) * unit(rng));
            if (s.dim() == 2) x.y = lo.y + (hi.y - lo.y) * unit(rng);
            const Vec y = x + sep * dir;
            if (!s.in_box(y, 0.0)) continue;
            const Vec dx = x - y;
            best = std::max(best, dot(vel(x) - vel(y), dx) / norm2(dx));
            break;
        }
    }
    return best;
}

double sup_error(const LatticeField& u, const std::function<double(Vec)>& exact) {
    const LatticeSpec& s = u.spec();
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (node_in_region(s, i, Region::Box)) m = std::max(m, std::abs(u[i] - exact(s.node(i))));
    return m;
}

double gradient_error(const SmoothedField& field, const std::function<Vec(Vec)>& exact_grad,
                      const std::vector<Vec>& samples, const KinkFilter& filter) {
    double m = 0.0;
    for (const Vec& x : samples) {
        bool near_kink = false;
        for (const Vec& kp : filter.kinks)
            if (norm(x - kp) < filter.standoff) near_kink = true;
        if (near_kink) continue;
        m = std::max(m, norm(field.gradient(x) - exact_grad(x)));
    }
    return m;
}

double rate_regression(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw Error(ErrorKind::DegenerateFit, "need at least two (h, error) pairs");
    double mx = 0.0, my = 0.0;
    for (const auto& [h, e] : pairs) {
        if (!(h > 0.0) || !(e > 0.0))
            throw Error(ErrorKind::DegenerateFit, "h and error must be positive for a log-log fit");
        mx += std::log(h);
        my += std::log(e);
    }
    mx /= pairs.size();
    my /= pairs.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [h, e] : pairs) {
        const double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(e) - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateFit, "all h values are equal");
    return sxy / sxx;
}

}  // namespace semilag
