#include "semilag/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

#include "semilag/errors.hpp"

namespace semilag {

LatticeSpec::LatticeSpec(int dim, double k, Vec lo, Vec hi, double padding)
    : dim_(dim), k_(k), lo_(lo), hi_(hi), padding_(padding) {
    if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "lattice dim must be 1 or 2");
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "lattice step k must be > 0");
    if (!(padding >= 0.0)) throw Error(ErrorKind::InvalidArgument, "padding must be >= 0");
    for (int a = 0; a < dim; ++a) {
        if (!(hi[a] > lo[a])) throw Error(ErrorKind::InvalidArgument, "lattice box is degenerate");
        const long o = static_cast<long>(std::floor((lo[a] - padding) / k + 1e-9));
        const long e = static_cast<long>(std::ceil((hi[a] + padding) / k - 1e-9));
        origin_[a] = o;
        const long n = e - o + 1;
        if (n > 50'000'000) throw Error(ErrorKind::InvalidArgument, "lattice too large");
        count_[a] = static_cast<int>(n);
    }
    if (dim == 1) {
        lo_.y = hi_.y = 0.0;
    }
}

Vec LatticeSpec::node(std::array<int, 2> m) const {
    Vec v((origin_[0] + m[0]) * k_);
    if (dim_ == 2) v.y = (origin_[1] + m[1]) * k_;
    return v;
}

bool LatticeSpec::contains(Vec x) const {
    const Vec a = padded_lo(), b = padded_hi();
    for (int i = 0; i < dim_; ++i)
        if (!(x[i] >= a[i] && x[i] <= b[i])) return false;
    return true;
}

bool LatticeSpec::in_box(Vec x, double tol) const {
    for (int i = 0; i < dim_; ++i)
        if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
    return true;
}

Vec LatticeSpec::clamp(Vec x) const {
    const Vec a = padded_lo(), b = padded_hi();
    Vec r(std::clamp(x.x, a.x, b.x));
    if (dim_ == 2) r.y = std::clamp(x.y, a.y, b.y);
    return r;
}

std::array<long, 2> LatticeSpec::nearest(Vec x) const {
    std::array<long, 2> m{0, 0};
    for (int i = 0; i < dim_; ++i) m[i] = static_cast<long>(std::floor(x[i] / k_ + 0.5)) - origin_[i];
    return m;
}

bool LatticeSpec::operator==(const LatticeSpec& o) const {
    return dim_ == o.dim_ && k_ == o.k_ && origin_ == o.origin_ && count_ == o.count_;
}

namespace {

// Cell index and local coordinate in [0,1] along one axis; the last cell
// absorbs the upper boundary.
inline void locate(double x, double k, long origin, int count, int& cell, double& frac) {
    const double q = x / k;
    // Node coordinates are (origin + m) k; undo the rounding of that product so
    // nodes map back onto exact integers and P1 stays interpolatory.
    const double r = std::round(q);
    const double s = (std::abs(q - r) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(q))
                          ? r
                          : q) -
                     static_cast<double>(origin);
    int c = static_cast<int>(std::floor(s));
    c = std::clamp(c, 0, std::max(count - 2, 0));
    cell = c;
    frac = count > 1 ? std::clamp(s - c, 0.0, 1.0) : 0.0;
}

}  // namespace

Stencil barycentric_weights(const LatticeSpec& spec, Vec x) {
    if (!spec.contains(x)) throw Error(ErrorKind::OutOfDomain, "point outside the padded lattice box");
    Stencil st;
    auto push = [&st](std::size_t n, double w) {
        if (w > 0.0) {
            st.node[st.size] = n;
            st.weight[st.size] = w;
            ++st.size;
        }
    };
    int cx, cy = 0;
    double fx, fy = 0.0;
    locate(x.x, spec.k(), spec.origin(0), spec.count(0), cx, fx);
    if (spec.dim() == 1) {
        push(spec.index({cx, 0}), 1.0 - fx);
        push(spec.index({cx + 1, 0}), fx);
        return st;
    }
    locate(x.y, spec.k(), spec.origin(1), spec.count(1), cy, fy);
    if (fx >= fy) {
        push(spec.index({cx, cy}), 1.0 - fx);
        push(spec.index({cx + 1, cy}), fx - fy);
        push(spec.index({cx + 1, cy + 1}), fy);
    } else {
        push(spec.index({cx, cy}), 1.0 - fy);
        push(spec.index({cx, cy + 1}), fy - fx);
        push(spec.index({cx + 1, cy + 1}), fx);
    }
    return st;
}

LatticeField::LatticeField(std::shared_ptr<const LatticeSpec> spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
    if (values_.size() != spec_->size())
        throw Error(ErrorKind::InvalidArgument, "field size does not match lattice");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteResult, "non-finite nodal value");
}

double interpolate(const LatticeField& field, Vec x) {
    const Stencil st = barycentric_weights(field.spec(), x);
    double v = 0.0;
    for (int i = 0; i < st.size; ++i) v += st.weight[i] * field[st.node[i]];
    return v;
}

double interpolate_clamped(const LatticeField& field, Vec x, long& clamp_count) {
    if (!field.spec().contains(x)) {
        ++clamp_count;
        x = field.spec().clamp(x);
    }
    return interpolate(field, x);
}

LatticeField project(std::shared_ptr<const LatticeSpec> spec, const std::function<double(Vec)>& f) {
    std::vector<double> v(spec->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(spec->node(i));
    return LatticeField(std::move(spec), std::move(v));
}

double interpolation_error_bound(const LatticeSpec& spec, double second_diff_bound) {
    return spec.k() * spec.k() * spec.dim() / 4.0 * second_diff_bound;
}

void write_csv(std::ostream& os, const LatticeField& field) {
    const LatticeSpec& s = field.spec();
    char buf[128];
    os << (s.dim() == 1 ? "i0,x,value\n" : "i0,i1,x,y,value\n");
    for (std::size_t i = 0; i < field.size(); ++i) {
        const auto m = s.multi_index(i);
        const Vec p = s.node(m);
        if (s.dim() == 1)
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", m[0], p.x, field[i]);
        else
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", m[0], m[1], p.x, p.y, field[i]);
        os << buf;
    }
}

}  // namespace semilag
