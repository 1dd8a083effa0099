#include "semilag/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semilag/errors.hpp"
#include "semilag/kernels/kernels.hpp"

namespace semilag {

namespace {

double bump(double r2) {
    const double q = 1.0 - r2;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// The integrands vanish to all orders at |z| = 1, so the trapezoid rule
// converges faster than any power of the step.
template <class F>
double trapezoid(F&& f, double a, double b, int n) {
    const double step = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + i * step);
    return s * step;
}

}  // namespace

double mollifier_constant(int dim) {
    if (dim == 1) return 1.0 / trapezoid([](double x) { return bump(x * x); }, -1.0, 1.0, 4000);
    // r rho(r) has nonzero odd derivatives at r = 0, where the trapezoid rule is
    // only second order; one Richardson step makes it fourth order.
    auto f = [](double r) { return bump(r * r) * r; };
    const double radial = (4.0 * trapezoid(f, 0.0, 1.0, 8000) - trapezoid(f, 0.0, 1.0, 4000)) / 3.0;
    return 1.0 / (2.0 * std::numbers::pi * radial);
}

double MollifierKernel::operator()(Vec z) const {
    return c_d * bump(norm2(z) / (eps * eps)) / std::pow(eps, dim);
}

Vec MollifierKernel::gradient(Vec z) const {
    const double r2 = norm2(z) / (eps * eps);
    const double q = 1.0 - r2;
    if (!(q > 0.0)) return {};
    const double c = c_d * bump(r2) * (-2.0) / (q * q) / std::pow(eps, dim + 2);
    return c * z;
}

MollifierKernel mollifier_kernel(double eps, int dim) {
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "mollifier radius must be > 0");
    MollifierKernel k;
    k.dim = dim;
    k.eps = eps;
    k.c_d = mollifier_constant(dim);
    if (dim == 1) {
        // |rho'| integrates to twice the peak.
        k.grad_l1 = 2.0 * k.c_d * std::exp(-1.0);
    } else {
        // int |grad rho| = 2 pi int_0^1 |rho'(r)| r dr = 2 pi int_0^1 rho(r) dr
        // rho is even in r, so integrate over [-1, 1] where the rule is spectral
        k.grad_l1 = std::numbers::pi * k.c_d * trapezoid([](double r) { return bump(r * r); }, -1.0, 1.0, 4000);
    }
    return k;
}

SmoothedField::SmoothedField(LatticeField base, double eps)
    : base_(std::move(base)), kernel_(mollifier_kernel(eps, base_.spec().dim())) {
    const LatticeSpec& s = base_.spec();
    if (eps < 2.0 * s.k() * (1.0 - 1e-12))
        throw Error(ErrorKind::InvalidArgument,
                    "mollifier resolution rule violated: eps must be at least 2k");
    if (s.count(0) < 2 || (s.dim() == 2 && s.count(1) < 2))
        throw Error(ErrorKind::InvalidArgument, "lattice needs at least two nodes per axis");

    const int R = static_cast<int>(std::floor(eps / s.k()));
    const int Ry = s.dim() == 2 ? R : 0;
    double mass = 0.0;
    for (int a = -R; a <= R; ++a) {
        for (int b = -Ry; b <= Ry; ++b) {
            const Vec z(a * s.k(), b * s.k());
            const double w = kernel_(z);
            if (w <= 0.0) continue;
            stencil_.offset.push_back({a, b});
            stencil_.weight.push_back(w);
            stencil_.grad_weight.push_back(kernel_.gradient(z));
            mass += w;
        }
    }
    const double scale = 1.0 / (mass * std::pow(s.k(), s.dim()));
    for (double& w : stencil_.weight) w *= scale;
    for (Vec& g : stencil_.grad_weight) g *= scale;
}

SmoothedField::Eval SmoothedField::evaluate(Vec x) const {
    const LatticeSpec& s = base_.spec();
    if (!s.contains(x)) throw Error(ErrorKind::OutOfDomain, "smoothing point outside the padded box");
    const double k = s.k();
    const double eps = kernel_.eps;
    const double* u = base_.values().data();

    auto range = [&](int axis, int& lo, int& hi) {
        const long o = s.origin(axis);
        lo = static_cast<int>(std::max<long>(static_cast<long>(std::ceil((x[axis] - eps) / k)) - o, 0));
        hi = static_cast<int>(std::min<long>(static_cast<long>(std::floor((x[axis] + eps) / k)) - o,
                                             s.count(axis) - 1));
    };

    const auto near = s.nearest(x);
    const double uref = u[s.index({static_cast<int>(std::clamp<long>(near[0], 0, s.count(0) - 1)),
                                   static_cast<int>(std::clamp<long>(near[1], 0, s.count(1) - 1))})];

    kernels::BumpMoments m;
    int lo0, hi0;
    range(0, lo0, hi0);
    double gx = 0.0, gy = 0.0, gux = 0.0, guy = 0.0;
    if (s.dim() == 1) {
        if (hi0 >= lo0) {
            const double zv0 = (x.x - (s.origin(0) + lo0) * k) / eps;
            kernels::bump_row_accumulate(u + lo0, hi0 - lo0 + 1, zv0, k / eps, 0.0, uref, m);
        }
        gx = m.gv;
        gux = m.guv;
    } else {
        int lo1, hi1;
        range(1, lo1, hi1);
        if (hi1 >= lo1) {
            const double zv0 = (x.y - (s.origin(1) + lo1) * k) / eps;
            for (int i0 = lo0; i0 <= hi0; ++i0) {
                const double zf = (x.x - (s.origin(0) + i0) * k) / eps;
                if (std::abs(zf) >= 1.0) continue;
                kernels::bump_row_accumulate(u + s.index({i0, lo1}), hi1 - lo1 + 1, zv0, k / eps, zf,
                                             uref, m);
            }
        }
        gx = m.gf;
        gux = m.guf;
        gy = m.gv;
        guy = m.guv;
    }
    if (!(m.s0 > 0.0)) throw Error(ErrorKind::NonFiniteResult, "empty mollifier support");
    const double mean = m.s1 / m.s0;
    Eval e;
    e.value = uref + mean;
    e.gradient = Vec((gux - mean * gx) / m.s0 / eps, (guy - mean * gy) / m.s0 / eps);
    return e;
}

SmoothedField::Eval evaluate_clamped(const SmoothedField& field, Vec x, long& clamp_count) {
    if (!field.base().spec().contains(x)) {
        ++clamp_count;
        x = field.base().spec().clamp(x);
    }
    return field.evaluate(x);
}

}  // namespace semilag
