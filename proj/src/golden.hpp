#pragma once

#include <cmath>
#include <utility>

namespace semilag::detail {

struct LineMin {
    double arg;
    double value;
};

/// Golden-section search for a minimum of f on [a, b]; exact for unimodal f
/// up to `tol`. A monotone f converges to the matching endpoint.
template <class F>
LineMin golden_min(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    if (b < a) std::swap(a, b);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int guard = 0;
    while (b - a > tol && guard++ < 200) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    LineMin best{c, fc};
    if (fd < best.value) best = {d, fd};
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm < best.value) best = {mid, fm};
    return best;
}

}  // namespace semilag::detail
