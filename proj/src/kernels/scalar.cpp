#include <algorithm>
#include <cmath>

#include "semilag/kernels/kernels.hpp"

namespace semilag::kernels::scalar {

void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m) {
    const double zf2 = zf * zf;
    for (int j = 0; j < n; ++j) {
        const double zv = zv0 - j * dz;
        const double q = 1.0 - (zv * zv + zf2);
        if (!(q > 0.0)) continue;
        const double t = -1.0 / q;
        if (t < kBumpExponentFloor) continue;
        const double rho = std::exp(t);
        const double c = -2.0 * rho / (q * q);
        const double du = u[j] - uref;
        const double gv = c * zv;
        const double gf = c * zf;
        m.s0 += rho;
        m.s1 += rho * du;
        m.gv += gv;
        m.gf += gf;
        m.guv += gv * du;
        m.guf += gf * du;
    }
}

SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count) {
    const double top = n - 1;
    SlMin best{INFINITY, 0};
    for (int c = 0; c < count; ++c) {
        const double s = std::min(std::max(i + d[c], 0.0), top);
        const int j = std::min(static_cast<int>(std::floor(s)), n - 2);
        const double f = s - j;
        const double v = u[j] + f * (u[j + 1] - u[j]) + cost[c];
        if (v < best.value) best = {v, c};
    }
    return best;
}

SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count) {
    const double top0 = n0 - 1, top1 = n1 - 1;
    SlMin best{INFINITY, 0};
    for (int c = 0; c < count; ++c) {
        const double sx = std::min(std::max(i0 + d0[c], 0.0), top0);
        const double sy = std::min(std::max(i1 + d1[c], 0.0), top1);
        const int jx = std::min(static_cast<int>(std::floor(sx)), n0 - 2);
        const int jy = std::min(static_cast<int>(std::floor(sy)), n1 - 2);
        const double fx = sx - jx, fy = sy - jy;
        const int base = jx * n1 + jy;
        const double u00 = u[base], u11 = u[base + n1 + 1];
        double v;
        if (fx >= fy) {
            const double u10 = u[base + n1];
            v = u00 + fx * (u10 - u00) + fy * (u11 - u10);
        } else {
            const double u01 = u[base + 1];
            v = u00 + fy * (u01 - u00) + fx * (u11 - u01);
        }
        v = v + cost[c];
        if (v < best.value) best = {v, c};
    }
    return best;
}

}  // namespace semilag::kernels::scalar
