// Compiled with -mavx2; only reached through dispatch after a CPU check.
// No FMA: every lane repeats the scalar reference's operation order so the SL
// minima come out bitwise equal.

#include <immintrin.h>

#include <cmath>

#include "semilag/kernels/kernels.hpp"

namespace semilag::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    alignas(32) double a[4];
    _mm256_store_pd(a, v);
    return (a[0] + a[1]) + (a[2] + a[3]);
}

// exp(t) for t in [kBumpExponentFloor, 0]: t = n ln2 + r, |r| <= ln2/2,
// degree-13 Taylor polynomial in r, then scale by 2^n through the exponent bits.
inline __m256d exp_neg(__m256d t) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(t, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_sub_pd(t, _mm256_mul_pd(n, ln2_hi));
    r = _mm256_sub_pd(r, _mm256_mul_pd(n, ln2_lo));

    static constexpr double inv_fact[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0};
    __m256d p = _mm256_set1_pd(inv_fact[0]);
    for (int i = 1; i < 14; ++i) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(inv_fact[i]));

    // n >= -1010 here, so 2^n is split in two factors to stay out of the
    // subnormal exponent field.
    const __m256d half_n = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
    const __m256d rest = _mm256_sub_pd(n, half_n);
    auto pow2 = [](__m256d k) {
        const __m128i ki = _mm256_cvtpd_epi32(k);
        __m256i e = _mm256_cvtepi32_epi64(ki);
        e = _mm256_add_epi64(e, _mm256_set1_epi64x(1023));
        return _mm256_castsi256_pd(_mm256_slli_epi64(e, 52));
    };
    return _mm256_mul_pd(_mm256_mul_pd(p, pow2(half_n)), pow2(rest));
}

}  // namespace

void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d minus_two = _mm256_set1_pd(-2.0);
    const __m256d floor_t = _mm256_set1_pd(kBumpExponentFloor);
    const __m256d vzf = _mm256_set1_pd(zf);
    const __m256d zf2 = _mm256_set1_pd(zf * zf);
    const __m256d vdz = _mm256_set1_pd(dz);
    const __m256d vref = _mm256_set1_pd(uref);
    const __m256d vzv0 = _mm256_set1_pd(zv0);

    __m256d s0 = zero, s1 = zero, gv = zero, gf = zero, guv = zero, guf = zero;
    __m256d jv = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    int j = 0;
    for (; j + 4 <= n; j += 4, jv = _mm256_add_pd(jv, four)) {
        const __m256d zv = _mm256_sub_pd(vzv0, _mm256_mul_pd(jv, vdz));
        const __m256d q = _mm256_sub_pd(one, _mm256_add_pd(_mm256_mul_pd(zv, zv), zf2));
        const __m256d live_q = _mm256_cmp_pd(q, zero, _CMP_GT_OQ);
        if (_mm256_movemask_pd(live_q) == 0) continue;
        const __m256d qs = _mm256_blendv_pd(one, q, live_q);
        const __m256d t = _mm256_div_pd(_mm256_sub_pd(zero, one), qs);
        const __m256d live = _mm256_and_pd(live_q, _mm256_cmp_pd(t, floor_t, _CMP_GE_OQ));
        const __m256d rho = _mm256_and_pd(live, exp_neg(_mm256_max_pd(t, floor_t)));
        const __m256d c = _mm256_div_pd(_mm256_mul_pd(minus_two, rho), _mm256_mul_pd(qs, qs));
        const __m256d du = _mm256_sub_pd(_mm256_loadu_pd(u + j), vref);
        const __m256d g_v = _mm256_mul_pd(c, zv);
        const __m256d g_f = _mm256_mul_pd(c, vzf);
        s0 = _mm256_add_pd(s0, rho);
        s1 = _mm256_add_pd(s1, _mm256_mul_pd(rho, du));
        gv = _mm256_add_pd(gv, g_v);
        gf = _mm256_add_pd(gf, g_f);
        guv = _mm256_add_pd(guv, _mm256_mul_pd(g_v, du));
        guf = _mm256_add_pd(guf, _mm256_mul_pd(g_f, du));
    }
    BumpMoments tail;
    if (j < n) scalar::bump_row_accumulate(u + j, n - j, zv0 - j * dz, dz, zf, uref, tail);
    m.s0 += hsum(s0) + tail.s0;
    m.s1 += hsum(s1) + tail.s1;
    m.gv += hsum(gv) + tail.gv;
    m.gf += hsum(gf) + tail.gf;
    m.guv += hsum(guv) + tail.guv;
    m.guf += hsum(guf) + tail.guf;
}

namespace {

// Lane-wise running minimum; ties keep the earlier candidate of each lane,
// and the final reduction prefers the smallest candidate index.
struct LaneMin {
    __m256d value = _mm256_set1_pd(INFINITY);
    __m256d arg = _mm256_set1_pd(0.0);

    void update(__m256d v, __m256d idx) {
        const __m256d better = _mm256_cmp_pd(v, value, _CMP_LT_OQ);
        value = _mm256_blendv_pd(value, v, better);
        arg = _mm256_blendv_pd(arg, idx, better);
    }

    SlMin reduce() const {
        alignas(32) double v[4], a[4];
        _mm256_store_pd(v, value);
        _mm256_store_pd(a, arg);
        SlMin best{INFINITY, 0};
        bool found = false;
        for (int l = 0; l < 4; ++l) {
            if (!(v[l] < INFINITY)) continue;
            const int ai = static_cast<int>(a[l]);
            if (!found || v[l] < best.value || (v[l] == best.value && ai < best.arg)) {
                best = {v[l], ai};
                found = true;
            }
        }
        return best;
    }
};

inline SlMin merge(SlMin vec, SlMin tail) {
    if (tail.value < vec.value) return tail;
    return vec;
}

}  // namespace

SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d top = _mm256_set1_pd(n - 1);
    const __m256d last_cell = _mm256_set1_pd(n - 2);
    const __m256d vi = _mm256_set1_pd(i);
    LaneMin best;
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    int c = 0;
    for (; c + 4 <= count; c += 4, idx = _mm256_add_pd(idx, four)) {
        const __m256d s = _mm256_min_pd(_mm256_max_pd(_mm256_add_pd(vi, _mm256_loadu_pd(d + c)), zero), top);
        const __m256d jf = _mm256_min_pd(_mm256_floor_pd(s), last_cell);
        const __m256d f = _mm256_sub_pd(s, jf);
        const __m128i j = _mm256_cvttpd_epi32(jf);
        const __m256d u0 = _mm256_i32gather_pd(u, j, 8);
        const __m256d u1 = _mm256_i32gather_pd(u + 1, j, 8);
        __m256d v = _mm256_add_pd(u0, _mm256_mul_pd(f, _mm256_sub_pd(u1, u0)));
        v = _mm256_add_pd(v, _mm256_loadu_pd(cost + c));
        best.update(v, idx);
    }
    SlMin out = best.reduce();
    if (c < count) {
        SlMin tail = scalar::sl_min_1d(u, n, i, d + c, cost + c, count - c);
        tail.arg += c;
        out = merge(out, tail);
    }
    return out;
}

SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d top0 = _mm256_set1_pd(n0 - 1), top1 = _mm256_set1_pd(n1 - 1);
    const __m256d last0 = _mm256_set1_pd(n0 - 2), last1 = _mm256_set1_pd(n1 - 2);
    const __m256d vi0 = _mm256_set1_pd(i0), vi1 = _mm256_set1_pd(i1);
    const __m256d stride = _mm256_set1_pd(n1);
    const __m128i row = _mm_set1_epi32(n1);
    const __m128i one_i = _mm_set1_epi32(1);
    LaneMin best;
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    int c = 0;
    for (; c + 4 <= count; c += 4, idx = _mm256_add_pd(idx, four)) {
        const __m256d sx = _mm256_min_pd(_mm256_max_pd(_mm256_add_pd(vi0, _mm256_loadu_pd(d0 + c)), zero), top0);
        const __m256d sy = _mm256_min_pd(_mm256_max_pd(_mm256_add_pd(vi1, _mm256_loadu_pd(d1 + c)), zero), top1);
        const __m256d jx = _mm256_min_pd(_mm256_floor_pd(sx), last0);
        const __m256d jy = _mm256_min_pd(_mm256_floor_pd(sy), last1);
        const __m256d fx = _mm256_sub_pd(sx, jx);
        const __m256d fy = _mm256_sub_pd(sy, jy);
        const __m128i base = _mm256_cvttpd_epi32(_mm256_add_pd(_mm256_mul_pd(jx, stride), jy));
        const __m256d u00 = _mm256_i32gather_pd(u, base, 8);
        const __m256d u10 = _mm256_i32gather_pd(u, _mm_add_epi32(base, row), 8);
        const __m256d u01 = _mm256_i32gather_pd(u, _mm_add_epi32(base, one_i), 8);
        const __m256d u11 = _mm256_i32gather_pd(u, _mm_add_epi32(base, _mm_add_epi32(row, one_i)), 8);
        const __m256d lower = _mm256_add_pd(_mm256_add_pd(u00, _mm256_mul_pd(fx, _mm256_sub_pd(u10, u00))),
                                            _mm256_mul_pd(fy, _mm256_sub_pd(u11, u10)));
        const __m256d upper = _mm256_add_pd(_mm256_add_pd(u00, _mm256_mul_pd(fy, _mm256_sub_pd(u01, u00))),
                                            _mm256_mul_pd(fx, _mm256_sub_pd(u11, u01)));
        __m256d v = _mm256_blendv_pd(upper, lower, _mm256_cmp_pd(fx, fy, _CMP_GE_OQ));
        v = _mm256_add_pd(v, _mm256_loadu_pd(cost + c));
        best.update(v, idx);
    }
    SlMin out = best.reduce();
    if (c < count) {
        SlMin tail = scalar::sl_min_2d(u, n0, n1, i0, i1, d0 + c, d1 + c, cost + c, count - c);
        tail.arg += c;
        out = merge(out, tail);
    }
    return out;
}

}  // namespace semilag::kernels::avx2
