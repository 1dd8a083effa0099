#include <atomic>

#include "semilag/errors.hpp"
#include "semilag/kernels/kernels.hpp"

namespace semilag::kernels {

namespace {

// -1: automatic, otherwise a forced Isa value.
std::atomic<int> g_forced{-1};

Isa detect() {
#if defined(SEMILAG_HAVE_AVX2_TU)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || detect() == Isa::Avx2; }

Isa active_isa() {
    static const Isa best = detect();
    const int f = g_forced.load(std::memory_order_relaxed);
    return f < 0 ? best : static_cast<Isa>(f);
}

void force_isa(std::optional<Isa> isa) {
    if (isa && !isa_available(*isa))
        throw Error(ErrorKind::InvalidArgument, std::string("ISA not available: ") + to_string(*isa));
    g_forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

#if defined(SEMILAG_HAVE_AVX2_TU)
#define SEMILAG_DISPATCH(fn, ...) \
    (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define SEMILAG_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m) {
    SEMILAG_DISPATCH(bump_row_accumulate, u, n, zv0, dz, zf, uref, m);
}

SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count) {
    return SEMILAG_DISPATCH(sl_min_1d, u, n, i, d, cost, count);
}

SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count) {
    return SEMILAG_DISPATCH(sl_min_2d, u, n0, n1, i0, i1, d0, d1, cost, count);
}

#if !defined(SEMILAG_HAVE_AVX2_TU)
// Keep the symbols defined on targets without the AVX2 translation unit.
namespace avx2 {
void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m) {
    scalar::bump_row_accumulate(u, n, zv0, dz, zf, uref, m);
}
SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count) {
    return scalar::sl_min_1d(u, n, i, d, cost, count);
}
SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count) {
    return scalar::sl_min_2d(u, n0, n1, i0, i1, d0, d1, cost, count);
}
}  // namespace avx2
#endif

}  // namespace semilag::kernels
