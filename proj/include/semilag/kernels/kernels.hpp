#pragma once

// Inner loops of the solver. Each entry point has a portable scalar reference
// and, on x86-64, an AVX2 variant picked at runtime. The SL minimum kernels
// are bitwise identical across variants; the bump moments agree to rounding.

#include <cstddef>
#include <optional>

namespace semilag::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);
bool isa_available(Isa isa);

/// Best available ISA unless overridden with force_isa.
Isa active_isa();

/// Test hook: pin dispatch to `isa` (must be available), or restore
/// automatic selection with nullopt.
void force_isa(std::optional<Isa> isa);

/// Unnormalized bump rho(z) = exp(-1/(1-|z|^2)), cut to zero where the
/// exponent drops below this value.
inline constexpr double kBumpExponentFloor = -700.0;

struct BumpMoments {
    double s0 = 0.0;   ///< sum rho
    double s1 = 0.0;   ///< sum rho (u - uref)
    double gv = 0.0;   ///< sum d rho / d z_v
    double gf = 0.0;   ///< sum d rho / d z_f
    double guv = 0.0;  ///< sum (u - uref) d rho / d z_v
    double guf = 0.0;  ///< sum (u - uref) d rho / d z_f
};

/// Accumulates bump moments over a contiguous run u[0..n) whose scaled
/// offsets are z_v = zv0 - j*dz along the row and z_f = zf across it.
void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m);

struct SlMin {
    double value;
    int arg;  ///< first candidate attaining the minimum
};

/// One-dimensional SL candidate minimum at node i of u[0..n):
///   min_c  P1u(i + d[c]) + cost[c]
/// with the foot index clamped to [0, n-1]. Requires n >= 2, count >= 1.
SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count);

/// Two-dimensional variant on a row-major n0 x n1 grid with the Kuhn split.
/// Requires n0, n1 >= 2.
SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count);

namespace scalar {
void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m);
SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count);
SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count);
}  // namespace scalar

namespace avx2 {
void bump_row_accumulate(const double* u, int n, double zv0, double dz, double zf, double uref,
                         BumpMoments& m);
SlMin sl_min_1d(const double* u, int n, int i, const double* d, const double* cost, int count);
SlMin sl_min_2d(const double* u, int n0, int n1, int i0, int i1, const double* d0,
                const double* d1, const double* cost, int count);
}  // namespace avx2

}  // namespace semilag::kernels
