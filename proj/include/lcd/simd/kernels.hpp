#pragma once

// Data-parallel inner loops of the simulator.
//
// Every kernel exists as a scalar reference implementation and, on x86-64
// builds, as an AVX2/FMA variant. The variant is chosen once at runtime from
// the CPU features (override with LCD_SIMD=scalar|avx2 or select_isa()).
// All kernels operate on structure-of-arrays planes: one contiguous array of
// doubles per vector component.

#include <cstddef>
#include <string_view>

namespace lcd::simd {

enum class Isa { scalar, avx2 };

struct ConstPlanes3 {
    const double* x;
    const double* y;
    const double* z;
};

struct Planes3 {
    double* x;
    double* y;
    double* z;

    operator ConstPlanes3() const noexcept { return {x, y, z}; }
};

struct AngularUpdateArgs {
    ConstPlanes3 w_old;
    ConstPlanes3 dbar;
    ConstPlanes3 lap;      // discrete Laplacian of dbar
    const double* sx;      // planar source term, third component is zero
    const double* sy;
    double keep;           // alpha/dt - beta/2
    double k;              // elastic constant
    double inv_denom;      // 1 / (alpha/dt + beta/2)
    Planes3 out;
};

struct Kernels {
    // out = V(wbar) d per cell, the closed-form midpoint rotation.
    void (*rotate)(std::size_t n, ConstPlanes3 d, ConstPlanes3 wbar, double dt, Planes3 out);

    // out[i] = (c[i-1] + c[i+1] + c[i-stride] + c[i+stride] - 4 c[i]) * inv_h2
    void (*laplacian_row)(std::size_t n, const double* c, std::size_t stride, double inv_h2,
                          double* out);

    // out = (keep w_old + k (lap x dbar) + (S x dbar)) * inv_denom
    void (*angular_update)(std::size_t n, const AngularUpdateArgs& args);

    double (*dot)(std::size_t n, const double* a, const double* b);

    // y += a x
    void (*axpy)(std::size_t n, double a, const double* x, double* y);

    // y = x + a y
    void (*xpay)(std::size_t n, const double* x, double a, double* y);
};

bool isa_supported(Isa isa) noexcept;
const Kernels& kernels(Isa isa);

Isa active_isa() noexcept;
const Kernels& active();

// Forces a specific variant; returns false (and changes nothing) when the
// CPU or the build lacks it.
bool select_isa(Isa isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

namespace detail {
const Kernels& scalar_kernels();
#if defined(LCD_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif
}  // namespace detail

}  // namespace lcd::simd
