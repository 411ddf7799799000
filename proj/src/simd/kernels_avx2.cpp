// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "lcd/simd/kernels.hpp"

#include <immintrin.h>

namespace lcd::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

const Kernels& scalar() { return scalar_kernels(); }

void rotate(std::size_t n, ConstPlanes3 d, ConstPlanes3 w, double dt, Planes3 out) {
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d vhalf = _mm256_set1_pd(0.5 * dt * dt);
    const __m256d vquarter = _mm256_set1_pd(0.25 * dt * dt);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d wx = _mm256_loadu_pd(w.x + i);
        const __m256d wy = _mm256_loadu_pd(w.y + i);
        const __m256d wz = _mm256_loadu_pd(w.z + i);
        const __m256d dx = _mm256_loadu_pd(d.x + i);
        const __m256d dy = _mm256_loadu_pd(d.y + i);
        const __m256d dz = _mm256_loadu_pd(d.z + i);

        __m256d w2 = _mm256_mul_pd(wx, wx);
        w2 = _mm256_fmadd_pd(wy, wy, w2);
        w2 = _mm256_fmadd_pd(wz, wz, w2);
        const __m256d s = _mm256_mul_pd(vquarter, w2);
        __m256d wd = _mm256_mul_pd(wx, dx);
        wd = _mm256_fmadd_pd(wy, dy, wd);
        wd = _mm256_fmadd_pd(wz, dz, wd);
        const __m256d inv = _mm256_div_pd(one, _mm256_add_pd(one, s));
        const __m256d a = _mm256_sub_pd(one, s);
        const __m256d b = _mm256_mul_pd(vhalf, wd);

        const __m256d cx = _mm256_fmsub_pd(dy, wz, _mm256_mul_pd(dz, wy));
        const __m256d cy = _mm256_fmsub_pd(dz, wx, _mm256_mul_pd(dx, wz));
        const __m256d cz = _mm256_fmsub_pd(dx, wy, _mm256_mul_pd(dy, wx));

        __m256d ox = _mm256_fmadd_pd(b, wx, _mm256_mul_pd(a, dx));
        __m256d oy = _mm256_fmadd_pd(b, wy, _mm256_mul_pd(a, dy));
        __m256d oz = _mm256_fmadd_pd(b, wz, _mm256_mul_pd(a, dz));
        ox = _mm256_mul_pd(_mm256_fmadd_pd(vdt, cx, ox), inv);
        oy = _mm256_mul_pd(_mm256_fmadd_pd(vdt, cy, oy), inv);
        oz = _mm256_mul_pd(_mm256_fmadd_pd(vdt, cz, oz), inv);
        _mm256_storeu_pd(out.x + i, ox);
        _mm256_storeu_pd(out.y + i, oy);
        _mm256_storeu_pd(out.z + i, oz);
    }
    if (i < n) {
        scalar().rotate(n - i, {d.x + i, d.y + i, d.z + i}, {w.x + i, w.y + i, w.z + i}, dt,
                        {out.x + i, out.y + i, out.z + i});
    }
}

void laplacian_row(std::size_t n, const double* c, std::size_t stride, double inv_h2, double* out) {
    const __m256d vinv = _mm256_set1_pd(inv_h2);
    const __m256d four = _mm256_set1_pd(4.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const double* p = c + i;
        __m256d sum = _mm256_add_pd(_mm256_loadu_pd(p - 1), _mm256_loadu_pd(p + 1));
        sum = _mm256_add_pd(sum, _mm256_loadu_pd(p - stride));
        sum = _mm256_add_pd(sum, _mm256_loadu_pd(p + stride));
        sum = _mm256_fnmadd_pd(four, _mm256_loadu_pd(p), sum);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(sum, vinv));
    }
    if (i < n) scalar().laplacian_row(n - i, c + i, stride, inv_h2, out + i);
}

void angular_update(std::size_t n, const AngularUpdateArgs& a) {
    const __m256d vk = _mm256_set1_pd(a.k);
    const __m256d vkeep = _mm256_set1_pd(a.keep);
    const __m256d vinv = _mm256_set1_pd(a.inv_denom);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d dx = _mm256_loadu_pd(a.dbar.x + i);
        const __m256d dy = _mm256_loadu_pd(a.dbar.y + i);
        const __m256d dz = _mm256_loadu_pd(a.dbar.z + i);
        const __m256d lx = _mm256_loadu_pd(a.lap.x + i);
        const __m256d ly = _mm256_loadu_pd(a.lap.y + i);
        const __m256d lz = _mm256_loadu_pd(a.lap.z + i);
        const __m256d sx = _mm256_loadu_pd(a.sx + i);
        const __m256d sy = _mm256_loadu_pd(a.sy + i);

        const __m256d ex = _mm256_fmsub_pd(ly, dz, _mm256_mul_pd(lz, dy));
        const __m256d ey = _mm256_fmsub_pd(lz, dx, _mm256_mul_pd(lx, dz));
        const __m256d ez = _mm256_fmsub_pd(lx, dy, _mm256_mul_pd(ly, dx));
        const __m256d tx = _mm256_fmadd_pd(vk, ex, _mm256_mul_pd(sy, dz));
        const __m256d ty = _mm256_fmsub_pd(vk, ey, _mm256_mul_pd(sx, dz));
        const __m256d tz = _mm256_fmadd_pd(vk, ez, _mm256_fmsub_pd(sx, dy, _mm256_mul_pd(sy, dx)));

        const __m256d ox = _mm256_fmadd_pd(vkeep, _mm256_loadu_pd(a.w_old.x + i), tx);
        const __m256d oy = _mm256_fmadd_pd(vkeep, _mm256_loadu_pd(a.w_old.y + i), ty);
        const __m256d oz = _mm256_fmadd_pd(vkeep, _mm256_loadu_pd(a.w_old.z + i), tz);
        _mm256_storeu_pd(a.out.x + i, _mm256_mul_pd(ox, vinv));
        _mm256_storeu_pd(a.out.y + i, _mm256_mul_pd(oy, vinv));
        _mm256_storeu_pd(a.out.z + i, _mm256_mul_pd(oz, vinv));
    }
    if (i < n) {
        AngularUpdateArgs tail = a;
        tail.w_old = {a.w_old.x + i, a.w_old.y + i, a.w_old.z + i};
        tail.dbar = {a.dbar.x + i, a.dbar.y + i, a.dbar.z + i};
        tail.lap = {a.lap.x + i, a.lap.y + i, a.lap.z + i};
        tail.sx = a.sx + i;
        tail.sy = a.sy + i;
        tail.out = {a.out.x + i, a.out.y + i, a.out.z + i};
        scalar().angular_update(n - i, tail);
    }
}

double dot(std::size_t n, const double* a, const double* b) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + kLanes), _mm256_loadu_pd(b + i + kLanes), acc1);
    }
    for (; i + kLanes <= n; i += kLanes) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(std::size_t n, const double* x, double a, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels table{rotate, laplacian_row, angular_update, dot, axpy, xpay};
    return table;
}

}  // namespace lcd::simd::detail
