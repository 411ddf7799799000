#include "lcd/simd/kernels.hpp"

namespace lcd::simd::detail {
namespace {

void rotate(std::size_t n, ConstPlanes3 d, ConstPlanes3 w, double dt, Planes3 out) {
    const double half_dt2 = 0.5 * dt * dt;
    const double quarter_dt2 = 0.25 * dt * dt;
    for (std::size_t i = 0; i < n; ++i) {
        const double wx = w.x[i], wy = w.y[i], wz = w.z[i];
        const double dx = d.x[i], dy = d.y[i], dz = d.z[i];
        const double s = quarter_dt2 * (wx * wx + wy * wy + wz * wz);
        const double wd = wx * dx + wy * dy + wz * dz;
        const double inv = 1.0 / (1.0 + s);
        const double a = 1.0 - s;
        const double b = half_dt2 * wd;
        // d x w
        const double cx = dy * wz - dz * wy;
        const double cy = dz * wx - dx * wz;
        const double cz = dx * wy - dy * wx;
        out.x[i] = (a * dx + b * wx + dt * cx) * inv;
        out.y[i] = (a * dy + b * wy + dt * cy) * inv;
        out.z[i] = (a * dz + b * wz + dt * cz) * inv;
    }
}

void laplacian_row(std::size_t n, const double* c, std::size_t stride, double inv_h2, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (c[i - 1] + c[i + 1] + c[i - stride] + c[i + stride] - 4.0 * c[i]) * inv_h2;
    }
}

void angular_update(std::size_t n, const AngularUpdateArgs& a) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = a.dbar.x[i], dy = a.dbar.y[i], dz = a.dbar.z[i];
        const double lx = a.lap.x[i], ly = a.lap.y[i], lz = a.lap.z[i];
        const double sx = a.sx[i], sy = a.sy[i];
        const double tx = a.k * (ly * dz - lz * dy) + sy * dz;
        const double ty = a.k * (lz * dx - lx * dz) - sx * dz;
        const double tz = a.k * (lx * dy - ly * dx) + (sx * dy - sy * dx);
        a.out.x[i] = (a.keep * a.w_old.x[i] + tx) * a.inv_denom;
        a.out.y[i] = (a.keep * a.w_old.y[i] + ty) * a.inv_denom;
        a.out.z[i] = (a.keep * a.w_old.z[i] + tz) * a.inv_denom;
    }
}

double dot(std::size_t n, const double* a, const double* b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(std::size_t n, const double* x, double a, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels table{rotate, laplacian_row, angular_update, dot, axpy, xpay};
    return table;
}

}  // namespace lcd::simd::detail
