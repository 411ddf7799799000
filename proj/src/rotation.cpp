#include "lcd/rotation.hpp"

#include "lcd/simd/kernels.hpp"

namespace lcd {

Mat3 cross_matrix(const Vec3& w) {
    return {{{0.0, w.z, -w.y}, {-w.z, 0.0, w.x}, {w.y, -w.x, 0.0}}};
}

Mat3 rotation_matrix(const Vec3& w, double dt) {
    const double s = 0.25 * dt * dt * dot(w, w);
    const double inv = 1.0 / (1.0 + s);
    const double ww = 0.5 * dt * dt;
    const Mat3 q = cross_matrix(w);
    const double wv[3] = {w.x, w.y, w.z};
    Mat3 m{};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double id = (r == c) ? (1.0 - s) : 0.0;
            m[r][c] = (id + ww * wv[r] * wv[c] + dt * q[r][c]) * inv;
        }
    }
    return m;
}

void advance_director(const CellVectorField& d, const CellVectorField& w_bar, double dt,
                      CellVectorField& out) {
    const GridSpec& g = d.grid();
    const std::size_t n = g.cells_per_side();
    const auto& k = simd::active();
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t row = g.index(1, j);
        k.rotate(n, d.planes_at(row), w_bar.planes_at(row), dt, out.planes_at(row));
    }
    apply_neumann_ghosts(out);
}

CellVectorField advance_director(const CellVectorField& d, const CellVectorField& w_bar, double dt) {
    CellVectorField out(d.grid());
    advance_director(d, w_bar, dt, out);
    return out;
}

}  // namespace lcd
