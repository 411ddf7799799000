#include "lcd/coupling.hpp"

namespace lcd {

void source_term(const Triangulation& tri, const TriangleGradientField& grads_old,
                 const TriangleGradientField& grads_new, const CellVectorField& d_half, double eps1,
                 CellVectorField& out) {
    const GridSpec& g = d_half.grid();
    const std::size_t n = g.cells_per_side();
    auto& sx = out.plane(0);
    auto& sy = out.plane(1);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= n; ++i) {
            const std::size_t k = g.index(i, j);
            const Vec2 p = in_plane(d_half.at(k));
            const std::size_t t0 = tri.first_triangle_of_cell(i, j);
            double ax = 0.0, ay = 0.0;
            for (std::size_t t = t0; t < t0 + 2; ++t) {
                const Vec2& e_old = grads_old.values[t];
                const Vec2& e_new = grads_new.values[t];
                const double a = dot(e_new, p);
                const double b = dot(e_old, p);
                ax += a * e_old.x + b * e_new.x;
                ay += a * e_old.y + b * e_new.y;
            }
            // eps1 / 2 times the two-triangle mean.
            sx[k] = 0.25 * eps1 * ax;
            sy[k] = 0.25 * eps1 * ay;
        }
    }
}

CellVectorField source_term(const Triangulation& tri, const TriangleGradientField& grads_old,
                            const TriangleGradientField& grads_new, const CellVectorField& d_half,
                            double eps1) {
    CellVectorField out(d_half.grid());
    source_term(tri, grads_old, grads_new, d_half, eps1, out);
    return out;
}

}  // namespace lcd
