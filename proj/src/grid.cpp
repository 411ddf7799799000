#include "lcd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcd/errors.hpp"

namespace lcd {

GridSpec::GridSpec(std::size_t cells_per_side, double side_length, Vec2 origin)
    : n_(cells_per_side), length_(side_length), h_(0.0), origin_(origin) {
    if (n_ < 2) throw ConfigError("grid needs at least 2 cells per side, got " + std::to_string(n_));
    if (!(side_length > 0.0)) throw ConfigError("grid side length must be positive");
    h_ = length_ / static_cast<double>(n_);
}

CellVectorField::CellVectorField(const GridSpec& grid, Vec3 fill) : grid_(grid) {
    const std::size_t size = grid_.storage_size();
    planes_[0].assign(size, fill.x);
    planes_[1].assign(size, fill.y);
    planes_[2].assign(size, fill.z);
}

void apply_neumann_ghosts(CellVectorField& field) {
    const GridSpec& g = field.grid();
    const std::size_t n = g.cells_per_side();
    for (std::size_t c = 0; c < 3; ++c) {
        auto& p = field.plane(c);
        for (std::size_t k = 1; k <= n; ++k) {
            p[g.index(0, k)] = p[g.index(1, k)];
            p[g.index(n + 1, k)] = p[g.index(n, k)];
            p[g.index(k, 0)] = p[g.index(k, 1)];
            p[g.index(k, n + 1)] = p[g.index(k, n)];
        }
        p[g.index(0, 0)] = p[g.index(1, 1)];
        p[g.index(n + 1, 0)] = p[g.index(n, 1)];
        p[g.index(0, n + 1)] = p[g.index(1, n)];
        p[g.index(n + 1, n + 1)] = p[g.index(n, n)];
    }
}

CellVectorField with_neumann_ghosts(CellVectorField field) {
    apply_neumann_ghosts(field);
    return field;
}

void discrete_laplacian(const CellVectorField& field, CellVectorField& out) {
    const GridSpec& g = field.grid();
    const std::size_t n = g.cells_per_side();
    const double inv_h2 = 1.0 / (g.mesh_width() * g.mesh_width());
    const auto& k = simd::active();
    for (std::size_t c = 0; c < 3; ++c) {
        const double* src = field.plane(c).data();
        double* dst = out.plane(c).data();
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t row = g.index(1, j);
            k.laplacian_row(n, src + row, g.stride(), inv_h2, dst + row);
        }
    }
}

CellVectorField discrete_laplacian(const CellVectorField& field) {
    CellVectorField out(field.grid());
    discrete_laplacian(field, out);
    return out;
}

double gradient_energy(const CellVectorField& field) {
    const GridSpec& g = field.grid();
    const std::size_t n = g.cells_per_side();
    // h^2 * |(b - a) / h|^2 == |b - a|^2 per face.
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& p = field.plane(c);
        for (std::size_t j = 1; j <= n; ++j) {
            for (std::size_t i = 1; i <= n; ++i) {
                const double v = p[g.index(i, j)];
                if (i < n) {
                    const double dx = p[g.index(i + 1, j)] - v;
                    sum += dx * dx;
                }
                if (j < n) {
                    const double dy = p[g.index(i, j + 1)] - v;
                    sum += dy * dy;
                }
            }
        }
    }
    return sum;
}

double l2_inner(const CellVectorField& a, const CellVectorField& b) {
    const GridSpec& g = a.grid();
    const std::size_t n = g.cells_per_side();
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const double* pa = a.plane(c).data();
        const double* pb = b.plane(c).data();
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t row = g.index(1, j);
            for (std::size_t i = 0; i < n; ++i) sum += pa[row + i] * pb[row + i];
        }
    }
    return g.cell_area() * sum;
}

double l2_norm_squared(const CellVectorField& field) { return l2_inner(field, field); }

CellVectorField combine(const CellVectorField& a, double s, const CellVectorField& b) {
    CellVectorField out(a.grid());
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& pa = a.plane(c);
        const auto& pb = b.plane(c);
        auto& po = out.plane(c);
        for (std::size_t k = 0; k < po.size(); ++k) po[k] = pa[k] + s * pb[k];
    }
    return out;
}

CellVectorField midpoint(const CellVectorField& a, const CellVectorField& b) {
    CellVectorField out(a.grid());
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& pa = a.plane(c);
        const auto& pb = b.plane(c);
        auto& po = out.plane(c);
        for (std::size_t k = 0; k < po.size(); ++k) po[k] = 0.5 * (pa[k] + pb[k]);
    }
    return out;
}

double max_unit_deviation(const CellVectorField& field) {
    const std::size_t n = field.grid().cells_per_side();
    double dev = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t i = 1; i <= n; ++i) dev = std::max(dev, std::abs(norm(field.at(i, j)) - 1.0));
    return dev;
}

}  // namespace lcd
