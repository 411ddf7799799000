#include "lcd/fem.hpp"

#include <algorithm>
#include <cmath>

#include "lcd/errors.hpp"

namespace lcd {

Triangulation::Triangulation(const GridSpec& grid) : grid_(grid) {
    const std::size_t n = grid_.cells_per_side();
    const double h = grid_.mesh_width();
    const Vec2 o = grid_.origin();
    const std::size_t nodes_per_side = n + 1;

    nodes_.resize(nodes_per_side * nodes_per_side);
    boundary_.resize(nodes_.size());
    interior_index_.assign(nodes_.size(), -1);
    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 0; i <= n; ++i) {
            const std::size_t k = node_index(i, j);
            // Exact corner coordinates on the last row/column.
            nodes_[k] = {i == n ? o.x + grid_.side_length() : o.x + static_cast<double>(i) * h,
                         j == n ? o.y + grid_.side_length() : o.y + static_cast<double>(j) * h};
            boundary_[k] = (i == 0 || j == 0 || i == n || j == n);
            if (!boundary_[k]) {
                interior_index_[k] = static_cast<long>(interior_nodes_.size());
                interior_nodes_.push_back(k);
            }
        }
    }

    triangles_.reserve(2 * n * n);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= n; ++i) {
            const std::size_t n00 = node_index(i - 1, j - 1);
            const std::size_t n10 = node_index(i, j - 1);
            const std::size_t n11 = node_index(i, j);
            const std::size_t n01 = node_index(i - 1, j);
            triangles_.push_back({n00, n10, n11});
            triangles_.push_back({n00, n11, n01});
        }
    }

    areas_.resize(triangles_.size());
    basis_grads_.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        const Vec2 p0 = nodes_[tri[0]], p1 = nodes_[tri[1]], p2 = nodes_[tri[2]];
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
        areas_[t] = 0.5 * det;
        basis_grads_[t] = {Vec2{(p1.y - p2.y) / det, (p2.x - p1.x) / det},
                           Vec2{(p2.y - p0.y) / det, (p0.x - p2.x) / det},
                           Vec2{(p0.y - p1.y) / det, (p1.x - p0.x) / det}};
    }

    // Sparsity over interior nodes.
    std::vector<std::vector<std::size_t>> cols(interior_nodes_.size());
    for (const auto& tri : triangles_) {
        for (std::size_t a : tri) {
            const long ra = interior_index_[a];
            if (ra < 0) continue;
            for (std::size_t b : tri) {
                const long rb = interior_index_[b];
                if (rb >= 0) cols[static_cast<std::size_t>(ra)].push_back(static_cast<std::size_t>(rb));
            }
        }
    }
    pattern_.row_ptr.assign(1, 0);
    for (auto& c : cols) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        pattern_.col.insert(pattern_.col.end(), c.begin(), c.end());
        pattern_.row_ptr.push_back(pattern_.col.size());
    }
    pattern_.slots.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                const long ra = interior_index_[triangles_[t][a]];
                const long rb = interior_index_[triangles_[t][b]];
                long slot = -1;
                if (ra >= 0 && rb >= 0) {
                    const auto first = pattern_.col.begin() + static_cast<long>(pattern_.row_ptr[static_cast<std::size_t>(ra)]);
                    const auto last = pattern_.col.begin() + static_cast<long>(pattern_.row_ptr[static_cast<std::size_t>(ra) + 1]);
                    slot = std::lower_bound(first, last, static_cast<std::size_t>(rb)) - pattern_.col.begin();
                }
                pattern_.slots[t][a][b] = slot;
            }
        }
    }
}

Vec2 Triangulation::centroid(std::size_t t) const noexcept {
    const auto& tri = triangles_[t];
    return {(nodes_[tri[0]].x + nodes_[tri[1]].x + nodes_[tri[2]].x) / 3.0,
            (nodes_[tri[0]].y + nodes_[tri[1]].y + nodes_[tri[2]].y) / 3.0};
}

std::size_t Triangulation::cell_of_triangle(std::size_t t) const noexcept {
    const std::size_t c = t / 2;
    const std::size_t n = grid_.cells_per_side();
    return grid_.index(c % n + 1, c / n + 1);
}

NodalScalarField interpolate(const Triangulation& tri, const ScalarFunction& f) {
    NodalScalarField out;
    out.values.resize(tri.node_count());
    for (std::size_t k = 0; k < tri.node_count(); ++k) out.values[k] = f(tri.node(k).x, tri.node(k).y);
    return out;
}

void SparseSPDSystem::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = size();
    y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += values[k] * x[col[k]];
        y[r] = s;
    }
}

double SparseSPDSystem::entry(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        if (col[k] == c) return values[k];
    return 0.0;
}

std::array<std::array<double, 3>, 3> element_stiffness(const Triangulation& tri, std::size_t t,
                                                      const Vec3& d, double eps2) {
    const auto& g = tri.basis_gradients(t);
    const Vec2 p = in_plane(d);
    const double area = tri.triangle_area(t);
    std::array<std::array<double, 3>, 3> k{};
    for (std::size_t a = 0; a < 3; ++a) {
        const double pa = dot(p, g[a]);
        for (std::size_t b = 0; b < 3; ++b) {
            k[a][b] = area * (dot(g[a], g[b]) + eps2 * pa * dot(p, g[b]));
        }
    }
    return k;
}

std::vector<std::vector<double>> assemble_full_stiffness(const Triangulation& tri,
                                                         const CellVectorField& d, double eps2) {
    std::vector<std::vector<double>> m(tri.node_count(), std::vector<double>(tri.node_count(), 0.0));
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const auto k = element_stiffness(tri, t, d.at(tri.cell_of_triangle(t)), eps2);
        const auto& v = tri.triangle(t);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) m[v[a]][v[b]] += k[a][b];
    }
    return m;
}

SparseSPDSystem assemble_system(const Triangulation& tri, const CellVectorField& d, double eps2,
                                const NodalScalarField& g_nodal, const ScalarFunction& source) {
    if (!(eps2 > -1.0)) throw EllipticityError(eps2);
    const StiffnessPattern& pat = tri.pattern();
    SparseSPDSystem sys;
    sys.row_ptr = pat.row_ptr;
    sys.col = pat.col;
    sys.values.assign(pat.col.size(), 0.0);
    sys.rhs.assign(tri.interior_node_count(), 0.0);

    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const auto k = element_stiffness(tri, t, d.at(tri.cell_of_triangle(t)), eps2);
        const auto& v = tri.triangle(t);
        const auto& slots = pat.slots[t];
        double load = 0.0;
        if (source) {
            const Vec2 c = tri.centroid(t);
            load = tri.triangle_area(t) * source(c.x, c.y) / 3.0;
        }
        for (std::size_t a = 0; a < 3; ++a) {
            const long ra = tri.interior_index(v[a]);
            if (ra < 0) continue;
            double& rhs = sys.rhs[static_cast<std::size_t>(ra)];
            rhs += load;
            for (std::size_t b = 0; b < 3; ++b) {
                if (slots[a][b] >= 0) sys.values[static_cast<std::size_t>(slots[a][b])] += k[a][b];
                rhs -= k[a][b] * g_nodal.values[v[b]];
            }
        }
    }
    return sys;
}

std::vector<double> interior_values(const Triangulation& tri, const NodalScalarField& phi,
                                    const NodalScalarField& g_nodal) {
    std::vector<double> u(tri.interior_node_count());
    const auto& nodes = tri.interior_nodes();
    for (std::size_t r = 0; r < nodes.size(); ++r) u[r] = phi.values[nodes[r]] - g_nodal.values[nodes[r]];
    return u;
}

TriangleGradientField triangle_gradients(const Triangulation& tri, const NodalScalarField& phi) {
    TriangleGradientField out;
    out.values.resize(tri.triangle_count());
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const auto& g = tri.basis_gradients(t);
        const auto& v = tri.triangle(t);
        Vec2 s{};
        for (std::size_t a = 0; a < 3; ++a) {
            s.x += phi.values[v[a]] * g[a].x;
            s.y += phi.values[v[a]] * g[a].y;
        }
        out.values[t] = s;
    }
    return out;
}

std::vector<Vec2> cell_average_gradients(const Triangulation& tri, const TriangleGradientField& grads) {
    const std::size_t cells = tri.triangle_count() / 2;
    std::vector<Vec2> out(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const Vec2& a = grads.values[2 * c];
        const Vec2& b = grads.values[2 * c + 1];
        out[c] = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    }
    return out;
}

double gradient_l2_squared(const Triangulation& tri, const TriangleGradientField& grads) {
    double s = 0.0;
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) s += tri.triangle_area(t) * dot(grads.values[t], grads.values[t]);
    return s;
}

double gradient_difference_l2_squared(const Triangulation& tri, const TriangleGradientField& a,
                                      const TriangleGradientField& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const double dx = a.values[t].x - b.values[t].x;
        const double dy = a.values[t].y - b.values[t].y;
        s += tri.triangle_area(t) * (dx * dx + dy * dy);
    }
    return s;
}

double directional_energy(const Triangulation& tri, const CellVectorField& d,
                          const TriangleGradientField& grads) {
    double s = 0.0;
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const double pg = dot(in_plane(d.at(tri.cell_of_triangle(t))), grads.values[t]);
        s += tri.triangle_area(t) * pg * pg;
    }
    return s;
}

double load_integral(const Triangulation& tri, const ScalarFunction& f, const NodalScalarField& v) {
    if (!f) return 0.0;
    double s = 0.0;
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const auto& vt = tri.triangle(t);
        const Vec2 c = tri.centroid(t);
        const double mean = (v.values[vt[0]] + v.values[vt[1]] + v.values[vt[2]]) / 3.0;
        s += tri.triangle_area(t) * f(c.x, c.y) * mean;
    }
    return s;
}

}  // namespace lcd
