#pragma once

// P1 Lagrange finite elements for the anisotropic potential equation
//
//   -div(grad phi + eps2 (d . grad phi) d) = f,   phi = g on the boundary,
//
// on a structured triangulation whose nodes are the cell corners of a
// GridSpec. Each cell is split by its lower-left to upper-right diagonal, so
// the piecewise constant director is constant on every triangle and element
// integrals are exact.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lcd/grid.hpp"
#include "lcd/vec3.hpp"

namespace lcd {

struct StiffnessPattern {
    // CSR structure over interior nodes.
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    // For triangle t and local pair (a, b): slot in the value array, or -1 when
    // either node is on the boundary.
    std::vector<std::array<std::array<long, 3>, 3>> slots;
};

class Triangulation {
public:
    explicit Triangulation(const GridSpec& grid);

    const GridSpec& grid() const noexcept { return grid_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t triangle_count() const noexcept { return triangles_.size(); }
    std::size_t interior_node_count() const noexcept { return interior_nodes_.size(); }

    // Node (i, j), i, j in {0..N}, sits at origin + (i h, j h).
    std::size_t node_index(std::size_t i, std::size_t j) const noexcept {
        return j * (grid_.cells_per_side() + 1) + i;
    }
    const Vec2& node(std::size_t k) const noexcept { return nodes_[k]; }
    bool is_boundary(std::size_t k) const noexcept { return boundary_[k]; }
    // Index into the interior unknown vector, or -1 for boundary nodes.
    long interior_index(std::size_t k) const noexcept { return interior_index_[k]; }
    const std::vector<std::size_t>& interior_nodes() const noexcept { return interior_nodes_; }

    // Counterclockwise vertex triples.
    const std::array<std::size_t, 3>& triangle(std::size_t t) const noexcept { return triangles_[t]; }
    double triangle_area(std::size_t t) const noexcept { return areas_[t]; }
    Vec2 centroid(std::size_t t) const noexcept;

    // Gradients of the three hat functions restricted to triangle t.
    const std::array<Vec2, 3>& basis_gradients(std::size_t t) const noexcept { return basis_grads_[t]; }

    // Interior cell (i, j), i, j in {1..N}, contains triangles 2c and 2c + 1
    // with c = (j-1) N + (i-1).
    std::size_t cell_of_triangle(std::size_t t) const noexcept;
    std::size_t first_triangle_of_cell(std::size_t i, std::size_t j) const noexcept {
        return 2 * ((j - 1) * grid_.cells_per_side() + (i - 1));
    }

    const StiffnessPattern& pattern() const noexcept { return pattern_; }

private:
    GridSpec grid_;
    std::vector<Vec2> nodes_;
    std::vector<bool> boundary_;
    std::vector<long> interior_index_;
    std::vector<std::size_t> interior_nodes_;
    std::vector<std::array<std::size_t, 3>> triangles_;
    std::vector<double> areas_;
    std::vector<std::array<Vec2, 3>> basis_grads_;
    StiffnessPattern pattern_;
};

inline Triangulation build_triangulation(const GridSpec& grid) { return Triangulation(grid); }

// Nodal values of a continuous piecewise linear function.
struct NodalScalarField {
    std::vector<double> values;
};

// Constant gradient per triangle.
struct TriangleGradientField {
    std::vector<Vec2> values;
};

using ScalarFunction = std::function<double(double x, double y)>;

NodalScalarField interpolate(const Triangulation& tri, const ScalarFunction& f);

struct SparseSPDSystem {
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<double> values;
    std::vector<double> rhs;

    std::size_t size() const noexcept { return rhs.size(); }
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    double entry(std::size_t r, std::size_t c) const;
};

// 3x3 element matrix  area * grad b_a^T (I + eps2 p p^T) grad b_b  with p the
// in-plane part of the cell director.
std::array<std::array<double, 3>, 3> element_stiffness(const Triangulation& tri, std::size_t t,
                                                      const Vec3& d, double eps2);

// Dense stiffness over all nodes (boundary included); small meshes only.
std::vector<std::vector<double>> assemble_full_stiffness(const Triangulation& tri,
                                                         const CellVectorField& d, double eps2);

// Interior-node system a(u0, v) = F(v) - a(g_h, v) for all interior hat
// functions v. `source` may be empty (f == 0); otherwise F uses one-point
// centroid quadrature. Throws EllipticityError when eps2 <= -1.
SparseSPDSystem assemble_system(const Triangulation& tri, const CellVectorField& d, double eps2,
                                const NodalScalarField& g_nodal, const ScalarFunction& source);

struct SolverOptions {
    double tolerance = 1e-10;     // relative to ||rhs||; absolute when rhs == 0
    std::size_t max_iterations = 0;  // 0: 10 * unknowns + 100
    bool jacobi = false;
};

struct PotentialSolution {
    NodalScalarField phi;
    std::size_t iterations = 0;
    double residual = 0.0;  // final ||A u - b|| / ||b|| (or ||A u - b|| when b == 0)
};

// Conjugate gradients on the interior system, then phi = u0 + g_h.
// `warm_start`, when given, holds interior unknowns. Throws SolverError.
PotentialSolution solve_potential(const Triangulation& tri, const SparseSPDSystem& system,
                                  const NodalScalarField& g_nodal, const SolverOptions& options = {},
                                  const std::vector<double>* warm_start = nullptr);

// Interior unknowns u0 = phi - g_h at interior nodes.
std::vector<double> interior_values(const Triangulation& tri, const NodalScalarField& phi,
                                    const NodalScalarField& g_nodal);

TriangleGradientField triangle_gradients(const Triangulation& tri, const NodalScalarField& phi);

// Per interior cell (row-major, j outer): mean of the cell's two triangle
// gradients, which have equal area.
std::vector<Vec2> cell_average_gradients(const Triangulation& tri, const TriangleGradientField& grads);

// ||grad phi||^2_{L^2} for a per-triangle gradient field.
double gradient_l2_squared(const Triangulation& tri, const TriangleGradientField& grads);

// ||grad a - grad b||^2_{L^2}.
double gradient_difference_l2_squared(const Triangulation& tri, const TriangleGradientField& a,
                                      const TriangleGradientField& b);

// int (p(d) . grad phi)^2 over the domain.
double directional_energy(const Triangulation& tri, const CellVectorField& d,
                          const TriangleGradientField& grads);

// Centroid-quadrature approximation of int f v for a P1 function v; this is
// the same rule the load vector uses.
double load_integral(const Triangulation& tri, const ScalarFunction& f, const NodalScalarField& v);

}  // namespace lcd
