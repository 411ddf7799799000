#pragma once

// Uniform cell-centred grid on a square with one ghost layer, vector fields
// stored on it, and the finite-difference operators acting on them.

#include <array>
#include <cstddef>
#include <vector>

#include "lcd/simd/kernels.hpp"
#include "lcd/vec3.hpp"

namespace lcd {

class GridSpec {
public:
    // Throws ConfigError unless cells_per_side >= 2 and side_length > 0.
    GridSpec(std::size_t cells_per_side, double side_length = 1.0, Vec2 origin = {0.0, 0.0});

    std::size_t cells_per_side() const noexcept { return n_; }
    double side_length() const noexcept { return length_; }
    double mesh_width() const noexcept { return h_; }
    Vec2 origin() const noexcept { return origin_; }

    // Cells per row including the two ghost columns.
    std::size_t stride() const noexcept { return n_ + 2; }
    std::size_t storage_size() const noexcept { return (n_ + 2) * (n_ + 2); }
    std::size_t interior_count() const noexcept { return n_ * n_; }

    // (i, j) in {0..N+1}^2; interior cells are {1..N}^2.
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * (n_ + 2) + i; }

    // Centre of cell (i, j); for interior cells the cell covers
    // [origin + (i-1)h, origin + i h] in each direction.
    Vec2 cell_center(std::size_t i, std::size_t j) const noexcept {
        return {origin_.x + (static_cast<double>(i) - 0.5) * h_,
                origin_.y + (static_cast<double>(j) - 0.5) * h_};
    }

    double cell_area() const noexcept { return h_ * h_; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::size_t n_;
    double length_;
    double h_;
    Vec2 origin_;
};

// A 3-vector per cell (ghosts included), stored as three component planes.
class CellVectorField {
public:
    explicit CellVectorField(const GridSpec& grid, Vec3 fill = {});

    const GridSpec& grid() const noexcept { return grid_; }

    Vec3 at(std::size_t i, std::size_t j) const noexcept { return at(grid_.index(i, j)); }
    Vec3 at(std::size_t k) const noexcept { return {planes_[0][k], planes_[1][k], planes_[2][k]}; }
    void set(std::size_t i, std::size_t j, const Vec3& v) noexcept { set(grid_.index(i, j), v); }
    void set(std::size_t k, const Vec3& v) noexcept {
        planes_[0][k] = v.x;
        planes_[1][k] = v.y;
        planes_[2][k] = v.z;
    }

    std::vector<double>& plane(std::size_t c) noexcept { return planes_[c]; }
    const std::vector<double>& plane(std::size_t c) const noexcept { return planes_[c]; }

    // Views starting at storage offset k, for the SIMD kernels.
    simd::Planes3 planes_at(std::size_t k) noexcept {
        return {planes_[0].data() + k, planes_[1].data() + k, planes_[2].data() + k};
    }
    simd::ConstPlanes3 planes_at(std::size_t k) const noexcept {
        return {planes_[0].data() + k, planes_[1].data() + k, planes_[2].data() + k};
    }

    // Fills every interior cell from f(i, j).
    template <class F>
    void fill_interior(F&& f) {
        const std::size_t n = grid_.cells_per_side();
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = 1; i <= n; ++i) set(i, j, f(i, j));
    }

    friend bool operator==(const CellVectorField&, const CellVectorField&) = default;

private:
    GridSpec grid_;
    std::array<std::vector<double>, 3> planes_;
};

// Homogeneous Neumann ghosts: each ghost copies its adjacent interior cell,
// corners copy the diagonal neighbour.
void apply_neumann_ghosts(CellVectorField& field);
CellVectorField with_neumann_ghosts(CellVectorField field);

// 5-point Laplacian on interior cells; ghosts of the result are zero.
// Requires up-to-date ghosts in the input.
CellVectorField discrete_laplacian(const CellVectorField& field);
void discrete_laplacian(const CellVectorField& field, CellVectorField& out);

// h^2 * sum over interior faces of |D^+ d|^2, i.e. ||grad_h d||^2_{L^2}.
double gradient_energy(const CellVectorField& field);

// h^2 * sum over interior cells of |v|^2.
double l2_norm_squared(const CellVectorField& field);

// h^2 * sum over interior cells of a . b.
double l2_inner(const CellVectorField& a, const CellVectorField& b);

// Elementwise a + s * b over the full storage (ghosts included).
CellVectorField combine(const CellVectorField& a, double s, const CellVectorField& b);

// 0.5 * (a + b) over the full storage.
CellVectorField midpoint(const CellVectorField& a, const CellVectorField& b);

// max over interior cells of | |v| - 1 |.
double max_unit_deviation(const CellVectorField& field);

}  // namespace lcd
