#pragma once

// Exact midpoint rotation of the director: d_new = V(w_bar) d, where V solves
// (d_new - d) / dt = ((d_new + d) / 2) x w_bar in closed form.

#include <array>

#include "lcd/grid.hpp"
#include "lcd/vec3.hpp"

namespace lcd {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

// Skew matrix with Q(w) v = v x w.
Mat3 cross_matrix(const Vec3& w);

// V(w) = [(1 - dt^2|w|^2/4) I + (dt^2/2) w w^T + dt Q(w)] / (1 + dt^2|w|^2/4).
// Orthogonal with V w = w; rotates the plane orthogonal to w by
// 2 atan(dt |w| / 2) about -w.
Mat3 rotation_matrix(const Vec3& w_bar, double dt);

// Applies V(w_bar_i) to d_i on every interior cell and refreshes the Neumann
// ghosts of the result.
CellVectorField advance_director(const CellVectorField& d, const CellVectorField& w_bar, double dt);
void advance_director(const CellVectorField& d, const CellVectorField& w_bar, double dt,
                      CellVectorField& out);

}  // namespace lcd
