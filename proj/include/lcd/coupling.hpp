#pragma once

#include "lcd/fem.hpp"
#include "lcd/grid.hpp"

namespace lcd {

// Electromechanical source per cell,
//
//   S_i = eps1 / (2 |C_i|) int_{C_i} (grad_new . d) grad_old + (grad_old . d) grad_new,
//
// with d = d_half_i and the dot products taken with the in-plane part of d.
// The cell integral is the equal-weight mean over the cell's two triangles.
// Result is embedded as (Sx, Sy, 0); ghost cells are zero.
CellVectorField source_term(const Triangulation& tri, const TriangleGradientField& grads_old,
                            const TriangleGradientField& grads_new, const CellVectorField& d_half,
                            double eps1);

void source_term(const Triangulation& tri, const TriangleGradientField& grads_old,
                 const TriangleGradientField& grads_new, const CellVectorField& d_half, double eps1,
                 CellVectorField& out);

}  // namespace lcd
