#pragma once

#include <cstddef>

#include "lcd/fem.hpp"
#include "lcd/grid.hpp"
#include "lcd/stepper.hpp"

namespace lcd {

struct DiagnosticsRecord {
    std::size_t step = 0;
    double time = 0.0;
    double reduced_energy = 0.0;
    double total_energy = 0.0;
    double damping_integral = 0.0;
    double constraint_dev = 0.0;
    double ortho_dev = 0.0;
    double alignment = 0.0;
    std::size_t fp_iters = 0;
    double fp_final_norm = 0.0;
};

// 1/2 int (k |grad_h d|^2 + alpha |w|^2)
double reduced_energy(const CellVectorField& d, const CellVectorField& w, const Params& params);

// Reduced energy plus the potential terms int |grad phi|^2 + eps2 (d . grad phi)^2.
double total_energy(const Triangulation& tri, const State& state, const Params& params);

// beta dt ||(w_old + w_new) / 2||^2
double damping_increment(const CellVectorField& w_old, const CellVectorField& w_new, double beta, double dt);

// Adds the increment for one step to record.damping_integral.
void damping_accumulate(DiagnosticsRecord& record, const CellVectorField& w_old,
                        const CellVectorField& w_new, const Params& params);

// ||d . w||_{L^2}
double orthogonality_deviation(const CellVectorField& d, const CellVectorField& w);

// Mean of (d . e)^2 over cells whose averaged field E has |E| > threshold,
// e = E / |E| embedded in the plane. Returns 0 when no cell qualifies.
double alignment_metric(const Triangulation& tri, const CellVectorField& d,
                        const TriangleGradientField& grads, double threshold = 1e-8);

// |E~(new) - E~(old) + beta dt ||w_half||^2| for homogeneous data (g = 0, f = 0).
double energy_balance_residual(const Triangulation& tri, const State& old_state, const State& new_state,
                               const Params& params);

// Residual of the full one-step energy identity with Dirichlet data and
// source terms. Needs eps2 != 0 unless eps1 == 0.
double energy_balance_residual_full(const Triangulation& tri, const State& old_state,
                                    const State& new_state, const Params& params,
                                    const ProblemData& data);

DiagnosticsRecord make_record(const Triangulation& tri, const State& state, const Params& params,
                              double damping_integral, const StepStats* stats);

}  // namespace lcd
