#include <cmath>

#include "lcd/errors.hpp"
#include "lcd/fem.hpp"
#include "lcd/simd/kernels.hpp"

namespace lcd {

PotentialSolution solve_potential(const Triangulation& tri, const SparseSPDSystem& system,
                                  const NodalScalarField& g_nodal, const SolverOptions& options,
                                  const std::vector<double>* warm_start) {
    const auto& k = simd::active();
    const std::size_t n = system.size();
    const std::size_t max_iter = options.max_iterations ? options.max_iterations : 10 * n + 100;

    std::vector<double> x(n, 0.0);
    if (warm_start && warm_start->size() == n) x = *warm_start;

    std::vector<double> inv_diag;
    if (options.jacobi) {
        inv_diag.resize(n);
        for (std::size_t r = 0; r < n; ++r) inv_diag[r] = 1.0 / system.entry(r, r);
    }

    std::vector<double> r(n), ap(n), z, p;
    system.multiply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - ap[i];

    const double b_norm = std::sqrt(k.dot(n, system.rhs.data(), system.rhs.data()));
    const double scale = b_norm > 0.0 ? b_norm : 1.0;
    const double threshold = options.tolerance * scale;

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(n);
        if (inv_diag.empty()) {
            out = in;
        } else {
            for (std::size_t i = 0; i < n; ++i) out[i] = inv_diag[i] * in[i];
        }
    };

    precondition(r, z);
    p = z;
    double rz = k.dot(n, r.data(), z.data());
    double r_norm = std::sqrt(k.dot(n, r.data(), r.data()));
    std::size_t it = 0;
    while (r_norm > threshold) {
        if (it == max_iter) throw SolverError(it, r_norm / scale);
        system.multiply(p, ap);
        const double pap = k.dot(n, p.data(), ap.data());
        if (!(pap > 0.0)) throw SolverError(it, r_norm / scale);
        const double alpha = rz / pap;
        k.axpy(n, alpha, p.data(), x.data());
        k.axpy(n, -alpha, ap.data(), r.data());
        precondition(r, z);
        const double rz_next = k.dot(n, r.data(), z.data());
        k.xpay(n, z.data(), rz_next / rz, p.data());
        rz = rz_next;
        r_norm = std::sqrt(k.dot(n, r.data(), r.data()));
        ++it;
    }

    PotentialSolution out;
    out.iterations = it;
    out.residual = r_norm / scale;
    out.phi.values = g_nodal.values;
    const auto& nodes = tri.interior_nodes();
    for (std::size_t i = 0; i < n; ++i) out.phi.values[nodes[i]] += x[i];
    return out;
}

}  // namespace lcd
