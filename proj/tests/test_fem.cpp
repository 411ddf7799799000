#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "lcd/errors.hpp"
#include "lcd/fem.hpp"

using namespace lcd;
using std::numbers::pi;

namespace {

Eigen::MatrixXd dense(const SparseSPDSystem& s) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<long>(s.size()), static_cast<long>(s.size()));
    for (std::size_t r = 0; r < s.size(); ++r)
        for (std::size_t k = s.row_ptr[r]; k < s.row_ptr[r + 1]; ++k)
            m(static_cast<long>(r), static_cast<long>(s.col[k])) = s.values[k];
    return m;
}

NodalScalarField zeros(const Triangulation& tri) { return {std::vector<double>(tri.node_count(), 0.0)}; }

double nodal_max_error(const Triangulation& tri, const NodalScalarField& phi,
                       const std::function<double(double, double)>& exact) {
    double e = 0.0;
    for (std::size_t k = 0; k < tri.node_count(); ++k)
        e = std::max(e, std::abs(phi.values[k] - exact(tri.node(k).x, tri.node(k).y)));
    return e;
}

SolverOptions tight() {
    SolverOptions o;
    o.tolerance = 1e-13;
    return o;
}

}  // namespace

TEST_CASE("triangulation counts") {
    SUBCASE("N=2") {
        const Triangulation tri(GridSpec(2));
        CHECK(tri.node_count() == 9);
        CHECK(tri.triangle_count() == 8);
        CHECK(tri.interior_node_count() == 1);
        std::size_t boundary = 0;
        for (std::size_t k = 0; k < tri.node_count(); ++k) boundary += tri.is_boundary(k);
        CHECK(boundary == 8);
        CHECK(tri.interior_nodes().front() == tri.node_index(1, 1));
    }
    SUBCASE("N=64") {
        const Triangulation tri(GridSpec(64));
        CHECK(tri.node_count() == 4225);
        CHECK(tri.triangle_count() == 8192);
        CHECK(tri.interior_node_count() == 63 * 63);
    }
    SUBCASE("one cell holds four corner nodes and two triangles") {
        const Triangulation tri(GridSpec(3));
        const std::size_t t0 = tri.first_triangle_of_cell(2, 3);
        std::vector<std::size_t> nodes;
        for (std::size_t t : {t0, t0 + 1})
            for (std::size_t v : tri.triangle(t)) nodes.push_back(v);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        CHECK(nodes.size() == 4);
    }
}

TEST_CASE("triangles are counterclockwise and sit inside their cell") {
    const GridSpec g(5, 2.0, {-1.0, 0.5});
    const Triangulation tri(g);
    const double h = g.mesh_width();
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        CHECK(tri.triangle_area(t) == doctest::Approx(0.5 * h * h));
        const std::size_t cell = tri.cell_of_triangle(t);
        const std::size_t i = cell % g.stride(), j = cell / g.stride();
        const Vec2 c = g.cell_center(i, j);
        for (std::size_t v : tri.triangle(t)) {
            CHECK(std::abs(tri.node(v).x - c.x) <= 0.5 * h + 1e-14);
            CHECK(std::abs(tri.node(v).y - c.y) <= 0.5 * h + 1e-14);
        }
        CHECK(tri.first_triangle_of_cell(i, j) == t - t % 2);
    }
}

TEST_CASE("basis gradients sum to zero and reproduce coordinates") {
    const Triangulation tri(GridSpec(4, 1.3));
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const auto& g = tri.basis_gradients(t);
        CHECK(g[0].x + g[1].x + g[2].x == doctest::Approx(0.0));
        CHECK(g[0].y + g[1].y + g[2].y == doctest::Approx(0.0));
        double gx = 0.0;
        for (int a = 0; a < 3; ++a) gx += tri.node(tri.triangle(t)[a]).x * g[a].x;
        CHECK(gx == doctest::Approx(1.0));
    }
}

TEST_CASE("single cell stiffness matches the hand-assembled two-triangle matrix") {
    // Unit-square corners 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1), diagonal 0-3.
    // The 2D P1 Laplace stiffness is scale invariant, so any cell reproduces it.
    const double expected[4][4] = {{1.0, -0.5, -0.5, 0.0},
                                   {-0.5, 1.0, 0.0, -0.5},
                                   {-0.5, 0.0, 1.0, -0.5},
                                   {0.0, -0.5, -0.5, 1.0}};
    const GridSpec g(3, 0.6);
    const Triangulation tri(g);
    const std::size_t i = 2, j = 2;
    const std::size_t local[4] = {tri.node_index(i - 1, j - 1), tri.node_index(i, j - 1),
                                  tri.node_index(i - 1, j), tri.node_index(i, j)};
    double k[4][4] = {};
    const std::size_t t0 = tri.first_triangle_of_cell(i, j);
    for (std::size_t t : {t0, t0 + 1}) {
        const auto e = element_stiffness(tri, t, {0.0, 0.0, 1.0}, 0.0);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const auto la = std::find(local, local + 4, tri.triangle(t)[a]) - local;
                const auto lb = std::find(local, local + 4, tri.triangle(t)[b]) - local;
                k[la][lb] += e[a][b];
            }
        }
    }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(k[a][b] == doctest::Approx(expected[a][b]).epsilon(1e-14));
}

TEST_CASE("assembled stiffness over all nodes has zero row sums") {
    gen::Rng rng(4);
    const GridSpec g(4);
    const Triangulation tri(g);
    const auto m = assemble_full_stiffness(tri, rng.unit_field(g), 0.7);
    for (const auto& row : m) {
        double s = 0.0;
        for (double v : row) s += v;
        CHECK(std::abs(s) < 1e-13);
    }
}

TEST_CASE("out-of-plane director leaves the matrix isotropic") {
    const GridSpec g(6);
    const Triangulation tri(g);
    gen::Rng rng(8);
    CellVectorField d(g);
    d.fill_interior([&](std::size_t, std::size_t) { return Vec3{0.0, 0.0, rng.uniform(0, 1) < 0.5 ? 1.0 : -1.0}; });
    const auto zero = zeros(tri);
    const SparseSPDSystem a = assemble_system(tri, d, 0.8, zero, {});
    const SparseSPDSystem b = assemble_system(tri, d, 0.0, zero, {});
    CHECK(a.values == b.values);
}

TEST_CASE("matrix is symmetric and positive definite for eps2 > -1") {
    gen::Rng rng(12);
    for (double eps2 : {-0.99, -0.5, 0.0, 0.5, 4.0}) {
        const GridSpec g(4);
        const Triangulation tri(g);
        const SparseSPDSystem s = assemble_system(tri, rng.unit_field(g), eps2, zeros(tri), {});
        const Eigen::MatrixXd m = dense(s);
        CHECK(m.rows() == 9);
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("coercivity against the isotropic matrix") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const GridSpec g(rng.index(3, 10));
        const Triangulation tri(g);
        const double eps2 = rng.uniform(-0.95, 3.0);
        const CellVectorField d = rng.unit_field(g);
        const SparseSPDSystem a = assemble_system(tri, d, eps2, zeros(tri), {});
        const SparseSPDSystem l = assemble_system(tri, d, 0.0, zeros(tri), {});
        std::vector<double> v(a.size()), av, lv;
        for (auto& x : v) x = rng.normal();
        a.multiply(v, av);
        l.multiply(v, lv);
        double vav = 0.0, vlv = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            vav += v[i] * av[i];
            vlv += v[i] * lv[i];
        }
        CHECK(vav >= (1.0 + std::min(0.0, eps2)) * vlv * (1.0 - 1e-13));
    }
}

TEST_CASE("loss of ellipticity is rejected") {
    const GridSpec g(3);
    const Triangulation tri(g);
    const CellVectorField d(g, {1.0, 0.0, 0.0});
    CHECK_THROWS_AS(assemble_system(tri, d, -1.0, zeros(tri), {}), EllipticityError);
    try {
        assemble_system(tri, d, -1.5, zeros(tri), {});
        FAIL("expected EllipticityError");
    } catch (const EllipticityError& e) {
        CHECK(e.eps2() == -1.5);
        CHECK(std::string(e.what()).find("ellipticity") != std::string::npos);
    }
}

TEST_CASE("homogeneous data gives a zero potential") {
    const GridSpec g(8);
    const Triangulation tri(g);
    gen::Rng rng(2);
    const auto zero = zeros(tri);
    const PotentialSolution s = solve_potential(tri, assemble_system(tri, rng.unit_field(g), 0.3, zero, {}), zero);
    CHECK(s.iterations == 0);
    for (double v : s.phi.values) CHECK(v == 0.0);
}

TEST_CASE("affine solutions are reproduced exactly") {
    gen::Rng rng(17);
    SUBCASE("phi = x, isotropic") {
        const GridSpec g(9);
        const Triangulation tri(g);
        const NodalScalarField gx = interpolate(tri, [](double x, double) { return x; });
        const PotentialSolution s =
            solve_potential(tri, assemble_system(tri, rng.unit_field(g), 0.0, gx, {}), gx, tight());
        CHECK(nodal_max_error(tri, s.phi, [](double x, double) { return x; }) < 1e-12);
    }
    SUBCASE("phi = 3x - 2y, uniform anisotropic director") {
        const GridSpec g(7, 1.0, {-0.5, -0.5});
        const Triangulation tri(g);
        const auto exact = [](double x, double y) { return 3.0 * x - 2.0 * y; };
        const NodalScalarField gl = interpolate(tri, exact);
        const CellVectorField d(g, rng.unit3());
        const PotentialSolution s = solve_potential(tri, assemble_system(tri, d, 0.5, gl, {}), gl, tight());
        CHECK(nodal_max_error(tri, s.phi, exact) < 1e-12);
    }
}

TEST_CASE("manufactured sine solution converges at second order") {
    auto run = [](std::size_t n, const Vec3& dir, double eps2, const ScalarFunction& f) {
        const GridSpec g(n);
        const Triangulation tri(g);
        const NodalScalarField zero{std::vector<double>(tri.node_count(), 0.0)};
        const PotentialSolution s =
            solve_potential(tri, assemble_system(tri, CellVectorField(g, dir), eps2, zero, f), zero, tight());
        return nodal_max_error(tri, s.phi, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    };
    SUBCASE("isotropic") {
        const ScalarFunction f = [](double x, double y) { return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
        double prev = run(8, {0, 0, 1}, 0.0, f);
        for (std::size_t n : {16, 32, 64}) {
            const double e = run(n, {0, 0, 1}, 0.0, f);
            CHECK(prev / e == doctest::Approx(4.0).epsilon(0.05));
            prev = e;
        }
    }
    SUBCASE("anisotropic along the diagonal") {
        // A = I + eps2 p p^T with p = (1, 1)/sqrt(2):
        // -div(A grad phi) = (2 + eps2) pi^2 phi - eps2 pi^2 cos(pi x) cos(pi y).
        const double eps2 = 0.5;
        const ScalarFunction f = [=](double x, double y) {
            return (2.0 + eps2) * pi * pi * std::sin(pi * x) * std::sin(pi * y) -
                   eps2 * pi * pi * std::cos(pi * x) * std::cos(pi * y);
        };
        const double c = 1.0 / std::sqrt(2.0);
        double prev = run(8, {c, c, 0}, eps2, f);
        for (std::size_t n : {16, 32, 64}) {
            const double e = run(n, {c, c, 0}, eps2, f);
            CHECK(prev / e == doctest::Approx(4.0).epsilon(0.1));
            prev = e;
        }
    }
}

TEST_CASE("discrete weak form residual is within solver tolerance") {
    gen::Rng rng(44);
    const GridSpec g(12, 1.0, {-0.5, -0.5});
    const Triangulation tri(g);
    const NodalScalarField gl = interpolate(tri, [](double x, double y) { return std::sin(3 * x) * (y + 0.5); });
    const ScalarFunction f = [](double x, double y) { return 1.0 + x * y; };
    const SparseSPDSystem sys = assemble_system(tri, rng.unit_field(g), -0.4, gl, f);
    SolverOptions opts;
    opts.tolerance = 1e-10;
    const PotentialSolution s = solve_potential(tri, sys, gl, opts);
    const std::vector<double> u = interior_values(tri, s.phi, gl);
    std::vector<double> au;
    sys.multiply(u, au);
    double r2 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        r2 += (au[i] - sys.rhs[i]) * (au[i] - sys.rhs[i]);
        b2 += sys.rhs[i] * sys.rhs[i];
    }
    CHECK(std::sqrt(r2) <= 1.01e-10 * std::sqrt(b2));
    CHECK(s.residual <= 1e-10);
    // Boundary nodes carry the Dirichlet data.
    for (std::size_t k = 0; k < tri.node_count(); ++k)
        if (tri.is_boundary(k)) CHECK(s.phi.values[k] == gl.values[k]);
}

TEST_CASE("solver options") {
    gen::Rng rng(5);
    const GridSpec g(16);
    const Triangulation tri(g);
    const NodalScalarField gl = interpolate(tri, [](double x, double y) { return x * x - y; });
    const SparseSPDSystem sys = assemble_system(tri, rng.unit_field(g), 0.9, gl, {});

    SUBCASE("iteration limit raises SolverError with the residual") {
        SolverOptions o;
        o.max_iterations = 2;
        try {
            solve_potential(tri, sys, gl, o);
            FAIL("expected SolverError");
        } catch (const SolverError& e) {
            CHECK(e.iterations() == 2);
            CHECK(e.residual() > 0.0);
        }
    }
    SUBCASE("jacobi preconditioning reaches the same solution") {
        SolverOptions a = tight(), b = tight();
        b.jacobi = true;
        const PotentialSolution sa = solve_potential(tri, sys, gl, a);
        const PotentialSolution sb = solve_potential(tri, sys, gl, b);
        for (std::size_t k = 0; k < tri.node_count(); ++k)
            CHECK(sa.phi.values[k] == doctest::Approx(sb.phi.values[k]).epsilon(1e-10));
    }
    SUBCASE("warm start from the solution converges immediately") {
        const PotentialSolution s = solve_potential(tri, sys, gl, tight());
        const std::vector<double> warm = interior_values(tri, s.phi, gl);
        SolverOptions loose;
        loose.tolerance = 1e-8;
        CHECK(solve_potential(tri, sys, gl, loose, &warm).iterations == 0);
    }
    SUBCASE("matches a dense solve") {
        const PotentialSolution s = solve_potential(tri, sys, gl, tight());
        const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), static_cast<long>(sys.size()));
        const Eigen::VectorXd x = dense(sys).llt().solve(b);
        const std::vector<double> u = interior_values(tri, s.phi, gl);
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(x(static_cast<long>(i))).epsilon(1e-9));
    }
}

TEST_CASE("triangle gradients of affine fields") {
    const GridSpec g(5, 1.0, {-0.5, -0.5});
    const Triangulation tri(g);
    const auto grads_of = [&](const ScalarFunction& f) { return triangle_gradients(tri, interpolate(tri, f)); };
    for (const Vec2& v : grads_of([](double, double) { return 4.2; }).values) {
        CHECK(v.x == 0.0);
        CHECK(v.y == 0.0);
    }
    for (const Vec2& v : grads_of([](double x, double) { return x; }).values) {
        CHECK(v.x == doctest::Approx(1.0));
        CHECK(v.y == doctest::Approx(0.0).epsilon(1e-13));
    }
    for (const Vec2& v : grads_of([](double x, double y) { return 3 * x - 2 * y; }).values) {
        CHECK(v.x == doctest::Approx(3.0));
        CHECK(v.y == doctest::Approx(-2.0));
    }
}

TEST_CASE("cell average gradients") {
    const GridSpec g(3);
    const Triangulation tri(g);
    TriangleGradientField f;
    f.values.assign(tri.triangle_count(), {0.3, -0.1});
    for (const Vec2& v : cell_average_gradients(tri, f)) {
        CHECK(v.x == 0.3);
        CHECK(v.y == -0.1);
    }
    for (std::size_t c = 0; c < 9; ++c) {
        f.values[2 * c] = {1.0, 0.0};
        f.values[2 * c + 1] = {0.0, 1.0};
    }
    for (const Vec2& v : cell_average_gradients(tri, f)) {
        CHECK(v.x == 0.5);
        CHECK(v.y == 0.5);
    }
    // Ordering: entry (j-1) N + (i-1) belongs to cell (i, j).
    const auto avg = cell_average_gradients(
        tri, triangle_gradients(tri, interpolate(tri, [](double x, double y) { return x * x + 10 * y; })));
    const Vec2 c = g.cell_center(3, 1);
    CHECK(avg[2].x == doctest::Approx(2 * c.x).epsilon(0.05));
    CHECK(avg[2].y == doctest::Approx(10.0));
}

TEST_CASE("gradient norms and load integrals") {
    const GridSpec g(6, 2.0);
    const Triangulation tri(g);
    const auto grads = triangle_gradients(tri, interpolate(tri, [](double x, double y) { return 3 * x - 2 * y; }));
    CHECK(gradient_l2_squared(tri, grads) == doctest::Approx(13.0 * 4.0));
    const CellVectorField d(g, {1.0, 0.0, 0.0});
    CHECK(directional_energy(tri, d, grads) == doctest::Approx(9.0 * 4.0));
    CHECK(gradient_difference_l2_squared(tri, grads, grads) == 0.0);
    const NodalScalarField one{std::vector<double>(tri.node_count(), 1.0)};
    CHECK(load_integral(tri, [](double, double) { return 1.0; }, one) == doctest::Approx(4.0));
    // Centroid rule is exact for f linear times v constant.
    CHECK(load_integral(tri, [](double x, double) { return x; }, one) == doctest::Approx(4.0));
    CHECK(load_integral(tri, {}, one) == 0.0);
}
