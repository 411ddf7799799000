#include <doctest.h>

#include "generators.hpp"
#include "lcd/coupling.hpp"

using namespace lcd;

namespace {

TriangleGradientField uniform(const Triangulation& tri, Vec2 v) {
    TriangleGradientField f;
    f.values.assign(tri.triangle_count(), v);
    return f;
}

TriangleGradientField lin(const TriangleGradientField& a, double s, const TriangleGradientField& b) {
    TriangleGradientField out = a;
    for (std::size_t t = 0; t < a.values.size(); ++t)
        out.values[t] = {a.values[t].x + s * b.values[t].x, a.values[t].y + s * b.values[t].y};
    return out;
}

double max_diff(const CellVectorField& a, const CellVectorField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.grid().storage_size(); ++k) m = std::max(m, norm(a.at(k) - b.at(k)));
    return m;
}

}  // namespace

TEST_CASE("source term examples") {
    const GridSpec g(4);
    const Triangulation tri(g);
    gen::Rng rng(1);

    SUBCASE("a zero gradient field gives zero") {
        const auto s = source_term(tri, uniform(tri, {}), rng.gradients(tri), rng.unit_field(g), 5.0);
        for (std::size_t k = 0; k < g.storage_size(); ++k) CHECK(s.at(k) == Vec3{});
    }
    SUBCASE("uniform aligned field") {
        const auto e = uniform(tri, {1.0, 0.0});
        const auto s = source_term(tri, e, e, CellVectorField(g, {1.0, 0.0, 0.0}), 5.0);
        for (std::size_t j = 1; j <= 4; ++j)
            for (std::size_t i = 1; i <= 4; ++i) CHECK(s.at(i, j) == Vec3{5.0, 0.0, 0.0});
    }
    SUBCASE("out-of-plane director decouples") {
        const auto s = source_term(tri, rng.gradients(tri), rng.gradients(tri), CellVectorField(g, {0, 0, 1}), 3.0);
        for (std::size_t k = 0; k < g.storage_size(); ++k) CHECK(s.at(k) == Vec3{});
    }
    SUBCASE("cell value is the mean over its two triangles") {
        TriangleGradientField a = uniform(tri, {}), b = uniform(tri, {});
        const std::size_t t0 = tri.first_triangle_of_cell(2, 3);
        a.values[t0] = {1.0, 0.0};
        b.values[t0] = {0.0, 2.0};
        const Vec3 d{0.6, 0.8, 0.0};
        const auto s = source_term(tri, a, b, CellVectorField(g, d), 1.0);
        // eps1/2 * (1/2) [(b.d) a + (a.d) b] on the single active triangle.
        const Vec3 expected = 0.25 * (1.6 * Vec3{1, 0, 0} + 0.6 * Vec3{0, 2, 0});
        CHECK(norm(s.at(2, 3) - expected) < 1e-15);
        CHECK(s.at(3, 2) == Vec3{});
    }
}

TEST_CASE("source term is symmetric in its time levels") {
    gen::Rng rng(2);
    const GridSpec g(7);
    const Triangulation tri(g);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = rng.gradients(tri), b = rng.gradients(tri);
        const auto d = rng.field(g);
        CHECK(source_term(tri, a, b, d, 1.7) == source_term(tri, b, a, d, 1.7));
    }
}

TEST_CASE("source term is linear in eps1 and bilinear in the gradients") {
    gen::Rng rng(3);
    const GridSpec g(6);
    const Triangulation tri(g);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = rng.gradients(tri), a2 = rng.gradients(tri), b = rng.gradients(tri);
        const auto d = rng.unit_field(g);
        const double s = rng.uniform(-3, 3), e = rng.uniform(-5, 5);
        const auto base = source_term(tri, a, b, d, 1.0);
        CHECK(max_diff(source_term(tri, a, b, d, e), combine(CellVectorField(g), e, base)) < 1e-13);
        const auto lhs = source_term(tri, lin(a, s, a2), b, d, e);
        const auto rhs = combine(source_term(tri, a, b, d, e), s, source_term(tri, a2, b, d, e));
        CHECK(max_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("torque of the source is orthogonal to the director") {
    gen::Rng rng(4);
    const GridSpec g(8);
    const Triangulation tri(g);
    const auto d = rng.unit_field(g);
    const auto s = source_term(tri, rng.gradients(tri, 10.0), rng.gradients(tri, 10.0), d, -5.0);
    for (std::size_t j = 1; j <= 8; ++j) {
        for (std::size_t i = 1; i <= 8; ++i) {
            CHECK(s.at(i, j).z == 0.0);
            CHECK(std::abs(dot(cross(s.at(i, j), d.at(i, j)), d.at(i, j))) < 1e-13);
        }
    }
}
