#include <doctest.h>

#include <vector>

#include "generators.hpp"
#include "lcd/simd/kernels.hpp"

using namespace lcd;

namespace {

struct Buf3 {
    explicit Buf3(std::size_t n) : x(n), y(n), z(n) {}
    std::vector<double> x, y, z;
    simd::Planes3 view() { return {x.data(), y.data(), z.data()}; }
    simd::ConstPlanes3 cview() const { return {x.data(), y.data(), z.data()}; }
    void fill(gen::Rng& rng, double scale) {
        for (auto* v : {&x, &y, &z})
            for (auto& e : *v) e = rng.uniform(-scale, scale);
    }
};

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 13, 64, 67, 1023};

}  // namespace

TEST_CASE("dispatch reports a usable isa") {
    CHECK(simd::isa_supported(simd::Isa::scalar));
    CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
    CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
    const simd::Isa before = simd::active_isa();
    CHECK(simd::select_isa(simd::Isa::scalar));
    CHECK(simd::active_isa() == simd::Isa::scalar);
    CHECK(&simd::active() == &simd::kernels(simd::Isa::scalar));
    CHECK(simd::select_isa(before));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!simd::isa_supported(simd::Isa::avx2)) {
        MESSAGE("avx2 not available on this machine");
        return;
    }
    const auto& s = simd::kernels(simd::Isa::scalar);
    const auto& v = simd::kernels(simd::Isa::avx2);
    gen::Rng rng(99);

    for (std::size_t n : kLengths) {
        CAPTURE(n);
        std::vector<double> a(n), b(n);
        for (auto& e : a) e = rng.uniform(-1, 1);
        for (auto& e : b) e = rng.uniform(-1, 1);

        // dot: reassociated sums, bounded by n ulps of the absolute sum.
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(a[i] * b[i]);
        CHECK(std::abs(s.dot(n, a.data(), b.data()) - v.dot(n, a.data(), b.data())) <=
              1e-15 * static_cast<double>(n + 1) * (abs_sum + 1e-300));

        std::vector<double> y1 = b, y2 = b;
        s.axpy(n, 0.37, a.data(), y1.data());
        v.axpy(n, 0.37, a.data(), y2.data());
        CHECK(max_abs(y1, y2) <= 1e-15);

        y1 = b;
        y2 = b;
        s.xpay(n, a.data(), -1.3, y1.data());
        v.xpay(n, a.data(), -1.3, y2.data());
        CHECK(max_abs(y1, y2) <= 1e-15);

        Buf3 d(n), w(n), o1(n), o2(n);
        d.fill(rng, 1.0);
        w.fill(rng, 20.0);
        s.rotate(n, d.cview(), w.cview(), 0.013, o1.view());
        v.rotate(n, d.cview(), w.cview(), 0.013, o2.view());
        CHECK(max_abs(o1.x, o2.x) <= 1e-15);
        CHECK(max_abs(o1.y, o2.y) <= 1e-15);
        CHECK(max_abs(o1.z, o2.z) <= 1e-15);

        // Laplacian row: centre row of a 3-row strip with one ghost column each side.
        const std::size_t stride = n + 2;
        std::vector<double> strip(3 * stride);
        for (auto& e : strip) e = rng.uniform(-1, 1);
        std::vector<double> l1(n), l2(n);
        s.laplacian_row(n, strip.data() + stride + 1, stride, 4096.0, l1.data());
        v.laplacian_row(n, strip.data() + stride + 1, stride, 4096.0, l2.data());
        CHECK(max_abs(l1, l2) <= 4096.0 * 1e-15);

        Buf3 wold(n), dbar(n), lap(n), r1(n), r2(n);
        wold.fill(rng, 5.0);
        dbar.fill(rng, 1.0);
        lap.fill(rng, 1000.0);
        std::vector<double> sx(n), sy(n);
        for (auto& e : sx) e = rng.uniform(-50, 50);
        for (auto& e : sy) e = rng.uniform(-50, 50);
        simd::AngularUpdateArgs args{wold.cview(), dbar.cview(), lap.cview(), sx.data(), sy.data(),
                                     400.0,        1.0,          1.0 / 402.0, r1.view()};
        s.angular_update(n, args);
        args.out = r2.view();
        v.angular_update(n, args);
        CHECK(max_abs(r1.x, r2.x) <= 1e-13);
        CHECK(max_abs(r1.y, r2.y) <= 1e-13);
        CHECK(max_abs(r1.z, r2.z) <= 1e-13);
    }
}

TEST_CASE("scalar kernels match their definitions") {
    const auto& s = simd::kernels(simd::Isa::scalar);
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(s.dot(3, a.data(), b.data()) == 32.0);
    std::vector<double> y = b;
    s.axpy(3, 2.0, a.data(), y.data());
    CHECK(y == std::vector<double>{6, 9, 12});
    y = b;
    s.xpay(3, a.data(), 2.0, y.data());
    CHECK(y == std::vector<double>{9, 12, 15});

    // angular update: (keep w + k lap x d + S x d) * inv_denom, S = (sx, sy, 0).
    const double wx = 1, wy = 0, wz = 0, dx = 0, dy = 0, dz = 1, lx = 0, ly = 1, lz = 0, sx = 2, sy = 0;
    double ox, oy, oz;
    simd::AngularUpdateArgs args{{&wx, &wy, &wz}, {&dx, &dy, &dz}, {&lx, &ly, &lz}, &sx, &sy,
                                 3.0,             2.0,             0.5,             {&ox, &oy, &oz}};
    s.angular_update(1, args);
    // lap x d = (1, 0, 0), S x d = (0, -2, 0).
    CHECK(ox == doctest::Approx((3.0 + 2.0) * 0.5));
    CHECK(oy == doctest::Approx(-2.0 * 0.5));
    CHECK(oz == 0.0);
}
