#include "lcd/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace lcd::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(LCD_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() noexcept {
    Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("LCD_SIMD")) {
        const std::string_view v{env};
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && best == Isa::avx2) return Isa::avx2;
    }
    return best;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return cpu_has_avx2();
    }
    return false;
}

const Kernels& kernels(Isa isa) {
#if defined(LCD_HAVE_AVX2)
    if (isa == Isa::avx2 && isa_supported(Isa::avx2)) return detail::avx2_kernels();
#endif
    (void)isa;
    return detail::scalar_kernels();
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

const Kernels& active() { return kernels(active_isa()); }

bool select_isa(Isa isa) noexcept {
    if (!isa_supported(isa)) return false;
    current().store(isa, std::memory_order_relaxed);
    return true;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace lcd::simd
