#include <atomic>
#include <stdexcept>

#include "colorseg/kernels.hpp"

namespace colorseg::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();  // defined in avx2.cpp

static bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
static bool cpu_has_avx2() { return false; }
#endif

namespace {

const Ops* detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return &avx2_ops();
#endif
    return &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active() {
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (!ops) {
        ops = detect();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

void select(const std::string& name) {
    if (name == "auto") {
        g_active.store(detect(), std::memory_order_release);
        return;
    }
    if (name == "scalar") {
        g_active.store(&scalar_ops(), std::memory_order_release);
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") {
        if (!cpu_has_avx2()) throw std::runtime_error("avx2 kernels not supported by this CPU");
        g_active.store(&avx2_ops(), std::memory_order_release);
        return;
    }
#endif
    throw std::invalid_argument("unknown kernel flavour: " + name);
}

std::vector<std::string> available() {
    std::vector<std::string> out = {"scalar"};
    if (cpu_has_avx2()) out.push_back("avx2");
    return out;
}

}  // namespace colorseg::kernels
