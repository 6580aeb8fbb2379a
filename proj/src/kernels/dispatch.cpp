#include "nledlab/kernels.hpp"

#include <cstdlib>
#include <string>

#include "nledlab/errors.hpp"

namespace nledlab::kernels {

#if !defined(NLEDLAB_HAVE_AVX2_TU)
const Ops* avx2_ops() { return nullptr; }
#endif

bool avx2_available() {
#if defined(NLEDLAB_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

Isa select_isa() {
    if (const char* env = std::getenv("NLEDLAB_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return Isa::Scalar;
        if (want == "avx2") {
            if (!avx2_available() || avx2_ops() == nullptr)
                throw ConfigError("NLEDLAB_SIMD=avx2 requested but AVX2 is unavailable");
            return Isa::Avx2;
        }
        throw ConfigError("NLEDLAB_SIMD must be 'scalar' or 'avx2', got '" + want + "'");
    }
    return avx2_available() && avx2_ops() != nullptr ? Isa::Avx2 : Isa::Scalar;
}

} // namespace

Isa active_isa() {
    static const Isa isa = select_isa();
    return isa;
}

const Ops& ops() {
    return active_isa() == Isa::Avx2 ? *avx2_ops() : scalar_ops();
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

} // namespace nledlab::kernels
