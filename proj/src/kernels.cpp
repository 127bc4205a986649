#include "speclab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace speclab::kernels {

const Ops* avx2_ops_table();  // defined in kernels_avx2.cpp

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
         avx2_ops_table() != nullptr;
#else
  return false;
#endif
}

namespace {

const Ops* select() {
  const char* env = std::getenv("SPECLAB_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_ops_table();
  }
  if (avx2_available()) return avx2_ops_table();
  return &scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops* active = select();
  return *active;
}

std::string_view active_name() { return ops().name; }

}  // namespace speclab::kernels
