#include <cstdlib>
#include <string>

#include "intentnet/errors.hpp"
#include "intentnet/kernels.hpp"

namespace intentnet::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(INTENTNET_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("INTENTNET_BACKEND")) {
    const std::string want(env);
    if (want == "scalar") {
      return Backend::Scalar;
    }
    if (want == "avx2" && cpu_has_avx2()) {
      return Backend::Avx2;
    }
    // Unknown or unsupported request: fall through to detection.
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

Backend g_backend = detect_backend();

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const Ops& ops_for(Backend b) {
  if (!backend_supported(b)) {
    throw Error(Errc::InvalidConfig,
                std::string("kernel backend not supported on this machine: ") +
                    backend_name(b));
  }
#if (defined(__x86_64__) || defined(_M_X64)) && defined(INTENTNET_HAVE_AVX2)
  if (b == Backend::Avx2) {
    return avx2_ops;
  }
#endif
  return scalar_ops;
}

const Ops& ops() { return ops_for(g_backend); }

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
  if (!backend_supported(b)) {
    throw Error(Errc::InvalidConfig,
                std::string("kernel backend not supported on this machine: ") +
                    backend_name(b));
  }
  g_backend = b;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace intentnet::kernels
