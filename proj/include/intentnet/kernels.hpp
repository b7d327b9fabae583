#pragma once

#include <cstddef>
#include <string>

namespace intentnet::kernels {

// The numeric hot loops live behind this table of function pointers. Two
// implementations exist: a portable scalar reference (strict left-to-right
// accumulation, no reordering) and an AVX2/FMA variant for x86-64. The
// backend is picked once at startup from CPUID and can be overridden for
// tests or benchmarking.
//
// Elementwise kernels are written so both backends evaluate the exact same
// IEEE expression tree and produce bitwise-identical results. The matrix
// products split the reduction across vector lanes, so they agree with the
// scalar reference only up to rounding; equivalence tests pin the tolerance.
enum class Backend { Scalar, Avx2 };

struct Ops {
  // C (m x n) = A (m x k) * B^T, with B stored row-major as (n x k).
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, const double* b, double* c);
  // C (m x n) = A (m x k) * B (k x n).
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, const double* b, double* c);
  // C (m x n) = A^T * B, with A stored row-major as (k x m), B as (k x n).
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, const double* b, double* c);

  // M (rows x cols) += bias broadcast across rows.
  void (*add_bias_rows)(std::size_t rows, std::size_t cols, double* m,
                        const double* bias);
  // out[j] = sum over rows of M[.][j].
  void (*col_sum)(std::size_t rows, std::size_t cols, const double* m,
                  double* out);

  void (*relu)(std::size_t n, const double* x, double* y);
  // dx[i] = dy[i] if z[i] > 0 else 0 (z is the pre-activation).
  void (*relu_grad)(std::size_t n, const double* z, const double* dy,
                    double* dx);
  // dx[i] = dy[i] * y[i] * (1 - y[i]) (y is the sigmoid output).
  void (*sigmoid_grad)(std::size_t n, const double* y, const double* dy,
                       double* dx);

  // sum of (a[i] - b[i])^2.
  double (*sq_diff_sum)(std::size_t n, const double* a, const double* b);

  // In-place parameter updates; see optimizer docs in nn.hpp for the math.
  void (*rmsprop_update)(std::size_t n, double* p, const double* g,
                         double* acc, double lr, double rho, double eps);
  void (*adam_update)(std::size_t n, double* p, const double* g, double* m,
                      double* v, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2);
  void (*adadelta_update)(std::size_t n, double* p, const double* g,
                          double* acc_g, double* acc_dx, double rho,
                          double eps);
};

extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif

bool backend_supported(Backend b);

// Table for an explicit backend (throws InvalidConfig when unsupported).
const Ops& ops_for(Backend b);

// Active table. Defaults to the best supported backend; honours the
// INTENTNET_BACKEND environment variable ("scalar" / "avx2") at first use.
const Ops& ops();
Backend active_backend();
void force_backend(Backend b);

const char* backend_name(Backend b);

}  // namespace intentnet::kernels
