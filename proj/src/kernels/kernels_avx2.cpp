// AVX2/FMA backend. Built as its own translation unit with -mavx2 -mfma and
// only ever called after a CPUID check, so no AVX instruction can leak into
// code that runs on older machines.
//
// Elementwise kernels reproduce the scalar expression trees operation for
// operation (mul/add/div/sqrt only, no FMA) and are bitwise-equal to the
// scalar backend. The matrix products and sq_diff_sum split their reductions
// across lanes and use FMA, so they match only to rounding.

#if defined(INTENTNET_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "intentnet/kernels.hpp"

namespace intentnet::kernels {
namespace {

inline double hsum4(__m256d v) {
  // Fixed reduction order: (lane0 + lane2) + (lane1 + lane3).
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  const __m128d sh = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, sh));
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  const std::size_t k4 = k & ~std::size_t(3);
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t t = 0; t < k4; t += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(ai + t),
                              _mm256_loadu_pd(bj + t), acc);
      }
      double sum = hsum4(acc);
      for (std::size_t t = k4; t < k; ++t) {
        sum += ai[t] * bj[t];
      }
      c[i * n + j] = sum;
    }
  }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      ci[j] = 0.0;
    }
    const double* ai = a + i * k;
    for (std::size_t t = 0; t < k; ++t) {
      const __m256d av = _mm256_set1_pd(ai[t]);
      const double* bt = b + t * n;
      for (std::size_t j = 0; j < n4; j += 4) {
        const __m256d cv = _mm256_loadu_pd(ci + j);
        _mm256_storeu_pd(ci + j,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(bt + j), cv));
      }
      const double as = ai[t];
      for (std::size_t j = n4; j < n; ++j) {
        ci[j] = std::fma(as, bt[j], ci[j]);
      }
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  for (std::size_t i = 0; i < m * n; ++i) {
    c[i] = 0.0;
  }
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t t = 0; t < k; ++t) {
    const double* at = a + t * m;
    const double* bt = b + t * n;
    for (std::size_t i = 0; i < m; ++i) {
      const __m256d av = _mm256_set1_pd(at[i]);
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n4; j += 4) {
        const __m256d cv = _mm256_loadu_pd(ci + j);
        _mm256_storeu_pd(ci + j,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(bt + j), cv));
      }
      const double as = at[i];
      for (std::size_t j = n4; j < n; ++j) {
        ci[j] = std::fma(as, bt[j], ci[j]);
      }
    }
  }
}

void add_bias_rows(std::size_t rows, std::size_t cols, double* m,
                   const double* bias) {
  const std::size_t c4 = cols & ~std::size_t(3);
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = m + r * cols;
    for (std::size_t j = 0; j < c4; j += 4) {
      _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j),
                                              _mm256_loadu_pd(bias + j)));
    }
    for (std::size_t j = c4; j < cols; ++j) {
      row[j] += bias[j];
    }
  }
}

void col_sum(std::size_t rows, std::size_t cols, const double* m,
             double* out) {
  for (std::size_t j = 0; j < cols; ++j) {
    out[j] = 0.0;
  }
  const std::size_t c4 = cols & ~std::size_t(3);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = m + r * cols;
    for (std::size_t j = 0; j < c4; j += 4) {
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j),
                                              _mm256_loadu_pd(row + j)));
    }
    for (std::size_t j = c4; j < cols; ++j) {
      out[j] += row[j];
    }
  }
}

void relu(std::size_t n, const double* x, double* y) {
  const __m256d zero = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  }
  for (std::size_t i = n4; i < n; ++i) {
    y[i] = x[i] > 0.0 ? x[i] : 0.0;
  }
}

void relu_grad(std::size_t n, const double* z, const double* dy, double* dx) {
  const __m256d zero = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(z + i), zero,
                                       _CMP_GT_OQ);
    _mm256_storeu_pd(dx + i, _mm256_and_pd(_mm256_loadu_pd(dy + i), mask));
  }
  for (std::size_t i = n4; i < n; ++i) {
    dx[i] = z[i] > 0.0 ? dy[i] : 0.0;
  }
}

void sigmoid_grad(std::size_t n, const double* y, const double* dy,
                  double* dx) {
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d yv = _mm256_loadu_pd(y + i);
    const __m256d dyv = _mm256_loadu_pd(dy + i);
    _mm256_storeu_pd(
        dx + i,
        _mm256_mul_pd(_mm256_mul_pd(dyv, yv), _mm256_sub_pd(one, yv)));
  }
  for (std::size_t i = n4; i < n; ++i) {
    dx[i] = (dy[i] * y[i]) * (1.0 - y[i]);
  }
}

double sq_diff_sum(std::size_t n, const double* a, const double* b) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                    _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = hsum4(acc);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void rmsprop_update(std::size_t n, double* p, const double* g, double* acc,
                    double lr, double rho, double eps) {
  const __m256d vrho = _mm256_set1_pd(rho);
  const __m256d vomr = _mm256_set1_pd(1.0 - rho);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    const __m256d av = _mm256_add_pd(
        _mm256_mul_pd(vrho, _mm256_loadu_pd(acc + i)),
        _mm256_mul_pd(vomr, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(acc + i, av);
    const __m256d step = _mm256_div_pd(
        _mm256_mul_pd(vlr, gv), _mm256_add_pd(_mm256_sqrt_pd(av), veps));
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  for (std::size_t i = n4; i < n; ++i) {
    acc[i] = rho * acc[i] + (1.0 - rho) * (g[i] * g[i]);
    p[i] -= (lr * g[i]) / (std::sqrt(acc[i]) + eps);
  }
}

void adam_update(std::size_t n, double* p, const double* g, double* m,
                 double* v, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
  const __m256d vb1 = _mm256_set1_pd(beta1);
  const __m256d vomb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2);
  const __m256d vomb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vbc1 = _mm256_set1_pd(bc1);
  const __m256d vbc2 = _mm256_set1_pd(bc2);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    const __m256d mv = _mm256_add_pd(
        _mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(vomb1, gv));
    const __m256d vv = _mm256_add_pd(
        _mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
        _mm256_mul_pd(vomb2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_div_pd(mv, vbc1);
    const __m256d vhat = _mm256_div_pd(vv, vbc2);
    const __m256d step = _mm256_div_pd(
        _mm256_mul_pd(vlr, mhat), _mm256_add_pd(_mm256_sqrt_pd(vhat), veps));
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  for (std::size_t i = n4; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i]);
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= (lr * mhat) / (std::sqrt(vhat) + eps);
  }
}

void adadelta_update(std::size_t n, double* p, const double* g, double* acc_g,
                     double* acc_dx, double rho, double eps) {
  const __m256d vrho = _mm256_set1_pd(rho);
  const __m256d vomr = _mm256_set1_pd(1.0 - rho);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    const __m256d ag = _mm256_add_pd(
        _mm256_mul_pd(vrho, _mm256_loadu_pd(acc_g + i)),
        _mm256_mul_pd(vomr, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(acc_g + i, ag);
    const __m256d ratio = _mm256_div_pd(
        _mm256_sqrt_pd(_mm256_add_pd(_mm256_loadu_pd(acc_dx + i), veps)),
        _mm256_sqrt_pd(_mm256_add_pd(ag, veps)));
    const __m256d step = _mm256_xor_pd(_mm256_mul_pd(ratio, gv), sign);
    _mm256_storeu_pd(acc_dx + i,
                     _mm256_add_pd(_mm256_mul_pd(vrho,
                                                 _mm256_loadu_pd(acc_dx + i)),
                                   _mm256_mul_pd(vomr,
                                                 _mm256_mul_pd(step, step))));
    _mm256_storeu_pd(p + i, _mm256_add_pd(_mm256_loadu_pd(p + i), step));
  }
  for (std::size_t i = n4; i < n; ++i) {
    acc_g[i] = rho * acc_g[i] + (1.0 - rho) * (g[i] * g[i]);
    const double step =
        -(std::sqrt(acc_dx[i] + eps) / std::sqrt(acc_g[i] + eps)) * g[i];
    acc_dx[i] = rho * acc_dx[i] + (1.0 - rho) * (step * step);
    p[i] += step;
  }
}

}  // namespace

const Ops avx2_ops = {
    gemm_nt,      gemm_nn,      gemm_tn,        add_bias_rows,
    col_sum,      relu,         relu_grad,      sigmoid_grad,
    sq_diff_sum,  rmsprop_update, adam_update,  adadelta_update,
};

}  // namespace intentnet::kernels

#endif  // AVX2 build enabled on x86-64
