#include <cmath>
#include <cstddef>

#include "intentnet/kernels.hpp"

// Portable reference kernels. Reductions run strictly left to right so this
// backend doubles as the ground truth in equivalence tests.

namespace intentnet::kernels {
namespace {

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        acc += ai[t] * bj[t];
      }
      c[i * n + j] = acc;
    }
  }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      ci[j] = 0.0;
    }
    const double* ai = a + i * k;
    for (std::size_t t = 0; t < k; ++t) {
      const double av = ai[t];
      const double* bt = b + t * n;
      for (std::size_t j = 0; j < n; ++j) {
        ci[j] += av * bt[j];
      }
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      ci[j] = 0.0;
    }
  }
  for (std::size_t t = 0; t < k; ++t) {
    const double* at = a + t * m;
    const double* bt = b + t * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = at[i];
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        ci[j] += av * bt[j];
      }
    }
  }
}

void add_bias_rows(std::size_t rows, std::size_t cols, double* m,
                   const double* bias) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = m + r * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      row[j] += bias[j];
    }
  }
}

void col_sum(std::size_t rows, std::size_t cols, const double* m,
             double* out) {
  for (std::size_t j = 0; j < cols; ++j) {
    out[j] = 0.0;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = m + r * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      out[j] += row[j];
    }
  }
}

void relu(std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x[i] > 0.0 ? x[i] : 0.0;
  }
}

void relu_grad(std::size_t n, const double* z, const double* dy, double* dx) {
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = z[i] > 0.0 ? dy[i] : 0.0;
  }
}

void sigmoid_grad(std::size_t n, const double* y, const double* dy,
                  double* dx) {
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = (dy[i] * y[i]) * (1.0 - y[i]);
  }
}

double sq_diff_sum(std::size_t n, const double* a, const double* b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void rmsprop_update(std::size_t n, double* p, const double* g, double* acc,
                    double lr, double rho, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = rho * acc[i] + (1.0 - rho) * (g[i] * g[i]);
    p[i] -= (lr * g[i]) / (std::sqrt(acc[i]) + eps);
  }
}

void adam_update(std::size_t n, double* p, const double* g, double* m,
                 double* v, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
  // bc1 = 1 - beta1^t and bc2 = 1 - beta2^t, precomputed by the caller.
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i]);
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= (lr * mhat) / (std::sqrt(vhat) + eps);
  }
}

void adadelta_update(std::size_t n, double* p, const double* g, double* acc_g,
                     double* acc_dx, double rho, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    acc_g[i] = rho * acc_g[i] + (1.0 - rho) * (g[i] * g[i]);
    const double step =
        -(std::sqrt(acc_dx[i] + eps) / std::sqrt(acc_g[i] + eps)) * g[i];
    acc_dx[i] = rho * acc_dx[i] + (1.0 - rho) * (step * step);
    p[i] += step;
  }
}

}  // namespace

const Ops scalar_ops = {
    gemm_nt,      gemm_nn,      gemm_tn,        add_bias_rows,
    col_sum,      relu,         relu_grad,      sigmoid_grad,
    sq_diff_sum,  rmsprop_update, adam_update,  adadelta_update,
};

}  // namespace intentnet::kernels
