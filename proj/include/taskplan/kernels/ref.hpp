#pragma once

#include <cmath>
#include <cstdint>

namespace taskplan::kern::ref {

// Reference kernels. Templated on scalar so the double-precision
// instantiation used by the finite-difference checks shares one code path.
// All gemm kernels accumulate alpha*op(A)*op(B) into C; the caller applies
// beta beforehand.

template <class T>
void gemm_acc(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
              const T* a, int lda, const T* b, int ldb, T* c, int ldc) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      T acc = T(0);
      for (int p = 0; p < k; ++p) {
        T av = trans_a ? a[p * lda + i] : a[i * lda + p];
        T bv = trans_b ? b[j * ldb + p] : b[p * ldb + j];
        acc += av * bv;
      }
      c[i * ldc + j] += alpha * acc;
    }
  }
}

template <class T>
void scale(int n, T alpha, T* x) {
  if (alpha == T(1)) return;
  if (alpha == T(0)) {
    for (int i = 0; i < n; ++i) x[i] = T(0);
  } else {
    for (int i = 0; i < n; ++i) x[i] *= alpha;
  }
}

template <class T>
void axpy(int n, T alpha, const T* x, T* y) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
void vadd(int n, const T* a, const T* b, T* out) {
  for (int i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

template <class T>
void vmul(int n, const T* a, const T* b, T* out) {
  for (int i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

template <class T>
T vsum(int n, const T* x) {
  T s = T(0);
  for (int i = 0; i < n; ++i) s += x[i];
  return s;
}

template <class T>
T vdot(int n, const T* a, const T* b) {
  T s = T(0);
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <class T>
void relu(int n, const T* x, T* y) {
  for (int i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <class T>
void relu_backward(int n, const T* dy, const T* x, T* dx) {
  for (int i = 0; i < n; ++i) dx[i] = x[i] > T(0) ? dy[i] : T(0);
}

template <class T>
void sigmoid(int n, const T* x, T* y) {
  for (int i = 0; i < n; ++i) {
    T v = x[i];
    y[i] = v >= T(0) ? T(1) / (T(1) + std::exp(-v))
                     : std::exp(v) / (T(1) + std::exp(v));
  }
}

// Numerically stable binary cross entropy on logits:
//   loss_i = max(z,0) - z*y + log(1 + exp(-|z|))
template <class T>
T bce_logits_sum(int n, const T* z, const T* y) {
  T s = T(0);
  for (int i = 0; i < n; ++i) {
    T zi = z[i];
    T m = zi > T(0) ? zi : T(0);
    s += m - zi * y[i] + std::log1p(std::exp(-std::abs(zi)));
  }
  return s;
}

// dL/dz = scale * (sigmoid(z) - y), accumulated into dz.
template <class T>
void bce_logits_backward(int n, const T* z, const T* y, T scale, T* dz) {
  for (int i = 0; i < n; ++i) {
    T zi = z[i];
    T s = zi >= T(0) ? T(1) / (T(1) + std::exp(-zi))
                     : std::exp(zi) / (T(1) + std::exp(zi));
    dz[i] += scale * (s - y[i]);
  }
}

template <class T>
void adam_step(int n, T* w, const T* g, T* m, T* v, T lr, T beta1, T beta2,
               T eps, T bias1, T bias2) {
  for (int i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (T(1) - beta1) * g[i];
    v[i] = beta2 * v[i] + (T(1) - beta2) * g[i] * g[i];
    T mhat = m[i] / bias1;
    T vhat = v[i] / bias2;
    w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace taskplan::kern::ref
