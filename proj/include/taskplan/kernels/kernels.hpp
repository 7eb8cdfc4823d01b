#pragma once

#include <cstdint>

#include "taskplan/kernels/ref.hpp"

// Dispatched float kernels. The implementation picks AVX2+FMA paths at
// runtime when the CPU supports them; TASKPLAN_NO_SIMD=1 forces the scalar
// reference. Double overloads always run the reference path — they exist for
// the gradient-check instantiation, not for speed.

namespace taskplan::kern {

struct CpuCaps {
  bool avx2 = false;
  bool fma = false;
};

const CpuCaps& cpu_caps();

// True when the AVX2 path is active (caps present and not disabled by env).
bool simd_enabled();

// Test hook: force scalar (true) or restore auto-detection (false).
void force_scalar(bool on);

// C = alpha * op(A) * op(B) + beta * C, row-major, TT unsupported.
void sgemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha,
           const float* a, int lda, const float* b, int ldb, float beta,
           float* c, int ldc);

void saxpy(int n, float alpha, const float* x, float* y);
void sscale(int n, float alpha, float* x);
void svadd(int n, const float* a, const float* b, float* out);
void svmul(int n, const float* a, const float* b, float* out);
float svsum(int n, const float* x);
float svdot(int n, const float* a, const float* b);
void srelu(int n, const float* x, float* y);
void srelu_backward(int n, const float* dy, const float* x, float* dx);
void ssigmoid(int n, const float* x, float* y);
float sbce_logits_sum(int n, const float* z, const float* y);
void sbce_logits_backward(int n, const float* z, const float* y, float scale,
                          float* dz);
void sadam_step(int n, float* w, const float* g, float* m, float* v, float lr,
                float beta1, float beta2, float eps, float bias1, float bias2);

// Scalar-type-generic wrappers: float goes through the dispatcher, any other
// scalar runs the reference directly.
template <class T>
void gemm(bool ta, bool tb, int m, int n, int k, T alpha, const T* a, int lda,
          const T* b, int ldb, T beta, T* c, int ldc) {
  for (int i = 0; i < m; ++i) ref::scale(n, beta, c + int64_t(i) * ldc);
  ref::gemm_acc(ta, tb, m, n, k, alpha, a, lda, b, ldb, c, ldc);
}
template <>
inline void gemm<float>(bool ta, bool tb, int m, int n, int k, float alpha,
                        const float* a, int lda, const float* b, int ldb,
                        float beta, float* c, int ldc) {
  sgemm(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <class T>
void axpy(int n, T a, const T* x, T* y) { ref::axpy(n, a, x, y); }
template <>
inline void axpy<float>(int n, float a, const float* x, float* y) {
  saxpy(n, a, x, y);
}

template <class T>
void relu(int n, const T* x, T* y) { ref::relu(n, x, y); }
template <>
inline void relu<float>(int n, const float* x, float* y) { srelu(n, x, y); }

template <class T>
void relu_backward(int n, const T* dy, const T* x, T* dx) {
  ref::relu_backward(n, dy, x, dx);
}
template <>
inline void relu_backward<float>(int n, const float* dy, const float* x,
                                 float* dx) {
  srelu_backward(n, dy, x, dx);
}

template <class T>
void sigmoid(int n, const T* x, T* y) { ref::sigmoid(n, x, y); }
template <>
inline void sigmoid<float>(int n, const float* x, float* y) {
  ssigmoid(n, x, y);
}

template <class T>
T bce_logits_sum(int n, const T* z, const T* y) {
  return ref::bce_logits_sum(n, z, y);
}
template <>
inline float bce_logits_sum<float>(int n, const float* z, const float* y) {
  return sbce_logits_sum(n, z, y);
}

template <class T>
void bce_logits_backward(int n, const T* z, const T* y, T scale, T* dz) {
  ref::bce_logits_backward(n, z, y, scale, dz);
}
template <>
inline void bce_logits_backward<float>(int n, const float* z, const float* y,
                                       float scale, float* dz) {
  sbce_logits_backward(n, z, y, scale, dz);
}

template <class T>
void adam_step(int n, T* w, const T* g, T* m, T* v, T lr, T b1, T b2, T eps,
               T bc1, T bc2) {
  ref::adam_step(n, w, g, m, v, lr, b1, b2, eps, bc1, bc2);
}
template <>
inline void adam_step<float>(int n, float* w, const float* g, float* m,
                             float* v, float lr, float b1, float b2, float eps,
                             float bc1, float bc2) {
  sadam_step(n, w, g, m, v, lr, b1, b2, eps, bc1, bc2);
}

}  // namespace taskplan::kern
