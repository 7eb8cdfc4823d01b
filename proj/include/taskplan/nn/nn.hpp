#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "taskplan/core/rng.hpp"
#include "taskplan/kernels/kernels.hpp"

// Minimal layer library with hand-written backprop. Every layer is templated
// on the scalar so the double instantiation shares one code path with the
// float one; gradient checks run the exact arithmetic they certify. Layers
// fix their geometry at init and keep whatever activations backward needs, so
// the usage contract is strictly forward-then-backward on one in-flight batch.

namespace taskplan::nn {

template <class T>
struct Param {
  std::string name;
  std::vector<T> w;
  std::vector<T> g;

  void init(std::string n, size_t count) {
    name = std::move(n);
    w.assign(count, T(0));
    g.assign(count, T(0));
  }
  int64_t size() const { return int64_t(w.size()); }
};

template <class T>
using ParamList = std::vector<Param<T>*>;

template <class T>
void zero_grad(ParamList<T>& ps) {
  for (Param<T>* p : ps)
    std::fill(p->g.begin(), p->g.end(), T(0));
}

template <class T>
int64_t param_count(const ParamList<T>& ps) {
  int64_t n = 0;
  for (const Param<T>* p : ps) n += p->size();
  return n;
}

template <class T>
void fill_uniform(Pcg32& rng, std::vector<T>& w, T bound) {
  for (T& v : w) v = T((rng.uniform() * 2.0 - 1.0)) * bound;
}

// Kaiming-uniform for ReLU fan-in; callers pass fan_in = inputs per output.
template <class T>
void kaiming_init(Pcg32& rng, std::vector<T>& w, int fan_in) {
  fill_uniform(rng, w, T(std::sqrt(6.0 / double(fan_in))));
}

// ---------------------------------------------------------------------------
// im2col / col2im. cols is [C*kh*kw, OH*OW]; output position (oh,ow) reads
// input pixel (oh*s - p + i, ow*s - p + j). Out-of-bounds taps read zero in
// im2col and are dropped by col2im_acc, which accumulates into x.

template <class T>
void im2col(const T* x, int c, int h, int w, int kh, int kw, int s, int p,
            int oh, int ow, T* cols) {
  const int ohw = oh * ow;
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < kh; ++i) {
      for (int j = 0; j < kw; ++j) {
        T* row = cols + (int64_t(ch) * kh * kw + i * kw + j) * ohw;
        for (int r = 0; r < oh; ++r) {
          const int ir = r * s - p + i;
          if (ir < 0 || ir >= h) {
            for (int q = 0; q < ow; ++q) row[r * ow + q] = T(0);
            continue;
          }
          const T* src = x + (int64_t(ch) * h + ir) * w;
          for (int q = 0; q < ow; ++q) {
            const int ic = q * s - p + j;
            row[r * ow + q] = (ic < 0 || ic >= w) ? T(0) : src[ic];
          }
        }
      }
    }
  }
}

template <class T>
void col2im_acc(const T* cols, int c, int h, int w, int kh, int kw, int s,
                int p, int oh, int ow, T* x) {
  const int ohw = oh * ow;
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < kh; ++i) {
      for (int j = 0; j < kw; ++j) {
        const T* row = cols + (int64_t(ch) * kh * kw + i * kw + j) * ohw;
        for (int r = 0; r < oh; ++r) {
          const int ir = r * s - p + i;
          if (ir < 0 || ir >= h) continue;
          T* dst = x + (int64_t(ch) * h + ir) * w;
          for (int q = 0; q < ow; ++q) {
            const int ic = q * s - p + j;
            if (ic >= 0 && ic < w) dst[ic] += row[r * ow + q];
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------

template <class T>
struct Linear {
  int in = 0, out = 0;
  bool frozen = false;  // frozen layers skip weight-gradient work in backward
  Param<T> w;  // [out, in]
  Param<T> b;  // [out]
  std::vector<T> x_;
  int n_ = 0;

  void init(const std::string& name, int in_dim, int out_dim, Pcg32& rng,
            bool zero_init = false) {
    in = in_dim;
    out = out_dim;
    w.init(name + ".w", size_t(out) * size_t(in));
    b.init(name + ".b", size_t(out));
    if (!zero_init) kaiming_init(rng, w.w, in);
  }
  void collect(ParamList<T>& ps) {
    ps.push_back(&w);
    ps.push_back(&b);
  }

  // x: [n, in] -> y: [n, out]
  void forward(const T* x, int n, T* y) {
    kern::gemm<T>(false, true, n, out, in, T(1), x, in, w.w.data(), in, T(0),
                  y, out);
    for (int i = 0; i < n; ++i)
      kern::axpy<T>(out, T(1), b.w.data(), y + int64_t(i) * out);
    if (!frozen) x_.assign(x, x + int64_t(n) * in);
    n_ = n;
  }
  // dy: [n_, out]; accumulates into dx when acc, else overwrites.
  void backward(const T* dy, T* dx, bool acc = false) {
    if (!frozen) {
      kern::gemm<T>(true, false, out, in, n_, T(1), dy, out, x_.data(), in,
                    T(1), w.g.data(), in);
      for (int i = 0; i < n_; ++i)
        kern::axpy<T>(out, T(1), dy + int64_t(i) * out, b.g.data());
    }
    if (dx)
      kern::gemm<T>(false, false, n_, in, out, T(1), dy, out, w.w.data(), in,
                    acc ? T(1) : T(0), dx, in);
  }
};

template <class T>
struct Relu {
  std::vector<T> x_;

  void forward(const T* x, int64_t n, T* y) {
    x_.assign(x, x + n);
    kern::relu<T>(int(n), x, y);
  }
  void backward(const T* dy, T* dx) {
    kern::relu_backward<T>(int(x_.size()), dy, x_.data(), dx);
  }
};

template <class T>
struct Conv2d {
  int cin = 0, cout = 0, k = 0, stride = 1, pad = 0;
  bool frozen = false;
  int ih = 0, iw = 0, oh = 0, ow = 0;
  Param<T> w;  // [cout, cin*k*k]
  Param<T> b;  // [cout]
  std::vector<T> x_;
  std::vector<T> cols_;
  int n_ = 0;

  void init(const std::string& name, int cin_, int cout_, int k_, int s_,
            int p_, int ih_, int iw_, Pcg32& rng) {
    cin = cin_; cout = cout_; k = k_; stride = s_; pad = p_;
    ih = ih_; iw = iw_;
    oh = (ih + 2 * pad - k) / stride + 1;
    ow = (iw + 2 * pad - k) / stride + 1;
    w.init(name + ".w", size_t(cout) * size_t(cin) * size_t(k) * size_t(k));
    b.init(name + ".b", size_t(cout));
    kaiming_init(rng, w.w, cin * k * k);
    cols_.assign(size_t(cin) * k * k * size_t(oh) * ow, T(0));
  }
  void collect(ParamList<T>& ps) {
    ps.push_back(&w);
    ps.push_back(&b);
  }

  // x: [n, cin, ih, iw] -> y: [n, cout, oh, ow]
  void forward(const T* x, int n, T* y) {
    const int kk = cin * k * k, ohw = oh * ow;
    for (int i = 0; i < n; ++i) {
      im2col(x + int64_t(i) * cin * ih * iw, cin, ih, iw, k, k, stride, pad,
             oh, ow, cols_.data());
      T* yi = y + int64_t(i) * cout * ohw;
      kern::gemm<T>(false, false, cout, ohw, kk, T(1), w.w.data(), kk,
                    cols_.data(), ohw, T(0), yi, ohw);
      for (int o = 0; o < cout; ++o)
        for (int q = 0; q < ohw; ++q) yi[int64_t(o) * ohw + q] += b.w[size_t(o)];
    }
    if (!frozen) x_.assign(x, x + int64_t(n) * cin * ih * iw);
    n_ = n;
  }
  void backward(const T* dy, T* dx) {
    const int kk = cin * k * k, ohw = oh * ow;
    std::vector<T> dcols(dx ? cols_.size() : 0);
    if (dx) std::fill(dx, dx + int64_t(n_) * cin * ih * iw, T(0));
    for (int i = 0; i < n_; ++i) {
      const T* dyi = dy + int64_t(i) * cout * ohw;
      if (!frozen) {
        im2col(x_.data() + int64_t(i) * cin * ih * iw, cin, ih, iw, k, k,
               stride, pad, oh, ow, cols_.data());
        kern::gemm<T>(false, true, cout, kk, ohw, T(1), dyi, ohw, cols_.data(),
                      ohw, T(1), w.g.data(), kk);
        for (int o = 0; o < cout; ++o)
          for (int q = 0; q < ohw; ++q)
            b.g[size_t(o)] += dyi[int64_t(o) * ohw + q];
      }
      if (dx) {
        kern::gemm<T>(true, false, kk, ohw, cout, T(1), w.w.data(), kk, dyi,
                      ohw, T(0), dcols.data(), ohw);
        col2im_acc(dcols.data(), cin, ih, iw, k, k, stride, pad, oh, ow,
                   dx + int64_t(i) * cin * ih * iw);
      }
    }
  }
};

// Transposed convolution; forward is the adjoint of a Conv2d with the same
// (k, stride, pad), so oh = (ih-1)*stride - 2*pad + k.
template <class T>
struct ConvT2d {
  int cin = 0, cout = 0, k = 0, stride = 1, pad = 0;
  bool frozen = false;
  int ih = 0, iw = 0, oh = 0, ow = 0;
  Param<T> w;  // [cin, cout*k*k]
  Param<T> b;  // [cout]
  std::vector<T> x_;
  std::vector<T> cols_;
  int n_ = 0;

  void init(const std::string& name, int cin_, int cout_, int k_, int s_,
            int p_, int ih_, int iw_, Pcg32& rng) {
    cin = cin_; cout = cout_; k = k_; stride = s_; pad = p_;
    ih = ih_; iw = iw_;
    oh = (ih - 1) * stride - 2 * pad + k;
    ow = (iw - 1) * stride - 2 * pad + k;
    w.init(name + ".w", size_t(cin) * size_t(cout) * size_t(k) * size_t(k));
    b.init(name + ".b", size_t(cout));
    kaiming_init(rng, w.w, cin * k * k);
    cols_.assign(size_t(cout) * k * k * size_t(ih) * iw, T(0));
  }
  void collect(ParamList<T>& ps) {
    ps.push_back(&w);
    ps.push_back(&b);
  }

  // x: [n, cin, ih, iw] -> y: [n, cout, oh, ow]
  void forward(const T* x, int n, T* y) {
    const int kk = cout * k * k, ihw = ih * iw, ohw = oh * ow;
    for (int i = 0; i < n; ++i) {
      const T* xi = x + int64_t(i) * cin * ihw;
      kern::gemm<T>(true, false, kk, ihw, cin, T(1), w.w.data(), kk, xi, ihw,
                    T(0), cols_.data(), ihw);
      T* yi = y + int64_t(i) * cout * ohw;
      std::fill(yi, yi + int64_t(cout) * ohw, T(0));
      col2im_acc(cols_.data(), cout, oh, ow, k, k, stride, pad, ih, iw, yi);
      for (int o = 0; o < cout; ++o)
        for (int q = 0; q < ohw; ++q) yi[int64_t(o) * ohw + q] += b.w[size_t(o)];
    }
    if (!frozen) x_.assign(x, x + int64_t(n) * cin * ihw);
    n_ = n;
  }
  void backward(const T* dy, T* dx) {
    const int kk = cout * k * k, ihw = ih * iw, ohw = oh * ow;
    std::vector<T> dcols(cols_.size());
    for (int i = 0; i < n_; ++i) {
      const T* dyi = dy + int64_t(i) * cout * ohw;
      im2col(dyi, cout, oh, ow, k, k, stride, pad, ih, iw, dcols.data());
      if (!frozen) {
        kern::gemm<T>(false, true, cin, kk, ihw, T(1),
                      x_.data() + int64_t(i) * cin * ihw, ihw, dcols.data(),
                      ihw, T(1), w.g.data(), kk);
        for (int o = 0; o < cout; ++o)
          for (int q = 0; q < ohw; ++q)
            b.g[size_t(o)] += dyi[int64_t(o) * ohw + q];
      }
      if (dx)
        kern::gemm<T>(false, false, cin, ihw, kk, T(1), w.w.data(), kk,
                      dcols.data(), ihw, T(0), dx + int64_t(i) * cin * ihw,
                      ihw);
    }
  }
};

template <class T>
struct LayerNorm {
  int d = 0;
  T eps = T(1e-5);
  Param<T> g;  // gain
  Param<T> b;  // bias
  std::vector<T> xhat_;
  std::vector<T> istd_;
  int n_ = 0;

  void init(const std::string& name, int dim) {
    d = dim;
    g.init(name + ".g", size_t(d));
    b.init(name + ".b", size_t(d));
    std::fill(g.w.begin(), g.w.end(), T(1));
  }
  void collect(ParamList<T>& ps) {
    ps.push_back(&g);
    ps.push_back(&b);
  }

  // x: [n, d] -> y: [n, d], normalized per row.
  void forward(const T* x, int n, T* y) {
    n_ = n;
    xhat_.resize(size_t(n) * d);
    istd_.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
      const T* xi = x + int64_t(i) * d;
      T mu = T(0);
      for (int j = 0; j < d; ++j) mu += xi[j];
      mu /= T(d);
      T var = T(0);
      for (int j = 0; j < d; ++j) var += (xi[j] - mu) * (xi[j] - mu);
      var /= T(d);
      const T is = T(1) / std::sqrt(var + eps);
      istd_[size_t(i)] = is;
      T* xh = xhat_.data() + int64_t(i) * d;
      T* yi = y + int64_t(i) * d;
      for (int j = 0; j < d; ++j) {
        xh[j] = (xi[j] - mu) * is;
        yi[j] = g.w[size_t(j)] * xh[j] + b.w[size_t(j)];
      }
    }
  }
  void backward(const T* dy, T* dx) {
    for (int i = 0; i < n_; ++i) {
      const T* dyi = dy + int64_t(i) * d;
      const T* xh = xhat_.data() + int64_t(i) * d;
      T sum_dxh = T(0), sum_dxh_xh = T(0);
      for (int j = 0; j < d; ++j) {
        const T dxh = dyi[j] * g.w[size_t(j)];
        sum_dxh += dxh;
        sum_dxh_xh += dxh * xh[j];
        g.g[size_t(j)] += dyi[j] * xh[j];
        b.g[size_t(j)] += dyi[j];
      }
      T* dxi = dx + int64_t(i) * d;
      const T is = istd_[size_t(i)];
      for (int j = 0; j < d; ++j) {
        const T dxh = dyi[j] * g.w[size_t(j)];
        dxi[j] = is * (dxh - sum_dxh / T(d) - xh[j] * sum_dxh_xh / T(d));
      }
    }
  }
};

// Multi-head self-attention over fixed-length token sets. No positional
// terms: attention sees tokens as a set, which is exactly what the object
// roster needs.
template <class T>
struct Attention {
  int d = 0, nh = 0, dh = 0, tk = 0;
  Linear<T> wq, wk, wv, wo;
  std::vector<T> q_, k_, v_, p_, ctx_;
  int n_ = 0;

  void init(const std::string& name, int dim, int heads, int tokens,
            Pcg32& rng) {
    d = dim;
    nh = heads;
    dh = dim / heads;
    tk = tokens;
    if (dh * nh != d) throw std::invalid_argument("attention: d % heads != 0");
    wq.init(name + ".q", d, d, rng);
    wk.init(name + ".k", d, d, rng);
    wv.init(name + ".v", d, d, rng);
    wo.init(name + ".o", d, d, rng);
  }
  void collect(ParamList<T>& ps) {
    wq.collect(ps);
    wk.collect(ps);
    wv.collect(ps);
    wo.collect(ps);
  }

  // x: [n, tk, d] -> y: [n, tk, d]
  void forward(const T* x, int n, T* y) {
    n_ = n;
    const int rows = n * tk;
    q_.resize(size_t(rows) * d);
    k_.resize(size_t(rows) * d);
    v_.resize(size_t(rows) * d);
    ctx_.resize(size_t(rows) * d);
    p_.resize(size_t(n) * nh * tk * tk);
    wq.forward(x, rows, q_.data());
    wk.forward(x, rows, k_.data());
    wv.forward(x, rows, v_.data());
    const T scale = T(1) / std::sqrt(T(dh));
    std::vector<T> scores(size_t(tk) * tk);
    for (int s = 0; s < n; ++s) {
      for (int h = 0; h < nh; ++h) {
        const T* qh = q_.data() + int64_t(s) * tk * d + h * dh;
        const T* kh = k_.data() + int64_t(s) * tk * d + h * dh;
        const T* vh = v_.data() + int64_t(s) * tk * d + h * dh;
        kern::gemm<T>(false, true, tk, tk, dh, scale, qh, d, kh, d, T(0),
                      scores.data(), tk);
        T* p = p_.data() + (int64_t(s) * nh + h) * tk * tk;
        for (int r = 0; r < tk; ++r) {
          T* row = scores.data() + int64_t(r) * tk;
          T mx = row[0];
          for (int c = 1; c < tk; ++c) mx = std::max(mx, row[c]);
          T sum = T(0);
          for (int c = 0; c < tk; ++c) {
            row[c] = std::exp(row[c] - mx);
            sum += row[c];
          }
          for (int c = 0; c < tk; ++c) p[int64_t(r) * tk + c] = row[c] / sum;
        }
        kern::gemm<T>(false, false, tk, dh, tk, T(1), p, tk, vh, d, T(0),
                      ctx_.data() + int64_t(s) * tk * d + h * dh, d);
      }
    }
    wo.forward(ctx_.data(), rows, y);
  }
  void backward(const T* dy, T* dx) {
    const int rows = n_ * tk;
    std::vector<T> dctx(size_t(rows) * d), dq(size_t(rows) * d, T(0)),
        dk(size_t(rows) * d, T(0)), dv(size_t(rows) * d, T(0)),
        dp(size_t(tk) * tk), ds(size_t(tk) * tk);
    wo.backward(dy, dctx.data());
    const T scale = T(1) / std::sqrt(T(dh));
    for (int s = 0; s < n_; ++s) {
      for (int h = 0; h < nh; ++h) {
        const int64_t off = int64_t(s) * tk * d + h * dh;
        const T* p = p_.data() + (int64_t(s) * nh + h) * tk * tk;
        kern::gemm<T>(false, true, tk, tk, dh, T(1), dctx.data() + off, d,
                      v_.data() + off, d, T(0), dp.data(), tk);
        kern::gemm<T>(true, false, tk, dh, tk, T(1), p, tk, dctx.data() + off,
                      d, T(0), dv.data() + off, d);
        for (int r = 0; r < tk; ++r) {
          const T* pr = p + int64_t(r) * tk;
          const T* dpr = dp.data() + int64_t(r) * tk;
          T dot = T(0);
          for (int c = 0; c < tk; ++c) dot += pr[c] * dpr[c];
          T* dsr = ds.data() + int64_t(r) * tk;
          for (int c = 0; c < tk; ++c) dsr[c] = pr[c] * (dpr[c] - dot);
        }
        kern::gemm<T>(false, false, tk, dh, tk, scale, ds.data(), tk,
                      k_.data() + off, d, T(0), dq.data() + off, d);
        kern::gemm<T>(true, false, tk, dh, tk, scale, ds.data(), tk,
                      q_.data() + off, d, T(0), dk.data() + off, d);
      }
    }
    wq.backward(dq.data(), dx, false);
    wk.backward(dk.data(), dx, true);
    wv.backward(dv.data(), dx, true);
  }
};

// Pre-norm transformer encoder block: x + MHA(LN(x)), then x + FFN(LN(x)).
template <class T>
struct TransformerBlock {
  int d = 0, tk = 0, ff = 0;
  LayerNorm<T> ln1, ln2;
  Attention<T> attn;
  Linear<T> fc1, fc2;
  Relu<T> act;
  std::vector<T> a_, m_, x2_, f_, h1_, h2_;
  int n_ = 0;

  void init(const std::string& name, int dim, int heads, int tokens,
            int ff_dim, Pcg32& rng) {
    d = dim;
    tk = tokens;
    ff = ff_dim;
    ln1.init(name + ".ln1", d);
    ln2.init(name + ".ln2", d);
    attn.init(name + ".attn", d, heads, tokens, rng);
    fc1.init(name + ".ff1", d, ff, rng);
    fc2.init(name + ".ff2", ff, d, rng);
  }
  void collect(ParamList<T>& ps) {
    ln1.collect(ps);
    attn.collect(ps);
    ln2.collect(ps);
    fc1.collect(ps);
    fc2.collect(ps);
  }

  // x: [n, tk, d] -> y: [n, tk, d]
  void forward(const T* x, int n, T* y) {
    n_ = n;
    const int64_t total = int64_t(n) * tk * d;
    const int rows = n * tk;
    a_.resize(size_t(total));
    m_.resize(size_t(total));
    x2_.resize(size_t(total));
    f_.resize(size_t(total));
    h1_.resize(size_t(rows) * ff);
    h2_.resize(size_t(rows) * ff);
    ln1.forward(x, rows, a_.data());
    attn.forward(a_.data(), n, m_.data());
    for (int64_t i = 0; i < total; ++i) x2_[size_t(i)] = x[i] + m_[size_t(i)];
    ln2.forward(x2_.data(), rows, f_.data());
    fc1.forward(f_.data(), rows, h1_.data());
    act.forward(h1_.data(), int64_t(rows) * ff, h2_.data());
    fc2.forward(h2_.data(), rows, y);
    for (int64_t i = 0; i < total; ++i) y[i] += x2_[size_t(i)];
  }
  void backward(const T* dy, T* dx) {
    const int64_t total = int64_t(n_) * tk * d;
    const int rows = n_ * tk;
    std::vector<T> dh2(size_t(rows) * ff), dh1(size_t(rows) * ff),
        df(size_t(total), T(0)), dx2(size_t(total), T(0)),
        da(size_t(total), T(0));
    fc2.backward(dy, dh2.data());
    act.backward(dh2.data(), dh1.data());
    fc1.backward(dh1.data(), df.data());
    ln2.backward(df.data(), dx2.data());
    for (int64_t i = 0; i < total; ++i) dx2[size_t(i)] += dy[i];
    attn.backward(dx2.data(), da.data());
    ln1.backward(da.data(), dx);
    for (int64_t i = 0; i < total; ++i) dx[i] += dx2[size_t(i)];
  }
};

template <class T>
struct Adam {
  T lr = T(1e-3), beta1 = T(0.9), beta2 = T(0.999), eps = T(1e-8);
  int64_t t = 0;
  std::vector<std::vector<T>> m_, v_;

  void step(ParamList<T>& ps) {
    if (m_.empty()) {
      for (Param<T>* p : ps) {
        m_.emplace_back(p->w.size(), T(0));
        v_.emplace_back(p->w.size(), T(0));
      }
    }
    if (m_.size() != ps.size()) throw std::logic_error("adam: param set changed");
    ++t;
    const T bc1 = T(1) - std::pow(beta1, T(t));
    const T bc2 = T(1) - std::pow(beta2, T(t));
    for (size_t i = 0; i < ps.size(); ++i) {
      Param<T>* p = ps[i];
      kern::adam_step<T>(int(p->w.size()), p->w.data(), p->g.data(),
                         m_[i].data(), v_[i].data(), lr, beta1, beta2, eps,
                         bc1, bc2);
    }
  }
};

// ---------------------------------------------------------------------------
// Central-difference gradient probe. loss() must zero grads, run forward +
// backward, and return the scalar loss; probes compare the analytic entry
// against (L(w+h) - L(w-h)) / 2h.

template <class T>
struct GradProbe {
  std::string param;
  int64_t idx = 0;
  T analytic = T(0), numeric = T(0), rel_err = T(0);
};

template <class T>
std::vector<GradProbe<T>> gradcheck(ParamList<T>& ps,
                                    const std::function<T()>& loss, Pcg32& rng,
                                    int n_probes, T h) {
  std::vector<GradProbe<T>> out;
  const int64_t total = param_count(ps);
  loss();
  std::vector<std::vector<T>> saved;
  for (Param<T>* p : ps) saved.push_back(p->g);
  for (int probe = 0; probe < n_probes; ++probe) {
    int64_t flat = int64_t(rng.next_u64() % uint64_t(total));
    size_t pi = 0;
    while (flat >= ps[pi]->size()) flat -= ps[pi++]->size();
    Param<T>* p = ps[pi];
    const T keep = p->w[size_t(flat)];
    p->w[size_t(flat)] = keep + h;
    const T lp = loss();
    p->w[size_t(flat)] = keep - h;
    const T lm = loss();
    p->w[size_t(flat)] = keep;
    GradProbe<T> g;
    g.param = p->name;
    g.idx = flat;
    g.analytic = saved[pi][size_t(flat)];
    g.numeric = (lp - lm) / (T(2) * h);
    const T denom = std::max(std::abs(g.analytic) + std::abs(g.numeric), T(1e-4));
    g.rel_err = std::abs(g.analytic - g.numeric) / denom;
    out.push_back(g);
  }
  loss();  // restore analytic grads for the unperturbed weights
  return out;
}

}  // namespace taskplan::nn
