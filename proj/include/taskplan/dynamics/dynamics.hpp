#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "taskplan/core/rng.hpp"
#include "taskplan/datagen/datagen.hpp"
#include "taskplan/nn/nn.hpp"
#include "taskplan/pretrain/pretrain.hpp"

// Stage two: the spatially grounded transition model f_T = (f_aff, f_trans)
// over the frozen pretrained embedding space, plus the unstructured
// perceptron baseline trained under identical losses. Everything is
// templated on the scalar for finite-difference certification.

namespace taskplan::dynamics {

using pretrain::kDim;
using pretrain::kPix;

inline constexpr int kPosCh = 8;               // learned positional grid
inline constexpr int kCond = 3 + kDim;         // skill one-hot + target emb
inline constexpr int kAffIn = kPosCh + kCond;  // effect decoder input chans
inline constexpr int kAffHidden = 32;
inline constexpr int kHeads = 4;
inline constexpr int kFfn = 64;
inline constexpr int kTokens = sim::kNumObjects;
inline constexpr int kDafHidden = 256;
inline constexpr int kDafIn = kTokens * kDim + 3 + 2;  // embs + skill + (u,v)
inline constexpr int kDafOut = kTokens * kDim;

struct Config {
  int epochs = 10;
  int batch = 16;  // transitions per optimizer step
  float lr = 1e-3f;
  float lambda_align = 1.0f;
  uint64_t seed = 0;
  float val_fraction = 0.05f;   // held-out trajectories
  float data_fraction = 1.0f;   // leading fraction of the training split
  bool no_pretrain = false;     // train encoder/decoders jointly from scratch
  bool no_align = false;        // drop the frozen-decoder alignment terms
  bool daf = false;             // unstructured baseline instead of (aff,trans)

  std::string to_json() const;
  static Config from_json(const std::string& text);
};

template <class T>
struct Model {
  bool daf = false;  // set before init; selects which weights exist

  // f_aff: learned positional grid concat broadcast condition, then
  // 1x1 -> relu -> 3x3 -> relu -> 1x1. The 3x3 receptive field keeps the
  // single-pixel path equal to the full map at that pixel.
  nn::Param<T> pos;      // [kPosCh, 64, 64]
  nn::Param<T> w1, b1;   // [kAffHidden, kAffIn]
  nn::Param<T> w2, b2;   // [kAffHidden, kAffHidden*9]
  nn::Param<T> w3, b3;   // [kDim, kAffHidden]; zero-init: effects start null

  // f_trans: object tokens with the target slot replaced by the effect
  // feature, a binary role embedding, two pre-LN blocks, and a zero-init
  // read-out added to the current embeddings (next state starts as no-op).
  nn::Param<T> role;  // [2, kDim]: context row 0, target row 1
  nn::TransformerBlock<T> tb1, tb2;
  nn::LayerNorm<T> fln;
  nn::Linear<T> fout;

  // Unstructured baseline: concat embeddings + skill one-hot + raw (u,v)
  // through a perceptron, residual on the current embeddings. No effect
  // map, no mask, and nothing identifying the target.
  nn::Linear<T> q1, q2, q3;
  nn::Relu<T> qa1, qa2;

  void init(Pcg32& rng);
  void collect(nn::ParamList<T>& ps);

  // Full pre-mask effect map [kDim, 64, 64] for one (skill, target).
  void effect_map(int skill, const T* x_target, T* E);

  // Batched single-pixel effects; out [n, kDim]. Saves state for backward.
  void effect_at_batch(const int* skill, const T* x_t /*[n,kDim]*/,
                       const int* rr, const int* cc, int n, T* out);
  // de [n, kDim]; accumulates into dx_t [n, kDim] when given.
  void effect_at_batch_backward(const T* de, T* dx_t);

  // eff [n, kDim] -> out [n, kTokens, kDim]; s is the residual anchor.
  void propagate(const T* s, const T* eff, const int* target, int n, T* out);
  // Overwrites ds [n, kTokens, kDim] and deff [n, kDim].
  void propagate_backward(const T* dout, T* ds, T* deff);

  // Baseline forward/backward; uv in [0,1]^2 row-major per sample.
  void daf_forward(const T* s, const int* skill, const T* uv, int n, T* out);
  void daf_backward(const T* dout, T* ds);

 private:
  // effect_at_batch saved state
  std::vector<T> xp_, h1p_, cols_, h2p_;
  std::vector<uint8_t> valid_;
  std::vector<int> rr_, cc_;
  int pn_ = 0;
  // propagate saved state
  std::vector<T> tok_, bo1_, bo2_, ln_, prop_s_;
  std::vector<int> tgt_;
  int tn_ = 0;
  // daf saved state
  std::vector<T> dx_, dh1_, dh2_;
  int dn_ = 0;
};

// Single-pixel convenience wrapper over effect_at_batch (inference).
std::vector<float> effect_at(Model<float>& m, int skill,
                             const float* x_target, int r, int c);

// One model-side transition: gate theta by the decoded target mask, then
// propagate the masked effect. Returns s unchanged when theta falls outside
// the predicted mask. s is [kTokens * kDim].
std::vector<float> predict_transition(pretrain::Model<float>& pre,
                                      Model<float>& dyn, const float* s,
                                      int skill, int r, int c, int target_id);

// Baseline transition: same signature, ignores the target semantically.
std::vector<float> daf_transition(Model<float>& dyn, const float* s, int skill,
                                  int r, int c);

struct LossParts {
  double total = 0, reg = 0, syb = 0, seg = 0;
};

// One staged batch of recorded transitions.
template <class T>
struct BatchT {
  int n = 0;
  std::vector<T> cur;      // [n, kTokens, kDim] (frozen-encoder path)
  std::vector<T> next;     // [n, kTokens, kDim]
  std::vector<T> labels;   // [n, 91] next-state bits
  std::vector<T> masks;    // [n*kTokens, kPix] next-state masks
  std::vector<T> uv;       // [n, 2] theta scaled to [0,1]
  std::vector<int> skill, r, c, target;
};

// L = L_reg + lambda_align * (L_syb_next + L_seg_next). L_reg averages the
// squared embedding error over objects and batch; the alignment terms push
// every predicted embedding through the (frozen) decoders against the true
// next labels and masks. Supervision sits at the executed pixel only; no
// mask gate is applied during training. When joint is set, cur/next come
// from obs (images+masks staged per frame) through the trainable encoder
// instead of the precomputed cur/next embeddings.
template <class T>
struct JointObs {
  const T* obs = nullptr;  // [2n*kTokens, 4, 64, 64]: cur frames, then next
};
template <class T>
LossParts dynamics_loss(pretrain::Model<T>& pre, Model<T>& dyn,
                        const BatchT<T>& b, T lambda_align, bool backward,
                        const JointObs<T>* joint = nullptr);

struct Metrics {
  double exact_match = 0;   // one-step decoded bits == sim next bits, all 91
  double key_acc = 0;       // per-key agreement
  double closure_pass = 0;  // embeddings with IoU>=0.5 and involved-key
                            // exact-match >=0.85
  double closure_iou = 0;   // mean decoded-mask IoU vs true next masks
  double closure_bool = 0;  // mean involved-key exact fraction
  double noop_fidelity = 0; // sim no-op transitions decoded unchanged
  int n_transitions = 0;

  std::string to_json() const;
};

// Evaluates through the public predict_transition (mask gate active); the
// baseline flag routes through daf_transition instead.
Metrics evaluate(pretrain::Model<float>& pre, Model<float>& dyn,
                 const std::vector<datagen::Trajectory>& trajs, bool daf,
                 int max_transitions = 0);

struct EpochStats {
  int epoch = 0;
  double loss = 0, reg = 0, syb = 0, seg = 0;
  double seconds = 0;
};

struct TrainResult {
  Config cfg;
  std::vector<EpochStats> history;
  Metrics val;
};

// Trains dyn in place on the exploration corpus. pre is frozen unless
// cfg.no_pretrain, in which case it is (re)initialized from cfg.seed and
// trained jointly. Deterministic given cfg.seed; throws on non-finite loss.
TrainResult train(pretrain::Model<float>& pre, Model<float>& dyn,
                  const std::vector<datagen::Trajectory>& corpus,
                  const Config& cfg, std::ostream* log);

// Checkpoint carries the dynamics weights, the config, and the fingerprint
// of the pretrain weights it was trained against; loading verifies that
// fingerprint. Joint (no_pretrain) checkpoints embed their own pretrain
// weights, and the fingerprint refers to those.
void save_checkpoint(const std::string& path, pretrain::Model<float>& pre,
                     Model<float>& dyn, const Config& cfg,
                     const std::string& metrics_json);

struct Loaded {
  Model<float> model;
  Config cfg;
  uint64_t pretrain_fp = 0;
  std::string metrics_json;
  // set only for joint checkpoints
  bool has_pretrain = false;
  pretrain::Model<float> pre;
};
Loaded load_checkpoint(const std::string& path);

// Resolves the (pretrain, dynamics) pair a planner runs on: joint
// checkpoints supply their own pretrain; others verify the fingerprint of
// the provided one and throw on mismatch.
struct Bundle {
  pretrain::Model<float> pre;
  Model<float> dyn;
  Config cfg;
};
Bundle load_bundle(const std::string& dyn_path,
                   const std::string& pretrain_path);

uint64_t fingerprint(Model<float>& m);

}  // namespace taskplan::dynamics
