#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "taskplan/core/rng.hpp"
#include "taskplan/core/tensor.hpp"
#include "taskplan/datagen/datagen.hpp"
#include "taskplan/nn/nn.hpp"
#include "taskplan/sim/sim.hpp"
#include "taskplan/symbolic/symbolic.hpp"

// Stage one: the object encoder f_enc, the shared predicate heads f_syb, and
// the mask decoder f_seg, trained jointly on the scene corpus. Everything is
// templated on the scalar so the double instantiation backs the finite-
// difference gradient certification of the exact training arithmetic.

namespace taskplan::pretrain {

inline constexpr int kDim = 32;         // object embedding width d
inline constexpr int kObsChannels = 4;  // masked RGB + the mask plane
inline constexpr int kPix = sim::kH * sim::kW;

struct Config {
  int epochs = 24;
  int batch = 8;  // scenes per optimizer step; 11 objects each
  float lr = 1e-3f;
  float lambda_seg = 1.0f;  // 0 drops the reconstruction objective (w.o. seg)
  uint64_t seed = 0;
  float val_fraction = 0.05f;

  std::string to_json() const;
  static Config from_json(const std::string& text);
};

// Which (a, b) gather rows feed each shared head, in vocabulary key order.
// Unary rows leave b = -1.
struct HeadRow {
  int a = 0, b = -1, key = 0;
};
const std::array<std::vector<HeadRow>, 5>& head_rows();

template <class T>
struct Model {
  // f_enc: four stride-2 conv blocks, then a linear read-out to d.
  nn::Conv2d<T> ec1, ec2, ec3, ec4;
  nn::Relu<T> ea1, ea2, ea3, ea4;
  nn::Linear<T> efc;
  // f_seg: linear seed to 4x4x32, then four stride-2 deconvs back to 64x64.
  nn::Linear<T> dfc;
  nn::Relu<T> da0, da1, da2, da3;
  nn::ConvT2d<T> dd1, dd2, dd3, dd4;
  // f_syb: one two-layer head per predicate, shared across objects. Final
  // layers start at zero so an untrained model emits probability 0.5.
  struct Head {
    nn::Linear<T> h1, h2;
    nn::Relu<T> act;
  };
  std::array<Head, 5> heads;

  void init(Pcg32& rng);
  void collect(nn::ParamList<T>& ps);
  void set_frozen(bool on);

  // obs [n, 4, 64, 64] -> emb [n, d]
  void encode(const T* obs, int n, T* emb);
  void encode_backward(const T* demb, T* dobs = nullptr);

  // emb [n, d] -> mask logits [n, kPix]
  void seg_forward(const T* emb, int n, T* logits);
  // accumulates into demb when acc, else overwrites
  void seg_backward(const T* dlogits, T* demb, bool acc);

  // embs [n, 11, d] -> logits [n, 91] in vocabulary order
  void syb_forward(const T* embs, int n, T* logits);
  // always accumulates into dembs
  void syb_backward(const T* dlogits, T* dembs);

 private:
  std::vector<T> b1_, b2_, b3_, b4_;      // encoder activations
  std::vector<T> s0_, s1_, s2_, s3_;      // decoder activations
  std::array<std::vector<T>, 5> hx_, hh_;  // head gathers / hiddens
  int syb_n_ = 0;
};

// Stages one scene into the encoder input layout [11, 4, 64, 64]: RGB scaled
// to [0,1] and zeroed outside the object, plus the binary mask plane.
template <class T>
void stage_observation(const TensorU8& image, const TensorU8& masks, T* obs);

struct LossParts {
  double total = 0, syb = 0, seg = 0;
};

// L = L_syb + lambda_seg * L_seg over one staged batch; fills parameter
// gradients when backward. obs [b*11, 4, 64, 64]; masks01 [b*11, kPix];
// labels01 [b, 91].
template <class T>
LossParts pretrain_loss(Model<T>& m, const T* obs, const T* masks01,
                        const T* labels01, int b, T lambda_seg, bool backward);

struct Metrics {
  std::array<double, 5> f1{};  // per predicate type, vocabulary order
  double f1_min = 0, f1_macro = 0;
  double iou_mean = 0;     // present objects, decoded>0.5 vs true mask
  double absent_fp = 0;    // mean fraction of >0.5 pixels, absent objects
  double centroid_px = 0;  // mean centroid error in pixels, present objects
  int n_scenes = 0;

  std::string to_json() const;
};
Metrics evaluate(Model<float>& m,
                 const std::vector<datagen::SceneSample>& scenes,
                 int batch = 16);

struct EpochStats {
  int epoch = 0;
  double loss = 0, syb = 0, seg = 0;
  double val_f1_min = 0, val_iou = 0;
  double seconds = 0;
};

struct TrainResult {
  Config cfg;
  uint64_t corpus_fp = 0;
  std::vector<EpochStats> history;
  Metrics val;
};

// Trains in place; deterministic given cfg.seed. Throws on non-finite loss.
TrainResult train(Model<float>& m,
                  const std::vector<datagen::SceneSample>& corpus,
                  const Config& cfg, uint64_t corpus_fp, std::ostream* log);

void save_checkpoint(const std::string& path, Model<float>& m,
                     const Config& cfg, uint64_t corpus_fp,
                     const std::string& metrics_json);

struct Loaded {
  Model<float> model;
  Config cfg;
  uint64_t corpus_fp = 0;
  std::string metrics_json;
};
Loaded load_checkpoint(const std::string& path);

// Identity of the trained weights; dynamics checkpoints refuse to run
// against a different pretrain than they were trained with.
uint64_t fingerprint(Model<float>& m);

// Hash of a dataset directory's manifest bytes.
uint64_t corpus_fingerprint(const std::string& dir);

// Inference wrappers used by the dynamics stage and the planner.
std::vector<float> encode_set(Model<float>& m, const TensorU8& image,
                              const TensorU8& masks);  // [11 * kDim]
symbolic::SymbolicState decode_predicates(Model<float>& m,
                                          const float* embs /*[11*kDim]*/);
std::vector<float> decode_mask(Model<float>& m,
                               const float* emb /*[kDim]*/);  // [kPix] probs

}  // namespace taskplan::pretrain
