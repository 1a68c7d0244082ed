#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glyphgrid/image.hpp"
#include "glyphgrid/tensor.hpp"

namespace glyphgrid {

// Architecture of the desk-scale CNN: each conv block is a 3x3 stride-1
// pad-1 convolution followed by ReLU and a 2x2 max-pool, so every block
// keeps H,W through the conv and halves them in the pool. A single dense
// layer maps the flattened final block to class logits.
struct ModelConfig {
  int input_side = 64;
  int num_classes = 2;
  std::vector<int> conv_channels = {8, 16, 32};
  std::uint64_t seed = 0;

  void validate() const;       // throws ConfigError
  int pooled_side() const;     // input_side / 2^blocks
  int flattened_size() const;  // last channels * pooled_side²
};

struct ConvLayer {
  Tensor kernels;  // [F, C, 3, 3]
  Tensor bias;     // [F]
};

struct DenseLayer {
  Tensor weights;  // [K, flattened]
  Tensor bias;     // [K]
};

struct Model {
  ModelConfig config;
  std::string dataset_hash;  // config hash of the training dataset; empty until trained
  std::vector<ConvLayer> conv;
  DenseLayer dense;
};

// Weights uniform in [-sqrt(6/fan_in), +sqrt(6/fan_in)], biases zero, all
// draws from one xoshiro256** stream in layer order (conv kernels
// row-major, then dense weights row-major) so a seed pins every parameter.
Model init_model(const ModelConfig& config);

// out[f,y,x] = bias[f] + sum_{c,dy,dx} in[c,y+dy-1,x+dx-1] * kernels[f,c,dy,dx]
// with zero padding. Implemented as im2col + GEMM.
Tensor conv2d(const Tensor& input, const Tensor& kernels, const Tensor& bias);

Tensor relu(const Tensor& t);

struct PoolResult {
  Tensor output;                    // [C, H/2, W/2]
  std::vector<Eigen::Index> argmax; // flat input index of each window max
};
PoolResult maxpool2(const Tensor& t);  // H, W must be even

struct XentResult {
  double loss = 0.0;
  Tensor probs;  // [K]
};
// Max-subtracted softmax + cross entropy; loss = -log(probs[label]).
XentResult softmax_xent(const Tensor& logits, int label);

// Activations kept for the backward pass.
struct ForwardCache {
  Tensor input;                  // [1, S, S]
  std::vector<Tensor> conv_out;  // pre-ReLU, per block
  std::vector<Tensor> relu_out;
  std::vector<PoolResult> pool;
  Tensor logits;  // [K]
};
ForwardCache forward(const Model& model, const Tensor& input);

// Parameter-shaped buffers for gradients and momentum.
struct Gradients {
  std::vector<ConvLayer> conv;
  DenseLayer dense;

  void set_zero();
  void accumulate(const Gradients& other);  // this += other
  void scale(double factor);
};
Gradients zeros_like(const Model& model);

// Analytic gradients of the single-sample loss wrt every parameter, added
// into `grads`. Returns the loss; fills `probs` when given.
double backward(const Model& model, const ForwardCache& cache, int label, Gradients& grads,
                Tensor* probs = nullptr);

// Grayscale image into [1,S,S] with pixels scaled to [0,1] (divide by 255).
Tensor image_to_tensor(const ImageU8& image);

}  // namespace glyphgrid
