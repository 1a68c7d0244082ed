#include "glyphgrid/nn.hpp"

#include <cmath>
#include <string>

#include "glyphgrid/errors.hpp"
#include "glyphgrid/rng.hpp"

namespace glyphgrid {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void require(bool ok, const std::string& what) {
  if (!ok) throw MismatchError(what);
}

// Patch matrix for a 3x3 stride-1 pad-1 convolution: column y*W+x holds the
// padded 3x3 neighborhood of (y,x) across channels, row c*9 + dy*3 + dx.
// conv2d is then a single GEMM against the [F, C*9] kernel matrix.
MatrixXd im2col(const Tensor& input) {
  const int C = input.shape[0], H = input.shape[1], W = input.shape[2];
  MatrixXd patches = MatrixXd::Zero(static_cast<Eigen::Index>(C) * 9,
                                    static_cast<Eigen::Index>(H) * W);
  for (int c = 0; c < C; ++c) {
    Map<const RowMat> plane(input.data.data() + static_cast<Eigen::Index>(c) * H * W, H, W);
    for (int dy = 0; dy < 3; ++dy) {
      for (int dx = 0; dx < 3; ++dx) {
        auto row = patches.row(c * 9 + dy * 3 + dx);
        const int x0 = std::max(0, 1 - dx), x1 = std::min(W, W + 1 - dx);
        if (x0 >= x1) continue;
        for (int y = std::max(0, 1 - dy); y < std::min(H, H + 1 - dy); ++y) {
          row.segment(static_cast<Eigen::Index>(y) * W + x0, x1 - x0) =
              plane.row(y + dy - 1).segment(x0 + dx - 1, x1 - x0);
        }
      }
    }
  }
  return patches;
}

// Adjoint of im2col: scatter-add patch gradients back onto the input plane.
void col2im_add(const MatrixXd& dpatches, Tensor& dinput) {
  const int C = dinput.shape[0], H = dinput.shape[1], W = dinput.shape[2];
  for (int c = 0; c < C; ++c) {
    Map<RowMat> plane(dinput.data.data() + static_cast<Eigen::Index>(c) * H * W, H, W);
    for (int dy = 0; dy < 3; ++dy) {
      for (int dx = 0; dx < 3; ++dx) {
        auto row = dpatches.row(c * 9 + dy * 3 + dx);
        const int x0 = std::max(0, 1 - dx), x1 = std::min(W, W + 1 - dx);
        if (x0 >= x1) continue;
        for (int y = std::max(0, 1 - dy); y < std::min(H, H + 1 - dy); ++y) {
          plane.row(y + dy - 1).segment(x0 + dx - 1, x1 - x0) +=
              row.segment(static_cast<Eigen::Index>(y) * W + x0, x1 - x0);
        }
      }
    }
  }
}

void fill_uniform(Tensor& t, double bound, Xoshiro256ss& rng) {
  for (Eigen::Index i = 0; i < t.data.size(); ++i) t.data[i] = rng.uniform(-bound, bound);
}

}  // namespace

void ModelConfig::validate() const {
  if (input_side < 1) throw ConfigError("model input_side must be positive");
  if (num_classes < 2) throw ConfigError("model needs at least 2 classes");
  int side = input_side;
  for (int channels : conv_channels) {
    if (channels < 1) throw ConfigError("conv block channel counts must be positive");
    if (side % 2 != 0) {
      throw ConfigError("input_side " + std::to_string(input_side) + " is not divisible by 2^" +
                        std::to_string(conv_channels.size()) + " (one halving per conv block)");
    }
    side /= 2;
  }
}

int ModelConfig::pooled_side() const {
  int side = input_side;
  for (std::size_t b = 0; b < conv_channels.size(); ++b) side /= 2;
  return side;
}

int ModelConfig::flattened_size() const {
  const int side = pooled_side();
  return conv_channels.empty() ? input_side * input_side
                               : conv_channels.back() * side * side;
}

Model init_model(const ModelConfig& config) {
  config.validate();
  Model model;
  model.config = config;
  Xoshiro256ss rng(config.seed);

  int in_channels = 1;
  for (int out_channels : config.conv_channels) {
    ConvLayer layer;
    layer.kernels = Tensor::zeros({out_channels, in_channels, 3, 3});
    layer.bias = Tensor::zeros({out_channels});
    fill_uniform(layer.kernels, std::sqrt(6.0 / (in_channels * 9)), rng);
    model.conv.push_back(std::move(layer));
    in_channels = out_channels;
  }

  const int flattened = config.flattened_size();
  model.dense.weights = Tensor::zeros({config.num_classes, flattened});
  model.dense.bias = Tensor::zeros({config.num_classes});
  fill_uniform(model.dense.weights, std::sqrt(6.0 / flattened), rng);
  return model;
}

Tensor conv2d(const Tensor& input, const Tensor& kernels, const Tensor& bias) {
  require(input.shape.size() == 3, "conv2d input must be [C,H,W]");
  require(kernels.shape.size() == 4 && kernels.shape[2] == 3 && kernels.shape[3] == 3,
          "conv2d kernels must be [F,C,3,3]");
  require(kernels.shape[1] == input.shape[0], "conv2d channel mismatch");
  require(bias.shape.size() == 1 && bias.shape[0] == kernels.shape[0],
          "conv2d bias must be [F]");

  const int F = kernels.shape[0], H = input.shape[1], W = input.shape[2];
  const MatrixXd patches = im2col(input);
  Map<const RowMat> kernel_mat(kernels.data.data(), F, kernels.shape[1] * 9);

  Tensor out = Tensor::zeros({F, H, W});
  Map<RowMat> out_mat(out.data.data(), F, static_cast<Eigen::Index>(H) * W);
  out_mat.noalias() = kernel_mat * patches;
  out_mat.colwise() += Map<const VectorXd>(bias.data.data(), F);
  return out;
}

Tensor relu(const Tensor& t) {
  Tensor out;
  out.shape = t.shape;
  out.data = t.data.max(0.0);
  return out;
}

PoolResult maxpool2(const Tensor& t) {
  require(t.shape.size() == 3, "maxpool2 input must be [C,H,W]");
  const int C = t.shape[0], H = t.shape[1], W = t.shape[2];
  require(H % 2 == 0 && W % 2 == 0, "maxpool2 needs even H and W");

  PoolResult result;
  result.output = Tensor::zeros({C, H / 2, W / 2});
  result.argmax.resize(result.output.size());

  Eigen::Index out_index = 0;
  for (int c = 0; c < C; ++c) {
    const Eigen::Index plane = static_cast<Eigen::Index>(c) * H * W;
    for (int y = 0; y < H; y += 2) {
      for (int x = 0; x < W; x += 2) {
        // First max in window scan order wins ties, keeping routing stable.
        Eigen::Index best = plane + static_cast<Eigen::Index>(y) * W + x;
        double best_value = t.data[best];
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const Eigen::Index i = plane + static_cast<Eigen::Index>(y + dy) * W + (x + dx);
            if (t.data[i] > best_value) {
              best_value = t.data[i];
              best = i;
            }
          }
        }
        result.output.data[out_index] = best_value;
        result.argmax[out_index] = best;
        ++out_index;
      }
    }
  }
  return result;
}

XentResult softmax_xent(const Tensor& logits, int label) {
  require(logits.shape.size() == 1 && logits.shape[0] >= 2, "softmax needs [K], K >= 2");
  require(label >= 0 && label < logits.shape[0], "label out of range");

  const double max_logit = logits.data.maxCoeff();
  XentResult result;
  result.probs.shape = logits.shape;
  result.probs.data = (logits.data - max_logit).exp();
  const double total = result.probs.data.sum();
  result.probs.data /= total;
  // log-sum-exp form rather than -log(probs[label]): exact ln K on uniform
  // logits and no precision loss when probs[label] is tiny.
  result.loss = std::log(total) - (logits.data[label] - max_logit);
  return result;
}

ForwardCache forward(const Model& model, const Tensor& input) {
  const ModelConfig& config = model.config;
  require(input.shape.size() == 3 && input.shape[0] == 1 &&
              input.shape[1] == config.input_side && input.shape[2] == config.input_side,
          "forward input must be [1," + std::to_string(config.input_side) + "," +
              std::to_string(config.input_side) + "]");

  ForwardCache cache;
  cache.input = input;
  const Tensor* current = &cache.input;
  for (std::size_t b = 0; b < model.conv.size(); ++b) {
    cache.conv_out.push_back(conv2d(*current, model.conv[b].kernels, model.conv[b].bias));
    cache.relu_out.push_back(relu(cache.conv_out.back()));
    cache.pool.push_back(maxpool2(cache.relu_out.back()));
    current = &cache.pool.back().output;
  }

  const int flattened = config.flattened_size();
  require(current->size() == flattened, "flatten size mismatch");
  Map<const VectorXd> flat(current->data.data(), flattened);
  Map<const RowMat> weights(model.dense.weights.data.data(), config.num_classes, flattened);
  Map<const VectorXd> bias(model.dense.bias.data.data(), config.num_classes);

  cache.logits = Tensor::zeros({config.num_classes});
  Map<VectorXd>(cache.logits.data.data(), config.num_classes).noalias() = weights * flat + bias;
  return cache;
}

void Gradients::set_zero() {
  for (ConvLayer& layer : conv) {
    layer.kernels.data.setZero();
    layer.bias.data.setZero();
  }
  dense.weights.data.setZero();
  dense.bias.data.setZero();
}

void Gradients::accumulate(const Gradients& other) {
  for (std::size_t b = 0; b < conv.size(); ++b) {
    conv[b].kernels.data += other.conv[b].kernels.data;
    conv[b].bias.data += other.conv[b].bias.data;
  }
  dense.weights.data += other.dense.weights.data;
  dense.bias.data += other.dense.bias.data;
}

void Gradients::scale(double factor) {
  for (ConvLayer& layer : conv) {
    layer.kernels.data *= factor;
    layer.bias.data *= factor;
  }
  dense.weights.data *= factor;
  dense.bias.data *= factor;
}

Gradients zeros_like(const Model& model) {
  Gradients grads;
  for (const ConvLayer& layer : model.conv) {
    grads.conv.push_back({Tensor::zeros(layer.kernels.shape), Tensor::zeros(layer.bias.shape)});
  }
  grads.dense.weights = Tensor::zeros(model.dense.weights.shape);
  grads.dense.bias = Tensor::zeros(model.dense.bias.shape);
  return grads;
}

double backward(const Model& model, const ForwardCache& cache, int label, Gradients& grads,
                Tensor* probs) {
  const ModelConfig& config = model.config;
  require(cache.logits.shape.size() == 1 && cache.logits.shape[0] == config.num_classes,
          "backward needs a cached forward pass");
  require(cache.pool.size() == model.conv.size(), "backward cache does not match model");

  XentResult xent = softmax_xent(cache.logits, label);
  if (probs) *probs = xent.probs;

  // d loss / d logits = probs - onehot(label)
  VectorXd dlogits = xent.probs.data.matrix();
  dlogits[label] -= 1.0;

  const int flattened = config.flattened_size();
  const Tensor& last = model.conv.empty() ? cache.input : cache.pool.back().output;
  Map<const VectorXd> flat(last.data.data(), flattened);

  Map<RowMat> dweights(grads.dense.weights.data.data(), config.num_classes, flattened);
  dweights.noalias() += dlogits * flat.transpose();
  grads.dense.bias.data += dlogits.array();

  if (model.conv.empty()) return xent.loss;

  Map<const RowMat> weights(model.dense.weights.data.data(), config.num_classes, flattened);
  Tensor dcurrent;  // gradient wrt the active block's pool output
  dcurrent.shape = last.shape;
  dcurrent.data = (weights.transpose() * dlogits).array();

  for (std::size_t b = model.conv.size(); b-- > 0;) {
    // Pool: route each output gradient to the recorded argmax element.
    Tensor dconv = Tensor::zeros(cache.conv_out[b].shape);
    const PoolResult& pool = cache.pool[b];
    for (Eigen::Index i = 0; i < dcurrent.data.size(); ++i) {
      dconv.data[pool.argmax[i]] += dcurrent.data[i];
    }
    // ReLU mask on the pre-activation.
    dconv.data *= (cache.conv_out[b].data > 0.0).cast<double>();

    const Tensor& block_input = (b == 0) ? cache.input : cache.pool[b - 1].output;
    const int F = model.conv[b].kernels.shape[0];
    const int HW = dconv.shape[1] * dconv.shape[2];
    const MatrixXd patches = im2col(block_input);
    Map<const RowMat> dconv_mat(dconv.data.data(), F, HW);

    Map<RowMat> dkernels(grads.conv[b].kernels.data.data(), F, patches.rows());
    dkernels.noalias() += dconv_mat * patches.transpose();
    grads.conv[b].bias.data += dconv_mat.rowwise().sum().array();

    if (b > 0) {
      Map<const RowMat> kernel_mat(model.conv[b].kernels.data.data(), F, patches.rows());
      const MatrixXd dpatches = kernel_mat.transpose() * dconv_mat;
      Tensor dprev = Tensor::zeros(block_input.shape);
      col2im_add(dpatches, dprev);
      dcurrent = std::move(dprev);
    }
  }
  return xent.loss;
}

Tensor image_to_tensor(const ImageU8& image) {
  Tensor t = Tensor::zeros({1, static_cast<int>(image.rows()), static_cast<int>(image.cols())});
  Map<const Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>> flat(image.data(), image.size());
  t.data = flat.cast<double>() / 255.0;
  return t;
}

}  // namespace glyphgrid
