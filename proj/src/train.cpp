#include "glyphgrid/train.hpp"

#include <chrono>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "glyphgrid/errors.hpp"
#include "glyphgrid/parallel.hpp"
#include "glyphgrid/png_io.hpp"
#include "glyphgrid/rng.hpp"

namespace glyphgrid {

namespace {

int argmax(const Tensor& probs) {
  int best = 0;
  for (int k = 1; k < probs.shape[0]; ++k) {
    if (probs.data[k] > probs.data[best]) best = k;
  }
  return best;
}

void check_compatible(const Model& model, const LoadedDataset& data) {
  if (data.images.empty()) throw MismatchError("dataset split is empty");
  if (data.image_side != model.config.input_side) {
    throw MismatchError("dataset images are " + std::to_string(data.image_side) +
                        "px but the model expects " + std::to_string(model.config.input_side) +
                        "px");
  }
  if (data.num_classes != model.config.num_classes) {
    throw MismatchError("dataset has " + std::to_string(data.num_classes) +
                        " classes but the model has " +
                        std::to_string(model.config.num_classes));
  }
}

void apply_update(Model& model, const Gradients& delta, double alpha) {
  for (std::size_t b = 0; b < model.conv.size(); ++b) {
    model.conv[b].kernels.data += alpha * delta.conv[b].kernels.data;
    model.conv[b].bias.data += alpha * delta.conv[b].bias.data;
  }
  model.dense.weights.data += alpha * delta.dense.weights.data;
  model.dense.bias.data += alpha * delta.dense.bias.data;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must be in [0,1)");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
}

LoadedDataset load_split(const std::filesystem::path& manifest_path, const std::string& split) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const auto it = manifest.splits.find(split);
  if (it == manifest.splits.end() || it->second.samples.empty()) {
    throw MismatchError("manifest has no samples for split '" + split + "'");
  }

  const std::filesystem::path root = manifest_path.parent_path();
  const SplitManifest& entries = it->second;

  LoadedDataset data;
  data.num_classes = manifest.num_classes;
  data.image_side = manifest.config.image_size;
  data.config_hash = config_hash(manifest);
  data.images.resize(entries.samples.size());
  data.labels.resize(entries.samples.size());

  parallel_for(entries.samples.size(), [&](std::size_t i) {
    const ManifestEntry& entry = entries.samples[i];
    if (entry.label < 1 || entry.label > manifest.num_classes) {
      throw MismatchError("manifest label " + std::to_string(entry.label) + " out of range 1.." +
                          std::to_string(manifest.num_classes));
    }
    ImageU8 image = read_png(root / entry.path);
    if (image.rows() != data.image_side || image.cols() != data.image_side) {
      throw MismatchError(entry.path + ": image is " + std::to_string(image.rows()) + "x" +
                          std::to_string(image.cols()) + " but the manifest config says " +
                          std::to_string(data.image_side));
    }
    data.images[i] = std::move(image);
    data.labels[i] = entry.label - 1;
  });
  return data;
}

TrainResult train(Model model, const LoadedDataset& data, const TrainConfig& config,
                  std::ostream* log_stream) {
  config.validate();
  check_compatible(model, data);
  model.dataset_hash = data.config_hash;

  const std::size_t n = data.images.size();
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);

  Xoshiro256ss rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  Gradients velocity = zeros_like(model);
  Gradients batch_grad = zeros_like(model);
  std::vector<Gradients> slot;
  for (std::size_t i = 0; i < std::min(batch_size, n); ++i) slot.push_back(zeros_like(model));
  std::vector<double> slot_loss(slot.size());
  std::vector<char> slot_correct(slot.size());

  TrainResult result;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < n; begin += batch_size) {
      const std::size_t count = std::min(batch_size, n - begin);

      parallel_for(
          count,
          [&](std::size_t i) {
            const std::size_t sample = order[begin + i];
            const Tensor input = image_to_tensor(data.images[sample]);
            const ForwardCache cache = forward(model, input);
            slot[i].set_zero();
            Tensor probs;
            slot_loss[i] =
                backward(model, cache, data.labels[sample], slot[i], &probs);
            slot_correct[i] = argmax(probs) == data.labels[sample] ? 1 : 0;
          },
          config.threads);

      // Reduce in slot order so thread scheduling never changes the sum.
      batch_grad.set_zero();
      for (std::size_t i = 0; i < count; ++i) {
        batch_grad.accumulate(slot[i]);
        loss_sum += slot_loss[i];
        correct += slot_correct[i];
      }
      batch_grad.scale(1.0 / static_cast<double>(count));

      velocity.scale(config.momentum);
      velocity.accumulate(batch_grad);
      apply_update(model, velocity, -config.learning_rate);
    }

    EpochLog log;
    log.epoch = epoch;
    log.loss = loss_sum / static_cast<double>(n);
    log.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    log.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    if (log_stream) {
      *log_stream << nlohmann::json{{"accuracy", log.accuracy},
                                    {"epoch", log.epoch},
                                    {"loss", log.loss},
                                    {"wall_ms", log.wall_ms}}
                         .dump()
                  << '\n';
    }
    result.log.push_back(log);
  }

  result.model = std::move(model);
  return result;
}

EvalResult evaluate(const Model& model, const LoadedDataset& data, unsigned threads) {
  check_compatible(model, data);
  if (!model.dataset_hash.empty() && model.dataset_hash != data.config_hash) {
    throw MismatchError("dataset config hash " + data.config_hash +
                        " does not match the hash the model was trained on (" +
                        model.dataset_hash + ")");
  }

  const std::size_t n = data.images.size();
  std::vector<int> predicted(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        const ForwardCache cache = forward(model, image_to_tensor(data.images[i]));
        predicted[i] = argmax(softmax_xent(cache.logits, 0).probs);
      },
      threads);

  EvalResult result;
  const int k = model.config.num_classes;
  result.confusion = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < n; ++i) result.confusion(data.labels[i], predicted[i]) += 1;
  result.total = n;
  result.accuracy =
      static_cast<double>(result.confusion.trace()) / static_cast<double>(n);
  return result;
}

Prediction predict(const Model& model, std::string_view text, const LayoutConfig& layout,
                   const Font& font, bool allow_mismatch) {
  layout.validate();
  if (!allow_mismatch && !model.dataset_hash.empty() &&
      config_hash(layout, font.content_hash()) != model.dataset_hash) {
    throw MismatchError(
        "layout/font do not hash to the model's training dataset config; "
        "pass the override flag to predict anyway");
  }

  const ImageU8 image = render(plan_layout(text, layout), font, layout);
  const ForwardCache cache = forward(model, image_to_tensor(image));

  Prediction prediction;
  prediction.probs = softmax_xent(cache.logits, 0).probs;
  prediction.class_id = argmax(prediction.probs);
  return prediction;
}

}  // namespace glyphgrid
