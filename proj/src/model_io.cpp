#include "glyphgrid/model_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "glyphgrid/errors.hpp"

namespace glyphgrid {

namespace {

using nlohmann::json;

constexpr char kMagic[6] = {'G', 'G', 'S', 'C', 'M', '\n'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t value) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, 4);
}

void put_u64(std::ostream& out, std::uint64_t value) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) value |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return value;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return value;
}

void put_params(std::ostream& out, const Tensor& t) {
  for (Eigen::Index i = 0; i < t.data.size(); ++i) {
    put_u64(out, std::bit_cast<std::uint64_t>(t.data[i]));
  }
}

void get_params(std::istream& in, Tensor& t) {
  for (Eigen::Index i = 0; i < t.data.size(); ++i) {
    t.data[i] = std::bit_cast<double>(get_u64(in));
  }
}

std::uint64_t param_count(const Model& model) {
  std::uint64_t count = 0;
  for (const ConvLayer& layer : model.conv) {
    count += layer.kernels.data.size() + layer.bias.data.size();
  }
  return count + model.dense.weights.data.size() + model.dense.bias.data.size();
}

}  // namespace

void save_model(const Model& model, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());

  const json header = {{"config",
                        {{"conv_channels", model.config.conv_channels},
                         {"input_side", model.config.input_side},
                         {"num_classes", model.config.num_classes},
                         {"seed", model.config.seed}}},
                       {"dataset_hash", model.dataset_hash},
                       {"param_count", param_count(model)}};
  const std::string header_bytes = header.dump();

  out.write(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u64(out, header_bytes.size());
  out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
  for (const ConvLayer& layer : model.conv) {
    put_params(out, layer.kernels);
    put_params(out, layer.bias);
  }
  put_params(out, model.dense.weights);
  put_params(out, model.dense.bias);
  if (!out) throw IoError("short write to " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + sizeof(magic), kMagic)) {
    throw IoError(path.string() + ": not a glyphgrid model file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw IoError(path.string() + ": unsupported model format version " +
                  std::to_string(version));
  }
  const std::uint64_t header_len = get_u64(in);
  if (!in || header_len > (std::uint64_t{1} << 24)) {
    throw IoError(path.string() + ": corrupt model header");
  }
  std::string header_bytes(header_len, '\0');
  in.read(header_bytes.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw IoError(path.string() + ": truncated model header");

  ModelConfig config;
  std::string dataset_hash;
  std::uint64_t expected_params = 0;
  try {
    const json header = json::parse(header_bytes);
    const json& config_doc = header.at("config");
    config.conv_channels = config_doc.at("conv_channels").get<std::vector<int>>();
    config.input_side = config_doc.at("input_side").get<int>();
    config.num_classes = config_doc.at("num_classes").get<int>();
    config.seed = config_doc.at("seed").get<std::uint64_t>();
    dataset_hash = header.at("dataset_hash").get<std::string>();
    expected_params = header.at("param_count").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": malformed model header: " + e.what());
  }

  Model model = init_model(config);  // also validates config; data overwritten below
  model.dataset_hash = std::move(dataset_hash);
  if (param_count(model) != expected_params) {
    throw IoError(path.string() + ": header parameter count does not match the architecture");
  }
  for (ConvLayer& layer : model.conv) {
    get_params(in, layer.kernels);
    get_params(in, layer.bias);
  }
  get_params(in, model.dense.weights);
  get_params(in, model.dense.bias);
  if (!in) throw IoError(path.string() + ": truncated parameter data");
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw IoError(path.string() + ": trailing bytes after parameter data");
  }
  return model;
}

}  // namespace glyphgrid
