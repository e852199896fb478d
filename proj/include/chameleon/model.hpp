#pragma once

// Small feed-forward multi-label scorer: rectifier hidden layers, per-label
// sigmoid outputs. The shape is the same for every training scheme; only the
// weights differ.
//
// File format (little-endian):
//   "CHAM" | u32 format version | u32 header length | header JSON |
//   f64 tensors (per layer: weights row-major out x in, then bias) |
//   u32 CRC32 of all preceding bytes

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/rng.hpp"

namespace chameleon {

inline constexpr std::uint32_t kModelFormatVersion = 1;
inline constexpr char kModelMagic[4] = {'C', 'H', 'A', 'M'};

struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;

  friend bool operator==(const Layer&, const Layer&) = default;
};

struct Model {
  std::vector<std::string> vocab;
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden;
  std::vector<Layer> layers;
  int version = 0;
  std::string trained_for = "generic";
  std::string scheme = "generic";
  double theta = kDefaultTheta;
  std::uint64_t seed = 0;

  std::size_t output_dim() const { return vocab.size(); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
  }

  bool same_shape(const Model& o) const {
    if (vocab != o.vocab || input_dim != o.input_dim || hidden != o.hidden || layers.size() != o.layers.size())
      return false;
    for (std::size_t i = 0; i < layers.size(); ++i)
      if (layers[i].in != o.layers[i].in || layers[i].out != o.layers[i].out) return false;
    return true;
  }

  friend bool operator==(const Model&, const Model&) = default;
};

/// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
inline Model init_model(std::vector<std::string> vocab, std::size_t input_dim, std::vector<std::size_t> hidden,
                        std::uint64_t seed) {
  CHAMELEON_REQUIRE(input_dim > 0, ErrorCode::InvalidInput, "input dimension must be > 0");
  CHAMELEON_REQUIRE(!vocab.empty(), ErrorCode::InvalidInput, "vocabulary must be non-empty");
  for (auto h : hidden) CHAMELEON_REQUIRE(h > 0, ErrorCode::InvalidInput, "hidden widths must be > 0");
  Model m;
  m.vocab = std::move(vocab);
  m.input_dim = input_dim;
  m.hidden = std::move(hidden);
  m.seed = seed;
  Rng rng(mix_seed(seed, 0x1417));
  std::size_t fan_in = input_dim;
  std::vector<std::size_t> widths = m.hidden;
  widths.push_back(m.vocab.size());
  for (auto width : widths) {
    Layer l;
    l.in = fan_in;
    l.out = width;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    l.weights.resize(l.in * l.out);
    for (auto& w : l.weights) w = rng.uniform(-bound, bound);
    l.bias.assign(l.out, 0.0);
    m.layers.push_back(std::move(l));
    fan_in = width;
  }
  return m;
}

inline double sigmoid(double z) {
  // keep outputs strictly inside (0,1)
  constexpr double lo = 1e-15;
  const double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return std::clamp(s, lo, 1.0 - lo);
}

/// Per-layer activations kept for backpropagation; acts[0] is the input.
struct ForwardTrace {
  std::vector<std::vector<double>> acts;
  const std::vector<double>& scores() const { return acts.back(); }
};

inline ForwardTrace forward_trace(const Model& model, std::span<const double> features) {
  CHAMELEON_REQUIRE(features.size() == model.input_dim, ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(model.input_dim) + " features, got " + std::to_string(features.size()));
  ForwardTrace t;
  t.acts.emplace_back(features.begin(), features.end());
  for (std::size_t li = 0; li < model.layers.size(); ++li) {
    const Layer& l = model.layers[li];
    const bool last = li + 1 == model.layers.size();
    const auto& x = t.acts.back();
    std::vector<double> y(l.out);
    for (std::size_t o = 0; o < l.out; ++o) {
      double z = l.bias[o];
      const double* row = &l.weights[o * l.in];
      for (std::size_t i = 0; i < l.in; ++i) z += row[i] * x[i];
      y[o] = last ? sigmoid(z) : (z > 0 || std::isnan(z) ? z : 0.0);
    }
    t.acts.push_back(std::move(y));
  }
  return t;
}

inline std::vector<double> forward(const Model& model, std::span<const double> features) {
  auto t = forward_trace(model, features);
  return std::move(t.acts.back());
}

/// Canonical scored output over the whole vocabulary (no threshold applied).
inline ApiOutput to_api_output(const std::vector<std::string>& vocab, std::span<const double> scores) {
  std::vector<LabelScore> items;
  items.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) items.push_back({vocab[i], scores[i]});
  return ApiOutput::from_labels(std::move(items));
}

// ---------------------------------------------------------------------------
// Serialization

namespace model_detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}
inline double get_f64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return std::bit_cast<double>(v);
}
inline std::uint32_t crc32_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace model_detail

inline std::string serialize_model(const Model& m) {
  using namespace model_detail;
  json header;
  header["vocab"] = m.vocab;
  header["input_dim"] = m.input_dim;
  header["hidden"] = m.hidden;
  header["trained_for"] = m.trained_for;
  header["scheme"] = m.scheme;
  header["theta"] = m.theta;
  header["seed"] = m.seed;
  header["model_version"] = m.version;
  const std::string header_text = header.dump();

  std::string out(kModelMagic, 4);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out += header_text;
  for (const auto& l : m.layers) {
    for (double w : l.weights) put_f64(out, w);
    for (double b : l.bias) put_f64(out, b);
  }
  put_u32(out, crc32_of(out));
  return out;
}

/// All-or-nothing: a model is returned only if every check passes.
inline Model deserialize_model(std::string_view bytes) {
  using namespace model_detail;
  CHAMELEON_REQUIRE(bytes.size() >= 16 && std::memcmp(bytes.data(), kModelMagic, 4) == 0, ErrorCode::ModelFormat,
                    "not a model file (bad magic)");
  const std::uint32_t format = get_u32(bytes, 4);
  CHAMELEON_REQUIRE(format == kModelFormatVersion, ErrorCode::ModelFormat,
                    "unsupported version " + std::to_string(format));
  const std::uint32_t stored = get_u32(bytes, bytes.size() - 4);
  CHAMELEON_REQUIRE(stored == crc32_of(bytes.substr(0, bytes.size() - 4)), ErrorCode::ModelFormat,
                    "checksum mismatch");
  const std::uint32_t header_len = get_u32(bytes, 8);
  CHAMELEON_REQUIRE(12 + static_cast<std::size_t>(header_len) + 4 <= bytes.size(), ErrorCode::ModelFormat,
                    "truncated header");

  Model m;
  try {
    const json header = json::parse(bytes.substr(12, header_len));
    m.vocab = header.at("vocab").get<std::vector<std::string>>();
    m.input_dim = header.at("input_dim").get<std::size_t>();
    m.hidden = header.at("hidden").get<std::vector<std::size_t>>();
    m.trained_for = header.at("trained_for").get<std::string>();
    m.scheme = header.at("scheme").get<std::string>();
    m.theta = header.at("theta").get<double>();
    m.seed = header.at("seed").get<std::uint64_t>();
    m.version = header.at("model_version").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ModelFormat, std::string("bad model header: ") + e.what());
  }
  CHAMELEON_REQUIRE(m.input_dim > 0 && !m.vocab.empty(), ErrorCode::ModelFormat, "empty model dimensions");

  std::size_t at = 12 + header_len;
  const std::size_t end = bytes.size() - 4;
  std::size_t fan_in = m.input_dim;
  std::vector<std::size_t> widths = m.hidden;
  widths.push_back(m.vocab.size());
  for (auto width : widths) {
    Layer l;
    l.in = fan_in;
    l.out = width;
    const std::size_t need = (l.in * l.out + l.out) * 8;
    CHAMELEON_REQUIRE(at + need <= end, ErrorCode::ModelFormat, "truncated weights");
    l.weights.resize(l.in * l.out);
    for (auto& w : l.weights) {
      w = get_f64(bytes, at);
      at += 8;
    }
    l.bias.resize(l.out);
    for (auto& b : l.bias) {
      b = get_f64(bytes, at);
      at += 8;
    }
    for (double w : l.weights) CHAMELEON_REQUIRE(std::isfinite(w), ErrorCode::ModelFormat, "non-finite weight");
    for (double b : l.bias) CHAMELEON_REQUIRE(std::isfinite(b), ErrorCode::ModelFormat, "non-finite bias");
    m.layers.push_back(std::move(l));
    fan_in = width;
  }
  CHAMELEON_REQUIRE(at == end, ErrorCode::ModelFormat, "trailing bytes after weights");
  return m;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  CHAMELEON_REQUIRE(in.good(), ErrorCode::Io, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  CHAMELEON_REQUIRE(out.good(), ErrorCode::Io, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  CHAMELEON_REQUIRE(out.good(), ErrorCode::Io, "write failed for " + path.string());
}

inline void save_model(const Model& m, const std::filesystem::path& path) { write_file(path, serialize_model(m)); }
inline Model load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace chameleon
