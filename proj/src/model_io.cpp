#include "wsg/model_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace wsg {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'G', '1'};

// All multi-byte fields are little-endian on disk.
template <typename T>
void put(std::string& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (size_t k = 0; k < sizeof(T); ++k) buf.push_back(static_cast<char>(bytes[k]));
}

class Reader {
public:
  Reader(const std::string& data) : data_(data) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) throw Error("model file truncated");
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_bytes(size_t n) {
    if (pos_ + n > data_.size()) throw Error("model file truncated");
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  size_t pos() const { return pos_; }

private:
  const std::string& data_;
  size_t pos_ = 0;
};

}  // namespace

uint64_t fnv1a64(const void* data, size_t len, uint64_t state) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t k = 0; k < len; ++k) {
    state ^= p[k];
    state *= 0x100000001b3ull;
  }
  return state;
}

void serialize_model(const ModelBundle& bundle, const std::string& path) {
  const LinearModel& lm = bundle.linear;
  if (lm.class_count < 1 || lm.feature_dim != bundle.rff.m_tilde)
    throw Error("serialize_model: inconsistent model dimensions");
  if (static_cast<int>(bundle.class_names.size()) != lm.class_count)
    throw Error("serialize_model: class name count mismatch");

  std::string buf;
  buf.append(kMagic, 4);
  put<uint32_t>(buf, kModelFormatVersion);
  put<uint32_t>(buf, static_cast<uint32_t>(bundle.extractor.levels));
  put<uint32_t>(buf, static_cast<uint32_t>(bundle.extractor.orientations));
  put<uint32_t>(buf, static_cast<uint32_t>(bundle.extractor.depth));
  put<uint32_t>(buf, static_cast<uint32_t>(bundle.extractor.pool_factor));
  put<uint8_t>(buf, static_cast<uint8_t>(bundle.extractor.scale_rule));
  put<uint8_t>(buf, static_cast<uint8_t>(bundle.extractor.image_scales.size()));
  for (int s : bundle.extractor.image_scales) put<uint32_t>(buf, static_cast<uint32_t>(s));
  put<uint32_t>(buf, static_cast<uint32_t>(bundle.channel_count));
  put<uint8_t>(buf, static_cast<uint8_t>(bundle.color_mode));
  put<uint32_t>(buf, static_cast<uint32_t>(bundle.rff.m_tilde));
  put<float>(buf, static_cast<float>(bundle.rff.gamma));
  put<uint64_t>(buf, bundle.rff.seed);
  put<uint8_t>(buf, bundle.prng_id);
  put<uint32_t>(buf, static_cast<uint32_t>(lm.class_count));
  for (const auto& name : bundle.class_names) {
    put<uint32_t>(buf, static_cast<uint32_t>(name.size()));
    buf.append(name);
  }

  size_t payload_start = buf.size();
  for (float w : lm.weights) put<float>(buf, w);
  for (float v : lm.bias) put<float>(buf, v);
  uint64_t checksum = fnv1a64(buf.data() + payload_start, buf.size() - payload_start);
  put<uint64_t>(buf, checksum);

  // Write via a temp file so a failed run never leaves a partial model.
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open model file for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("failed writing model file: " + path);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("failed to finalize model file: " + path);
  }
}

ModelBundle deserialize_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Reader r(data);
  if (r.get_bytes(4) != std::string(kMagic, 4))
    throw Error("bad model magic (not a WSG1 model file)");
  uint32_t version = r.get<uint32_t>();
  if (version != kModelFormatVersion)
    throw Error("unsupported model format version " + std::to_string(version));

  ModelBundle b;
  b.extractor.levels = static_cast<int>(r.get<uint32_t>());
  b.extractor.orientations = static_cast<int>(r.get<uint32_t>());
  b.extractor.depth = static_cast<int>(r.get<uint32_t>());
  b.extractor.pool_factor = static_cast<int>(r.get<uint32_t>());
  b.extractor.scale_rule = static_cast<ScaleRule>(r.get<uint8_t>());
  int n_scales = r.get<uint8_t>();
  b.extractor.image_scales.clear();
  for (int k = 0; k < n_scales; ++k)
    b.extractor.image_scales.push_back(static_cast<int>(r.get<uint32_t>()));
  b.channel_count = static_cast<int>(r.get<uint32_t>());
  b.color_mode = static_cast<ColorMode>(r.get<uint8_t>());
  b.rff.m_tilde = static_cast<int>(r.get<uint32_t>());
  b.rff.gamma = r.get<float>();
  b.rff.seed = r.get<uint64_t>();
  b.prng_id = r.get<uint8_t>();
  if (b.prng_id != kPrngMt19937BoxMuller)
    throw Error("unknown PRNG identifier in model file");
  int K = static_cast<int>(r.get<uint32_t>());
  if (K < 1 || K > 4096) throw Error("implausible class count in model file");
  for (int k = 0; k < K; ++k) {
    uint32_t len = r.get<uint32_t>();
    if (len > 4096) throw Error("implausible class name length");
    b.class_names.push_back(r.get_bytes(len));
  }

  size_t payload_start = r.pos();
  size_t payload_len = (static_cast<size_t>(K) * b.rff.m_tilde + K) * sizeof(float);
  b.linear.class_count = K;
  b.linear.feature_dim = b.rff.m_tilde;
  b.linear.weights.resize(static_cast<size_t>(K) * b.rff.m_tilde);
  for (auto& w : b.linear.weights) w = r.get<float>();
  b.linear.bias.resize(K);
  for (auto& v : b.linear.bias) v = r.get<float>();
  uint64_t stored = r.get<uint64_t>();
  uint64_t actual = fnv1a64(data.data() + payload_start, payload_len);
  if (stored != actual) throw Error("model checksum mismatch (corrupted file)");

  b.extractor.validate();
  b.rff.validate();
  return b;
}

}  // namespace wsg
