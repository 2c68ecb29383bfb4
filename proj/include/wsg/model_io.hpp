#pragma once

#include <string>
#include <vector>

#include "wsg/feature_extractor.hpp"
#include "wsg/linear_svm.hpp"
#include "wsg/rff.hpp"

namespace wsg {

// Everything needed to run the full pipeline: extractor and RFF configs plus
// the trained linear layer. G and b are regenerated from the seed on load.
struct ModelBundle {
  ExtractorConfig extractor;
  int channel_count = 3;
  ColorMode color_mode = ColorMode::Yuv;
  RffConfig rff;
  uint8_t prng_id = kPrngMt19937BoxMuller;
  std::vector<std::string> class_names;
  LinearModel linear;
};

// Binary layout (little-endian):
//   magic "WSG1", version u32,
//   J u32, R u32, D u32, pool_factor u32, scale_rule u8,
//   scale count u8 + image scales u32 each,
//   channel count u32, color mode u8,
//   m_tilde u32, gamma f32, seed u64, prng id u8,
//   K u32, class names (u32 length + UTF-8 bytes each),
//   W as K x m_tilde f32 row-major, v as K f32,
//   FNV-1a 64 checksum over the W and v bytes.
constexpr uint32_t kModelFormatVersion = 1;

void serialize_model(const ModelBundle& bundle, const std::string& path);
ModelBundle deserialize_model(const std::string& path);

uint64_t fnv1a64(const void* data, size_t len, uint64_t state = 0xcbf29ce484222325ull);

}  // namespace wsg
