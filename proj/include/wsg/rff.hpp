#pragma once

#include <cstdint>
#include <vector>

#include "wsg/plane.hpp"

namespace wsg {

struct RffConfig {
  int m_tilde = 5000;
  double gamma = 1.0;
  uint64_t seed = 0;

  void validate() const;
};

// PRNG identifier persisted in the model format. The only scheme defined so
// far is mt19937_64 with Box-Muller normals and 53-bit uniform phases.
constexpr uint8_t kPrngMt19937BoxMuller = 1;

// Seed-determined random projection: G is m_tilde x m with i.i.d. standard
// normal entries (row-major generation order), b is m_tilde phases i.i.d.
// uniform on [0, 2*pi). Never stored; regenerated from the seed.
struct RffProjection {
  int m_tilde = 0;
  int input_dim = 0;
  std::vector<float> G;  // row-major, m_tilde rows of input_dim
  std::vector<double> b;
};

RffProjection rff_generate(const RffConfig& config, int input_dim);

// phi(F) = sqrt(2/m_tilde) * cos(gamma * G * F + b), elementwise cosine.
std::vector<double> rff_transform(const std::vector<double>& feature,
                                  const RffProjection& proj, double gamma);

}  // namespace wsg
