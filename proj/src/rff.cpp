#include "wsg/rff.hpp"

#include <cmath>
#include <random>

namespace wsg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform on [0, 1) with 53-bit resolution; fixed mapping so the stream is
// stable across standard library versions.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller over the fixed uniform mapping; consumes two variates per pair.
class NormalStream {
public:
  explicit NormalStream(std::mt19937_64& rng) : rng_(rng) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(rng_);
    while (u1 <= 0.0) u1 = uniform01(rng_);
    double u2 = uniform01(rng_);
    double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
  }

private:
  std::mt19937_64& rng_;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace

void RffConfig::validate() const {
  if (m_tilde < 1) throw Error("RffConfig: m_tilde must be >= 1");
  if (!(gamma > 0)) throw Error("RffConfig: gamma must be positive");
}

RffProjection rff_generate(const RffConfig& config, int input_dim) {
  config.validate();
  if (input_dim < 1) throw Error("rff_generate: input dimension must be >= 1");
  RffProjection proj;
  proj.m_tilde = config.m_tilde;
  proj.input_dim = input_dim;
  proj.G.resize(static_cast<size_t>(config.m_tilde) * input_dim);
  proj.b.resize(config.m_tilde);

  std::mt19937_64 rng(config.seed);
  NormalStream normals(rng);
  for (auto& g : proj.G) g = static_cast<float>(normals.next());
  for (auto& phase : proj.b) phase = kTwoPi * uniform01(rng);
  return proj;
}

std::vector<double> rff_transform(const std::vector<double>& feature,
                                  const RffProjection& proj, double gamma) {
  if (static_cast<int>(feature.size()) != proj.input_dim)
    throw Error("rff_transform: feature dimension mismatch");
  const double scale = std::sqrt(2.0 / proj.m_tilde);
  std::vector<double> phi(proj.m_tilde);
  const int m = proj.input_dim;
  for (int k = 0; k < proj.m_tilde; ++k) {
    const float* row = &proj.G[static_cast<size_t>(k) * m];
    double dot = 0;
    for (int d = 0; d < m; ++d) dot += row[d] * feature[d];
    phi[k] = scale * std::cos(gamma * dot + proj.b[k]);
  }
  return phi;
}

}  // namespace wsg
