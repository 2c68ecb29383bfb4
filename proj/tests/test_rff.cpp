#include <doctest.h>

#include <cmath>
#include <random>

#include "wsg/rff.hpp"

using namespace wsg;

namespace {

std::vector<double> random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t k = 0; k < a.size(); ++k) d += a[k] * b[k];
  return d;
}

double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y,
                  double gamma) {
  double d2 = 0;
  for (size_t k = 0; k < x.size(); ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
  return std::exp(-gamma * gamma * d2 / 2.0);
}

// Monte-Carlo oracle for E[cos(gamma * w . delta)] with w standard normal,
// independent of the projection implementation.
double mc_kernel(const std::vector<double>& x, const std::vector<double>& y,
                 double gamma, int trials, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double acc = 0;
  for (int t = 0; t < trials; ++t) {
    double proj = 0;
    for (size_t k = 0; k < x.size(); ++k) proj += normal(rng) * (x[k] - y[k]);
    acc += std::cos(gamma * proj);
  }
  return acc / trials;
}

}  // namespace

TEST_CASE("generation is a deterministic function of the seed") {
  RffConfig c{64, 0.5, 1234};
  RffProjection a = rff_generate(c, 10);
  RffProjection b = rff_generate(c, 10);
  CHECK(a.G == b.G);
  CHECK(a.b == b.b);
}

TEST_CASE("different seeds give almost everywhere different projections") {
  RffConfig c{128, 0.5, 1};
  RffProjection a = rff_generate(c, 16);
  c.seed = 2;
  RffProjection b = rff_generate(c, 16);
  size_t same = 0;
  for (size_t k = 0; k < a.G.size(); ++k)
    if (a.G[k] == b.G[k]) ++same;
  CHECK(same <= a.G.size() / 100);
}

TEST_CASE("projection sample statistics") {
  RffConfig c{5000, 1.0, 42};
  RffProjection proj = rff_generate(c, 309);
  CHECK(proj.G.size() == 1545000);
  double mean = 0;
  for (float g : proj.G) mean += g;
  mean /= static_cast<double>(proj.G.size());
  double var = 0;
  for (float g : proj.G) var += (g - mean) * (g - mean);
  var /= static_cast<double>(proj.G.size());
  CHECK(std::fabs(mean) <= 4.0 / std::sqrt(static_cast<double>(proj.G.size())));
  CHECK(std::fabs(var - 1.0) <= 0.05);
  for (double phase : proj.b) {
    CHECK(phase >= 0.0);
    CHECK(phase < 2 * M_PI);
  }
}

TEST_CASE("invalid configuration rejected") {
  CHECK_THROWS_AS(rff_generate(RffConfig{0, 1.0, 1}, 4), Error);
  CHECK_THROWS_AS(rff_generate(RffConfig{4, -1.0, 1}, 4), Error);
  CHECK_THROWS_AS(rff_generate(RffConfig{4, 1.0, 1}, 0), Error);
}

TEST_CASE("transform range and dimension checks") {
  RffConfig c{50, 2.0, 3};
  RffProjection proj = rff_generate(c, 8);
  std::mt19937_64 rng(9);
  std::vector<double> x = random_vec(8, rng);
  std::vector<double> phi = rff_transform(x, proj, c.gamma);
  double bound = std::sqrt(2.0 / 50);
  CHECK(phi.size() == 50);
  for (double v : phi) {
    CHECK(v >= -bound - 1e-12);
    CHECK(v <= bound + 1e-12);
  }
  CHECK_THROWS_AS(rff_transform(random_vec(7, rng), proj, c.gamma), Error);
}

TEST_CASE("gamma -> 0 limit drops the data dependence") {
  RffConfig c{32, 1.0, 5};
  RffProjection proj = rff_generate(c, 6);
  std::mt19937_64 rng(11);
  std::vector<double> x = random_vec(6, rng);
  std::vector<double> phi = rff_transform(x, proj, 1e-300);
  double scale = std::sqrt(2.0 / 32);
  for (int k = 0; k < 32; ++k)
    CHECK(phi[k] == doctest::Approx(scale * std::cos(proj.b[k])));
}

TEST_CASE("inner products concentrate around the RBF kernel") {
  const int m_tilde = 5000, m = 20;
  const double gamma = 0.7;
  RffProjection proj = rff_generate(RffConfig{m_tilde, gamma, 77}, m);
  std::mt19937_64 rng(123);

  double mean_err = 0, max_err = 0;
  const int pairs = 200;
  for (int t = 0; t < pairs; ++t) {
    std::vector<double> x = random_vec(m, rng, 0.5);
    std::vector<double> y = random_vec(m, rng, 0.5);
    double approx = dot(rff_transform(x, proj, gamma), rff_transform(y, proj, gamma));
    double exact = rbf_kernel(x, y, gamma);
    double err = std::fabs(approx - exact);
    mean_err += err;
    max_err = std::max(max_err, err);
  }
  mean_err /= pairs;
  CHECK(mean_err <= 0.02);
  CHECK(max_err <= 0.08);
}

TEST_CASE("analytic kernel matches the Monte-Carlo expectation oracle") {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 3; ++t) {
    std::vector<double> x = random_vec(8, rng, 0.5);
    std::vector<double> y = random_vec(8, rng, 0.5);
    double exact = rbf_kernel(x, y, 0.9);
    double mc = mc_kernel(x, y, 0.9, 200000, 1000 + t);
    CHECK(mc == doctest::Approx(exact).epsilon(0.03));
  }
}

TEST_CASE("self-similarity concentrates at 1") {
  const int m_tilde = 5000;
  RffProjection proj = rff_generate(RffConfig{m_tilde, 1.3, 8}, 12);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> x = random_vec(12, rng);
    std::vector<double> phi = rff_transform(x, proj, 1.3);
    double self = dot(phi, phi);
    CHECK(self >= 0.9);
    CHECK(self <= 1.1);
  }
}

TEST_CASE("transform depends on the input only through G * x") {
  // Rank-deficient construction: append a zero column to G's action by
  // duplicating a coordinate with canceling weights.
  const int m = 6, m_tilde = 40;
  RffProjection proj = rff_generate(RffConfig{m_tilde, 1.0, 31}, m);
  // Build x and x' with G x == G x' by moving mass along the kernel of a
  // rank-deficient modified projection: set two columns of G equal.
  for (int k = 0; k < m_tilde; ++k)
    proj.G[static_cast<size_t>(k) * m + 1] = proj.G[static_cast<size_t>(k) * m + 0];
  std::mt19937_64 rng(77);
  std::vector<double> x = random_vec(m, rng);
  std::vector<double> x2 = x;
  x2[0] += 0.37;  // shift mass between the duplicated coordinates
  x2[1] -= 0.37;
  std::vector<double> a = rff_transform(x, proj, 0.8);
  std::vector<double> b = rff_transform(x2, proj, 0.8);
  for (int k = 0; k < m_tilde; ++k) CHECK(a[k] == doctest::Approx(b[k]));
}
