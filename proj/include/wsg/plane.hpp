#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsg {

// Thrown by all library operations on contract violations and I/O failures.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Single real-valued raster plane, row-major, indexed (i, j) = (row, col).
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0);

  double& at(int i, int j) { return values[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * width + j]; }
  size_t size() const { return values.size(); }

  bool same_shape(const Plane& o) const { return width == o.width && height == o.height; }
};

enum class ColorMode { Raw = 0, Yuv = 1 };

// Multi-channel image; all channels share dimensions, values in [0,1].
struct Image {
  std::vector<Plane> channels;
  int width() const { return channels.empty() ? 0 : channels[0].width; }
  int height() const { return channels.empty() ? 0 : channels[0].height; }
};

double plane_energy(const Plane& p);

// Circular pad on right/bottom so both dimensions are divisible by multiple.
Plane pad_circular(const Plane& p, int multiple);
Plane crop(const Plane& p, int w, int h);

}  // namespace wsg
