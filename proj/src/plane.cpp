#include "wsg/plane.hpp"

namespace wsg {

Plane::Plane(int w, int h, double fill) : width(w), height(h) {
  if (w < 1 || h < 1) throw Error("Plane dimensions must be >= 1");
  values.assign(static_cast<size_t>(w) * h, fill);
}

double plane_energy(const Plane& p) {
  double e = 0;
  for (double v : p.values) e += v * v;
  return e;
}

Plane pad_circular(const Plane& p, int multiple) {
  if (multiple < 1) throw Error("pad multiple must be >= 1");
  int w = ((p.width + multiple - 1) / multiple) * multiple;
  int h = ((p.height + multiple - 1) / multiple) * multiple;
  if (w == p.width && h == p.height) return p;
  Plane out(w, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      out.at(i, j) = p.at(i % p.height, j % p.width);
  return out;
}

Plane crop(const Plane& p, int w, int h) {
  if (w > p.width || h > p.height) throw Error("crop target exceeds plane");
  if (w == p.width && h == p.height) return p;
  Plane out(w, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      out.at(i, j) = p.at(i, j);
  return out;
}

}  // namespace wsg
