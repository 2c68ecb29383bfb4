#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wsg/plane.hpp"

namespace wsg {

enum class Orientation : int { Horizontal = 0, Vertical = 1, Diagonal = 2, Approx = 3 };

struct Subband {
  int scale = 0;  // j in 1..J
  Orientation orientation = Orientation::Approx;
  Plane plane;
};

// Undecimated Haar decomposition: 3J detail subbands plus the level-J
// approximation, all at the input resolution.
struct SwtPyramid {
  int levels = 0;
  std::vector<Subband> details;  // ordered scale 1..J, orientation H, V, D
  Subband approx;

  const Plane& detail(int scale, Orientation r) const;
};

// Normalized so that |H(w)|^2 + |G(w)|^2 == 1 (tight frame, B = 1).
struct HaarKernels {
  std::array<double, 2> lowpass;   // (1/2, 1/2)
  std::array<double, 2> highpass;  // (1/2, -1/2)
};
HaarKernels haar_kernels();

// 2D stationary Haar transform, algorithme a trous, circular boundaries.
// Level-j filters are the base pair dilated by 2^(j-1); taps read samples
// at offsets {0, +dilation}.
SwtPyramid swt2d(const Plane& plane, int levels);

// Test oracle: same contract as swt2d, computed by explicit circular
// convolution with fully expanded equivalent filters (no a trous recursion).
SwtPyramid swt2d_direct(const Plane& plane, int levels);

// Level-J approximation only; equals swt2d(plane, levels).approx.
Plane lowpass_cascade(const Plane& plane, int levels);

// (||approx||^2 + sum ||detail||^2) / ||input||^2; 1 for these filters.
// Zero-energy input returns 1 with *degenerate set.
double bessel_energy_ratio(const SwtPyramid& pyr, const Plane& input,
                           bool* degenerate = nullptr);

struct OpReport {
  double swt_additions = 0;
  double chi_additions = 0;
  double abs_ops = 0;
  double interpolation_ops = 0;
  double total_ops = 0;
};

// Operation-count model for the feature extractor, per channel summed over
// channels:
//   swt_additions      = 6*W*H*J + (3/2)*W*H*R*J^2
//   chi_additions      = (1/2)*W*H*J*R^2*J^2
//   abs_ops            = W*H*R*J*(1 + R*J/4)
//   interpolation_ops  = 8 * W*H*(R*J+1)*R*J
OpReport nominal_op_count(int width, int height, int levels, int orientations,
                        int channels);

}  // namespace wsg
